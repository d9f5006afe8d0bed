//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export has a plain Rust twin returning `Result<String, String>` so
//! the logic can be tested natively.

use lee_embed::embedding::{distance_profile, lower_bound_gap, Homomorphism};
use lee_embed::lee::f_lower_bound;
use lee_embed::planar::optimal_hom_2d;
use lee_embed::render::render_grid_with_summary;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest order the page accepts; keeps the BFS instant.
pub const MAX_ORDER: u64 = 100_000;

fn ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("not an integer: {t:?}")))
        .collect()
}

fn cyclic(k: u32, images: &str) -> Result<Homomorphism, String> {
    if k == 0 || k as u64 > MAX_ORDER {
        return Err(format!("order must be in 1..={MAX_ORDER}"));
    }
    Homomorphism::cyclic(k as u64, &ints(images)?).map_err(|e| e.to_string())
}

/// SVG of `phi: Z^2 -> Z_k` on `[-extent, extent]^2`, spheres outlined.
pub fn grid_svg(k: u32, images: &str, extent: u32, radii: &str) -> Result<String, String> {
    let phi = cyclic(k, images)?;
    let radii: Vec<u64> = ints(radii)?.into_iter().map(|r| r.max(0) as u64).collect();
    render_grid_with_summary(&phi, extent as u64, &radii).map(|(svg, _)| svg).map_err(|e| e.to_string())
}

/// Distance profile of `phi: Z^n -> Z_k` with the lower bound and gap.
pub fn profile(k: u32, images: &str) -> Result<String, String> {
    let phi = cyclic(k, images)?;
    let p = distance_profile(&phi);
    let n = phi.dim();
    let f = f_lower_bound(n, k as u64).map_err(|e| e.to_string())?;
    let gap = lower_bound_gap(&p, n).map_err(|e| e.to_string())?;
    let out = json!({
        "hom": phi,
        "embedding_number": p.embedding_number(),
        "layers": p.layer_sizes(),
        "covering_radius": p.covering_radius(),
        "f": f,
        "gap": gap,
        "optimal": gap == Some(0),
        "profile": p,
    });
    Ok(out.to_string())
}

/// The verified optimal embedding of `Z_k` into `Z^2`.
pub fn optimal_2d(k: u32) -> Result<String, String> {
    if k == 0 || k as u64 > MAX_ORDER {
        return Err(format!("order must be in 1..={MAX_ORDER}"));
    }
    let e = optimal_hom_2d(k as u64).map_err(|e| e.to_string())?;
    serde_json::to_string(&e).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = gridSvg)]
pub fn grid_svg_js(k: u32, images: &str, extent: u32, radii: &str) -> Result<String, JsValue> {
    grid_svg(k, images, extent, radii).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = profile)]
pub fn profile_js(k: u32, images: &str) -> Result<String, JsValue> {
    profile(k, images).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = optimal2d)]
pub fn optimal_2d_js(k: u32) -> Result<String, JsValue> {
    optimal_2d(k).map_err(|e| JsValue::from_str(&e))
}
