//! SVG pictures of planar homomorphisms `Z^2 -> G`.
//!
//! Each lattice point of `[-extent, extent]^2` is a labelled square, the
//! chosen Lee spheres are outlined, and the coset leader of every group
//! element (when it lies in the grid) is shaded.

use std::collections::HashSet;
use std::fmt::Write;

use serde::Serialize;

use crate::embedding::{distance_profile, Homomorphism};
use crate::error::{Error, Result};

const CELL: i64 = 40;
const MARGIN: i64 = 10;
/// Largest grid half-width accepted by [`render_grid`].
pub const MAX_EXTENT: u64 = 60;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridSummary {
    pub cells: usize,
    pub highlighted: usize,
    /// Leaders outside the grid, not drawn.
    pub hidden_witnesses: usize,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `phi` on `[-extent, extent]^2` with `S_{2,r}` outlined for each
/// `r` in `radii`.
pub fn render_grid(phi: &Homomorphism, extent: u64, radii: &[u64]) -> Result<String> {
    render_grid_with_summary(phi, extent, radii).map(|(svg, _)| svg)
}

pub fn render_grid_with_summary(phi: &Homomorphism, extent: u64, radii: &[u64]) -> Result<(String, GridSummary)> {
    if phi.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: phi.dim() });
    }
    if extent > MAX_EXTENT {
        return Err(Error::InvalidArgument(format!("extent {extent} exceeds {MAX_EXTENT}")));
    }
    let e = extent as i64;
    let side = (2 * e + 1) * CELL + 2 * MARGIN;
    // screen coordinates of the top-left corner of cell (x, y); y grows upwards
    let px = |x: i64| MARGIN + (x + e) * CELL;
    let py = |y: i64| MARGIN + (e - y) * CELL;

    let profile = distance_profile(phi);
    let mut leaders = HashSet::new();
    let mut hidden = 0;
    for (_, _, w) in profile.entries() {
        if let Some(w) = w {
            let c = w.coords();
            if c[0].abs() <= e && c[1].abs() <= e {
                leaders.insert((c[0], c[1]));
            } else {
                hidden += 1;
            }
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}" font-family="sans-serif" font-size="14">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&phi.to_string()));
    let _ = writeln!(
        out,
        "<style>.cell{{fill:#fff;stroke:#bbb}}.witness{{fill:#ffd966}}.origin{{stroke:#000;stroke-width:2}}\
         .sphere{{stroke:#c00;stroke-width:3;fill:none}}text{{text-anchor:middle;dominant-baseline:central}}</style>"
    );
    let mut cells = 0;
    for y in (-e..=e).rev() {
        for x in -e..=e {
            let mut class = String::from("cell");
            if leaders.contains(&(x, y)) {
                class.push_str(" witness");
            }
            if x == 0 && y == 0 {
                class.push_str(" origin");
            }
            let label = phi.apply_idx(&[x, y]);
            let label = phi.group().element_at(label);
            let _ = writeln!(
                out,
                r#"<rect class="{class}" x="{}" y="{}" width="{CELL}" height="{CELL}"/><text x="{}" y="{}">{}</text>"#,
                px(x),
                py(y),
                px(x) + CELL / 2,
                py(y) + CELL / 2,
                escape(&label.to_string())
            );
            cells += 1;
        }
    }
    for &r in radii {
        let r = r as i64;
        let inside = |x: i64, y: i64| x.abs() + y.abs() <= r;
        let mut d = String::new();
        for y in -e..=e {
            for x in -e..=e {
                if !inside(x, y) {
                    continue;
                }
                let (l, t) = (px(x), py(y));
                if !inside(x, y + 1) {
                    let _ = write!(d, "M{l} {t}h{CELL}");
                }
                if !inside(x, y - 1) {
                    let _ = write!(d, "M{l} {}h{CELL}", t + CELL);
                }
                if !inside(x - 1, y) {
                    let _ = write!(d, "M{l} {t}v{CELL}");
                }
                if !inside(x + 1, y) {
                    let _ = write!(d, "M{} {t}v{CELL}", l + CELL);
                }
            }
        }
        if !d.is_empty() {
            let _ = writeln!(out, r#"<path class="sphere" data-radius="{r}" d="{d}"/>"#);
        }
    }
    out.push_str("</svg>\n");
    let summary = GridSummary { cells, highlighted: leaders.len(), hidden_witnesses: hidden };
    Ok((out, summary))
}
