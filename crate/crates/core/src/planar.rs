//! Optimal embeddings of `Z_k` into `Z^2`.
//!
//! With `r = radius_for(2, k)` the generator pair is `(r, r + 1)` when
//! `2r^2 + 2r + 1 <= k <= 2r^2 + 4r` and `(r + 1, r + 2)` when
//! `2r^2 + 4r + 1 <= k < 2r^2 + 6r + 5`. Every construction is re-checked
//! with [`is_optimal`] before it is returned.

use serde::Serialize;

use crate::embedding::{embedding_number, is_optimal, EmbeddingNumber, Homomorphism, OptimalityChecker};
use crate::error::{Error, Result};
use crate::lee::{f_lower_bound, radius_for};

/// Which window of `[|S_{2,r}|, |S_{2,r+1}|)` the order falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanarCase {
    /// `k = 2r^2 + 2r + 1`.
    Perfect,
    /// `2r^2 + 2r + 1 < k <= 2r^2 + 4r`.
    Lower,
    /// `2r^2 + 4r + 1 <= k < 2r^2 + 6r + 5`.
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionSource {
    ClosedForm,
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarEmbedding {
    pub k: u64,
    pub r: u64,
    pub case: PlanarCase,
    pub source: ConstructionSource,
    pub hom: Homomorphism,
    pub embedding_number: u64,
}

pub fn planar_case(k: u64) -> Result<(u64, PlanarCase)> {
    let r = radius_for(2, k)?;
    let base = 2 * r * r + 2 * r + 1;
    let case = if k == base {
        PlanarCase::Perfect
    } else if k <= 2 * r * r + 4 * r {
        PlanarCase::Lower
    } else {
        PlanarCase::Upper
    };
    Ok((r, case))
}

/// The closed-form generator pair for `Z_k`, before verification.
pub fn closed_form_images(k: u64) -> Result<(u64, u64)> {
    let (r, case) = planar_case(k)?;
    Ok(match case {
        PlanarCase::Perfect | PlanarCase::Lower => (r, r + 1),
        PlanarCase::Upper => (r + 1, r + 2),
    })
}

/// A verified optimal homomorphism `Z^2 -> Z_k`.
///
/// If the closed form ever fails verification, pairs `1 <= a < b <= k/2`
/// are searched instead and a warning is logged.
pub fn optimal_hom_2d(k: u64) -> Result<PlanarEmbedding> {
    let (r, case) = planar_case(k)?;
    let (a, b) = closed_form_images(k)?;
    let hom = Homomorphism::cyclic(k, &[a as i64, b as i64])?;
    let (hom, source) = if is_optimal(&hom)? {
        (hom, ConstructionSource::ClosedForm)
    } else {
        log::warn!("closed form ({a}, {b}) is not optimal for Z_{k}; searching generator pairs");
        (fallback_search(k)?, ConstructionSource::Fallback)
    };
    let embedding_number = match embedding_number(&hom) {
        EmbeddingNumber::Finite(v) => v,
        EmbeddingNumber::Infinite => return Err(Error::ConstructionFailed(k)),
    };
    if embedding_number != f_lower_bound(2, k)? {
        return Err(Error::ConstructionFailed(k));
    }
    Ok(PlanarEmbedding { k, r, case, source, hom, embedding_number })
}

fn fallback_search(k: u64) -> Result<Homomorphism> {
    let mut checker = OptimalityChecker::new(2, k)?;
    for a in 1..=k / 2 {
        for b in a + 1..=k / 2 {
            let hom = Homomorphism::cyclic(k, &[a as i64, b as i64])?;
            if checker.check(&hom)? {
                return Ok(hom);
            }
        }
    }
    Err(Error::ConstructionFailed(k))
}

/// Values of `(x, y) -> r x + (r + 1) y` over the diagonal slice
/// `{(x, y) : |x| + |y| <= r, x + y = m}`, as an inclusive interval.
///
/// Returns an error when `m` is outside `[-r, r]` or the values are not
/// contiguous.
pub fn segment_image(r: u64, m: i64) -> Result<(i64, i64)> {
    let ri = r as i64;
    if m < -ri || m > ri {
        return Err(Error::InvalidArgument(format!("slice index {m} outside [-{r}, {r}]")));
    }
    let mut values: Vec<i64> = (-ri..=ri)
        .map(|x| (x, m - x))
        .filter(|(x, y)| x.abs() + y.abs() <= ri)
        .map(|(x, y)| ri * x + (ri + 1) * y)
        .collect();
    values.sort_unstable();
    if values.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::Precondition(format!("slice {m} of radius {r} is not a segment: {values:?}")));
    }
    Ok((values[0], *values.last().expect("slice is non-empty")))
}
