//! Packing bounds in exact rational arithmetic.
//!
//! A tile of volume `k` containing the continuous Lee sphere `L_{n,r}` also
//! contains the cross-polytope `P_{n,r}` of volume `(2r+1)^n / n!`. If a
//! lattice tiling by such tiles existed, the polytopes would pack with
//! density `V(P_{n,r}) / k`, so that ratio exceeding the packing efficiency
//! `alpha` rules the tiling out.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lee::sphere_size;

pub type Rational = BigRational;

/// Default upper end of threshold scans.
pub const SCAN_BOUND: u64 = 10_000;

/// Lattice packing efficiency of the regular octahedron.
pub fn octahedron_alpha() -> Rational {
    Rational::new(18.into(), 19.into())
}

/// `V(P_{n,r}) = (2r + 1)^n / n!`.
pub fn octahedron_volume(n: usize, r: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let num = num_traits::pow(BigInt::from(2 * r as u128 + 1), n);
    let den: BigInt = (1..=n as u64).map(BigInt::from).product();
    Ok(Rational::new(num, den))
}

/// Volume of `L_{n,r}`: one unit cube per word of `S_{n,r}`.
pub fn lee_sphere_volume(n: usize, r: u64) -> Result<u64> {
    sphere_size(n, r)
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if !alpha.is_positive() || *alpha > Rational::one() {
        return Err(Error::Precondition(format!("packing efficiency {alpha} outside (0, 1]")));
    }
    Ok(())
}

/// `V(P_{n,r}) / k > alpha` for `|S_{n,r}| <= k < |S_{n,r+1}|`.
pub fn volume_excludes_tiling(n: usize, r: u64, k: u64, alpha: &Rational) -> Result<bool> {
    check_alpha(alpha)?;
    let lo = sphere_size(n, r)?;
    let hi = sphere_size(n, r + 1)?;
    if k < lo || k >= hi {
        return Err(Error::Precondition(format!("k = {k} outside [{lo}, {hi}) for radius {r}")));
    }
    Ok(octahedron_volume(n, r)? / Rational::from_integer(k.into()) > *alpha)
}

/// `V(P_{n,r}) / (|S_{n,r+1}| - 1) - alpha`, the margin at the largest order
/// of the window. Positive means every order in the window is excluded.
pub fn exclusion_margin(n: usize, r: u64, alpha: &Rational) -> Result<Rational> {
    let k = sphere_size(n, r + 1)? - 1;
    Ok(octahedron_volume(n, r)? / Rational::from_integer(k.into()) - alpha)
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

fn ser_opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.collect_str(q),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub scan_bound: u64,
    /// Smallest radius whose window is excluded; `None` if no radius up to
    /// `scan_bound` is.
    pub threshold: Option<u64>,
    /// Exclusion holds for every radius from `threshold` to `scan_bound`.
    pub holds_through_bound: bool,
    /// First radius above the threshold where exclusion fails again, if any.
    pub first_relapse: Option<u64>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub margin_at_threshold: Option<Rational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub margin_below_threshold: Option<Rational>,
}

/// Scans `r = 0..=scan_bound` for the first excluded window and checks that
/// every later window up to the bound is excluded too.
pub fn threshold_scan(n: usize, alpha: &Rational, scan_bound: u64) -> Result<ThresholdReport> {
    check_alpha(alpha)?;
    let mut threshold = None;
    let mut first_relapse = None;
    for r in 0..=scan_bound {
        let excluded = exclusion_margin(n, r, alpha)?.is_positive();
        match (threshold, excluded) {
            (None, true) => threshold = Some(r),
            (Some(_), false) if first_relapse.is_none() => first_relapse = Some(r),
            _ => {}
        }
    }
    let margin_at_threshold = threshold.map(|t| exclusion_margin(n, t, alpha)).transpose()?;
    let margin_below_threshold = threshold.filter(|&t| t > 0).map(|t| exclusion_margin(n, t - 1, alpha)).transpose()?;
    Ok(ThresholdReport {
        n,
        alpha: alpha.clone(),
        scan_bound,
        threshold,
        holds_through_bound: threshold.is_some() && first_relapse.is_none(),
        first_relapse,
        margin_at_threshold,
        margin_below_threshold,
    })
}

/// The radius from which no linear quasi-perfect code in `Z^3` exists,
/// using the octahedron's packing efficiency `18/19`.
pub fn qpl3_threshold() -> Result<ThresholdReport> {
    threshold_scan(3, &octahedron_alpha(), SCAN_BOUND)
}

/// Smallest `r <= r_max` whose window is excluded, with `k_n = |S_{n,r}|`.
pub fn kn_bound_scan(n: usize, alpha: &Rational, r_max: u64) -> Result<Option<(u64, u64)>> {
    check_alpha(alpha)?;
    for r in 0..=r_max {
        if exclusion_margin(n, r, alpha)?.is_positive() {
            return Ok(Some((r, sphere_size(n, r)?)));
        }
    }
    Ok(None)
}

/// `V(P_{n,r}) / V(L_{n,r+1})`.
pub fn packing_ratio(n: usize, r: u64) -> Result<Rational> {
    Ok(octahedron_volume(n, r)? / Rational::from_integer(sphere_size(n, r + 1)?.into()))
}

impl ThresholdReport {
    /// The inequality at the threshold is strict, not an equality.
    pub fn strict_at_threshold(&self) -> bool {
        self.margin_at_threshold.as_ref().is_some_and(|m| m.is_positive())
    }
}
