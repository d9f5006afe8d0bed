//! Lee-metric geometry on `Z^n`: words, distances, spheres and the
//! combinatorial lower bound `f(n, k)` on embedding numbers.
//!
//! All counts are `u64` with checked arithmetic; an overflow is reported as
//! [`Error::Overflow`] and never wraps.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Word(Vec<i64>);

impl Word {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("a word needs at least one coordinate".into()));
        }
        Ok(Word(coords))
    }

    pub fn origin(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Word(vec![0; n])
    }

    /// The unit vector `e_i` (zero-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut w = Word::origin(n);
        w.0[i] = 1;
        w
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn lee_weight(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Adds `delta` to coordinate `i`.
    pub fn shifted(&self, i: usize, delta: i64) -> Word {
        let mut w = self.clone();
        w.0[i] += delta;
        w
    }

    pub fn checked_add(&self, other: &Word) -> Result<Word> {
        same_dim(self, other)?;
        Ok(Word(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn checked_sub(&self, other: &Word) -> Result<Word> {
        same_dim(self, other)?;
        Ok(Word(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }
}

impl TryFrom<Vec<i64>> for Word {
    type Error = Error;

    fn try_from(coords: Vec<i64>) -> Result<Self> {
        Word::new(coords)
    }
}

impl From<Word> for Vec<i64> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

fn same_dim(v: &Word, w: &Word) -> Result<()> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), found: w.dim() });
    }
    Ok(())
}

/// Lee (Manhattan) distance between two words of equal dimension.
pub fn lee_distance(v: &Word, w: &Word) -> Result<u64> {
    same_dim(v, w)?;
    Ok(v.0.iter().zip(&w.0).map(|(a, b)| a.abs_diff(*b)).sum())
}

/// Dimension and radius of a Lee sphere `S_{n,r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SphereSpec {
    pub n: usize,
    pub r: u64,
}

impl SphereSpec {
    pub fn size(&self) -> Result<u64> {
        sphere_size(self.n, self.r)
    }

    pub fn words(&self) -> Vec<Word> {
        enumerate_sphere(self.n, self.r)
    }
}

fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for j in 1..=k as u128 {
        // c * (n - j + 1) is divisible by j at every step
        c = c.checked_mul(n as u128 - j + 1).ok_or(Error::Overflow("binomial coefficient"))? / j;
    }
    u64::try_from(c).map_err(|_| Error::Overflow("binomial coefficient"))
}

/// Number of words of `Z^n` at Lee distance at most `r` from the origin:
/// `sum_j 2^j C(n, j) C(r, j)`.
pub fn sphere_size(n: usize, r: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let n = n as u64;
    let mut total: u64 = 0;
    for j in 0..=n.min(r) {
        let pow = 1u64.checked_shl(j as u32).ok_or(Error::Overflow("sphere size"))?;
        let term = pow
            .checked_mul(binomial(n, j)?)
            .and_then(|t| t.checked_mul(binomial(r, j).ok()?))
            .ok_or(Error::Overflow("sphere size"))?;
        total = total.checked_add(term).ok_or(Error::Overflow("sphere size"))?;
    }
    Ok(total)
}

/// Number of words at Lee distance exactly `d`.
pub fn shell_size(n: usize, d: u64) -> Result<u64> {
    let outer = sphere_size(n, d)?;
    if d == 0 {
        return Ok(outer);
    }
    Ok(outer - sphere_size(n, d - 1)?)
}

/// Words at Lee distance exactly `d` from the origin, in lexicographic order.
pub fn enumerate_shell(n: usize, d: u64) -> Vec<Word> {
    assert!(n >= 1, "dimension must be positive");
    let mut out = Vec::new();
    let mut buf = vec![0i64; n];
    fill_shell(&mut buf, 0, d as i64, &mut |w| out.push(Word(w.to_vec())));
    out
}

/// Words of `S_{n,r}`: shells in increasing distance, each lexicographic.
pub fn enumerate_sphere(n: usize, r: u64) -> Vec<Word> {
    (0..=r).flat_map(|d| enumerate_shell(n, d)).collect()
}

/// Calls `visit` on every word of the shell at distance `d`, lexicographically,
/// reusing one coordinate buffer.
pub(crate) fn for_each_in_shell(n: usize, d: u64, visit: &mut dyn FnMut(&[i64])) {
    let mut buf = vec![0i64; n];
    fill_shell(&mut buf, 0, d as i64, visit);
}

fn fill_shell(buf: &mut [i64], pos: usize, remaining: i64, visit: &mut dyn FnMut(&[i64])) {
    let last = buf.len() - 1;
    if pos == last {
        if remaining == 0 {
            buf[pos] = 0;
            visit(buf);
        } else {
            buf[pos] = -remaining;
            visit(buf);
            buf[pos] = remaining;
            visit(buf);
        }
        return;
    }
    for x in -remaining..=remaining {
        buf[pos] = x;
        fill_shell(buf, pos + 1, remaining - x.abs(), visit);
    }
    buf[pos] = 0;
}

/// The unique `r` with `|S_{n,r}| <= k < |S_{n,r+1}|`.
pub fn radius_for(n: usize, k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    // gallop to an upper bound, then bisect
    let mut hi: u64 = 1;
    while fits(n, hi, k)? {
        hi = hi.checked_mul(2).ok_or(Error::Overflow("radius"))?;
    }
    let mut lo = 0;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(n, mid, k)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn fits(n: usize, r: u64, k: u64) -> Result<bool> {
    match sphere_size(n, r) {
        Ok(s) => Ok(s <= k),
        Err(Error::Overflow(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `f(n, k)`: the smallest conceivable embedding number of a group of order
/// `k` in `Z^n`, obtained by filling the shells around the origin greedily.
pub fn f_lower_bound(n: usize, k: u64) -> Result<u64> {
    let r = radius_for(n, k)?;
    let mut total: u64 = 0;
    for i in 1..=r {
        let term = i.checked_mul(shell_size(n, i)?).ok_or(Error::Overflow("f(n,k)"))?;
        total = total.checked_add(term).ok_or(Error::Overflow("f(n,k)"))?;
    }
    let tail = (r + 1).checked_mul(k - sphere_size(n, r)?).ok_or(Error::Overflow("f(n,k)"))?;
    total.checked_add(tail).ok_or(Error::Overflow("f(n,k)"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Word {
        Word::new(c.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(lee_distance(&w(&[0, 0]), &w(&[0, 0])).unwrap(), 0);
        assert_eq!(lee_distance(&w(&[1, -2, 3]), &w(&[0, 0, 0])).unwrap(), 6);
        assert_eq!(lee_distance(&w(&[2, 0]), &w(&[-1, 5])).unwrap(), 8);
        assert!(matches!(lee_distance(&w(&[1]), &w(&[1, 2])), Err(Error::DimensionMismatch { expected: 1, found: 2 })));
    }

    #[test]
    fn empty_word_rejected() {
        assert!(Word::new(vec![]).is_err());
    }

    #[test]
    fn sphere_sizes() {
        for n in 1..6 {
            assert_eq!(sphere_size(n, 0).unwrap(), 1);
        }
        assert_eq!(sphere_size(3, 2).unwrap(), 25);
        assert_eq!(sphere_size(7, 2).unwrap(), 2 * 49 + 14 + 1);
        for r in 0..50u64 {
            assert_eq!(sphere_size(2, r).unwrap(), 2 * r * r + 2 * r + 1);
            // 3|S_{3,r}| = 4r^3 + 6r^2 + 8r + 3
            assert_eq!(3 * sphere_size(3, r).unwrap(), 4 * r.pow(3) + 6 * r * r + 8 * r + 3);
        }
    }

    #[test]
    fn sphere_size_overflow_is_reported() {
        assert!(matches!(sphere_size(60, u64::MAX / 2), Err(Error::Overflow(_))));
        assert!(sphere_size(0, 1).is_err());
    }

    #[test]
    fn shells() {
        assert_eq!(enumerate_shell(2, 0), vec![w(&[0, 0])]);
        assert_eq!(enumerate_shell(2, 1), vec![w(&[-1, 0]), w(&[0, -1]), w(&[0, 1]), w(&[1, 0])]);
        let s = enumerate_shell(3, 2);
        assert_eq!(s.len(), 18);
        assert!(s.windows(2).all(|p| p[0] < p[1]), "lexicographic order");
        assert!(s.iter().all(|x| x.lee_weight() == 2));
    }

    #[test]
    fn radius_examples() {
        assert_eq!(radius_for(2, 16).unwrap(), 2);
        assert_eq!(radius_for(2, 13).unwrap(), 2);
        assert_eq!(radius_for(2, 12).unwrap(), 1);
        assert_eq!(radius_for(5, 1).unwrap(), 0);
        assert_eq!(radius_for(3, 455).unwrap(), 6);
        assert_eq!(radius_for(1, 1_000_001).unwrap(), 500_000);
        assert!(radius_for(2, 0).is_err());
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_lower_bound(2, 16).unwrap(), 29);
        assert_eq!(f_lower_bound(4, 1).unwrap(), 0);
        assert_eq!(f_lower_bound(3, 25).unwrap(), 42);
        assert_eq!(f_lower_bound(2, 13).unwrap(), 20);
    }
}
