//! Finite abelian groups in invariant-factor form `Z_{d1} x ... x Z_{dt}`
//! with `d1 | d2 | ... | dt`.
//!
//! Elements are residue vectors. Internally most algorithms address elements
//! by their mixed-radix index (first factor most significant), so that
//! element `i` of `Z_k` is simply the residue `i` and index order coincides
//! with lexicographic order on residue vectors.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default bound for trial-division factorization.
pub const DEFAULT_FACTOR_LIMIT: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: u64,
}

/// A group element as residues modulo the owning group's invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residues.as_slice() {
            [r] => write!(f, "{r}"),
            rs => {
                f.write_str("(")?;
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{r}")?;
                }
                f.write_str(")")
            }
        }
    }
}

// Cyclic elements serialize as a bare number, others as a residue array.
impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.residues.as_slice() {
            [r] => s.serialize_u64(*r),
            rs => rs.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Scalar(u64),
            Vector(Vec<u64>),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Scalar(r) => GroupElement { residues: vec![r] },
            Repr::Vector(residues) => GroupElement { residues },
        })
    }
}

impl AbelianGroup {
    /// Builds a group from its invariant factors; each must be `>= 2` and
    /// divide the next one.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidArgument(format!("invariant factor {bad} is < 2")));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidArgument(format!(
                "invariant factors must form a divisibility chain ({} does not divide {})",
                w[0], w[1]
            )));
        }
        let order =
            factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d)).ok_or(Error::Overflow("group order"))?;
        Ok(AbelianGroup { factors, order })
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: Vec::new(), order: 1 }
    }

    /// `Z_k`; `k = 1` gives the trivial group.
    pub fn cyclic(k: u64) -> Result<Self> {
        match k {
            0 => Err(Error::InvalidArgument("group order must be positive".into())),
            1 => Ok(Self::trivial()),
            _ => Self::new(vec![k]),
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { residues: vec![0; self.rank()] }
    }

    /// Element with the given residues, each reduced modulo its factor.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement> {
        if residues.len() != self.rank() {
            return Err(Error::GroupMismatch { element: format!("{residues:?}"), group: self.to_string() });
        }
        Ok(GroupElement {
            residues: residues.iter().zip(&self.factors).map(|(&x, &d)| x.rem_euclid(d as i64) as u64).collect(),
        })
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.residues.len() == self.rank() && g.residues.iter().zip(&self.factors).all(|(r, d)| r < d)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::GroupMismatch { element: g.to_string(), group: self.to_string() })
        }
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(GroupElement {
            residues: g.residues.iter().zip(&h.residues).zip(&self.factors).map(|((a, b), d)| (a + b) % d).collect(),
        })
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(GroupElement { residues: g.residues.iter().zip(&self.factors).map(|(a, d)| (d - a) % d).collect() })
    }

    pub fn sub(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.add(g, &self.neg(h)?)
    }

    /// Order of `g` in the group (1 for the identity).
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        Ok(g.residues.iter().zip(&self.factors).map(|(&r, &d)| d / r.gcd(&d)).fold(1, |acc, o| acc.lcm(&o)))
    }

    /// Mixed-radix index of `g` in `[0, order)`.
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        Ok(g.residues.iter().zip(&self.factors).fold(0usize, |acc, (&r, &d)| acc * d as usize + r as usize))
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        assert!((index as u64) < self.order, "index out of range");
        let mut residues = vec![0; self.rank()];
        for (slot, &d) in residues.iter_mut().zip(&self.factors).rev() {
            *slot = (index % d as usize) as u64;
            index /= d as usize;
        }
        GroupElement { residues }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(|i| self.element_at(i))
    }

    /// Index-level addition used in the hot loops.
    #[inline]
    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        if let [d] = self.factors.as_slice() {
            let d = *d as usize;
            let s = a + b;
            return if s >= d { s - d } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0usize;
        let mut place = 1usize;
        for &d in self.factors.iter().rev() {
            let d = d as usize;
            let s = a % d + b % d;
            out += (if s >= d { s - d } else { s }) * place;
            place *= d;
            a /= d;
            b /= d;
        }
        out
    }

    #[inline]
    pub(crate) fn neg_idx(&self, a: usize) -> usize {
        if let [d] = self.factors.as_slice() {
            let d = *d as usize;
            return if a == 0 { 0 } else { d - a };
        }
        let mut a = a;
        let mut out = 0usize;
        let mut place = 1usize;
        for &d in self.factors.iter().rev() {
            let d = d as usize;
            let r = a % d;
            out += (if r == 0 { 0 } else { d - r }) * place;
            place *= d;
            a /= d;
        }
        out
    }

    /// Index of `sum_i x_i * g_i` where `gens` are element residue vectors.
    pub(crate) fn combine_idx(&self, coeffs: &[i64], gens: &[GroupElement]) -> usize {
        let mut out = 0usize;
        for (c, &d) in self.factors.iter().enumerate() {
            let d = d as i128;
            let mut acc: i128 = 0;
            for (x, g) in coeffs.iter().zip(gens) {
                acc += *x as i128 * g.residues[c] as i128;
            }
            out = out * d as usize + acc.rem_euclid(d) as usize;
        }
        out
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("Z_1");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "Z_{d}")?;
        }
        Ok(())
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Parses the canonical form `Z_2xZ_8`; `Z_1` is the trivial group.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z_1" {
            return Ok(Self::trivial());
        }
        let factors = s
            .split('x')
            .map(|part| {
                part.trim()
                    .strip_prefix("Z_")
                    .and_then(|d| d.trim_matches(|c| c == '{' || c == '}').parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("cannot parse group factor {part:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(k: u64, limit: u64) -> Result<Vec<(u64, u32)>> {
    if k == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    if k > limit {
        return Err(Error::FactorizationLimit { k, limit });
    }
    let mut out = Vec::new();
    let mut m = k;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

pub fn is_square_free(k: u64) -> bool {
    assert!(k >= 1, "k must be positive");
    let mut m = k;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Integer partitions of `n` as non-increasing part lists.
pub(crate) fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One representative per isomorphism class of abelian groups of order `k`.
///
/// Ordered by rank, then lexicographically by invariant factors, so the cyclic
/// group always comes first.
pub fn groups_of_order(k: u64) -> Result<Vec<AbelianGroup>> {
    groups_of_order_with_limit(k, DEFAULT_FACTOR_LIMIT)
}

pub fn groups_of_order_with_limit(k: u64, limit: u64) -> Result<Vec<AbelianGroup>> {
    let primes = factorize(k, limit)?;
    let per_prime: Vec<Vec<Vec<u32>>> = primes.iter().map(|&(_, e)| partitions(e)).collect();
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for parts in &per_prime {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                (0..parts.len()).map(move |i| {
                    let mut c = c.clone();
                    c.push(i);
                    c
                })
            })
            .collect();
    }
    let mut groups = Vec::with_capacity(combos.len());
    for combo in combos {
        let rank = combo.iter().enumerate().map(|(p, &i)| per_prime[p][i].len()).max().unwrap_or(0);
        // j-th largest invariant factor takes the j-th largest part of every prime
        let mut factors = vec![1u64; rank];
        for (p, &i) in combo.iter().enumerate() {
            let prime = primes[p].0;
            for (j, &part) in per_prime[p][i].iter().enumerate() {
                factors[rank - 1 - j] *= prime.pow(part);
            }
        }
        groups.push(AbelianGroup::new(factors)?);
    }
    groups.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.factors.cmp(&b.factors)));
    Ok(groups)
}
