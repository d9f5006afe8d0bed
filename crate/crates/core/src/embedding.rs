//! Homomorphisms `phi: Z^n -> G` and their embedding numbers.
//!
//! The minimum Lee weight of a preimage of `g` is the graph distance from `0`
//! to `g` in the Cayley graph of `G` with generators `{±phi(e_i)}`, so every
//! distance profile is a breadth-first search over `G`. The search settles
//! after at most `|G| - 1` layers.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{groups_of_order, AbelianGroup, GroupElement};
use crate::lee::{for_each_in_shell, radius_for, shell_size, sphere_size, Word};

/// Default cap on `|G|^n` for exhaustive minimisation over homomorphisms.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1_000_000_000;

/// A homomorphism `Z^n -> G`, given by the images of the unit vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    group: AbelianGroup,
    images: Vec<GroupElement>,
}

#[derive(Serialize, Deserialize)]
struct HomRepr {
    group: AbelianGroup,
    images: Vec<GroupElement>,
}

impl Serialize for Homomorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HomRepr { group: self.group.clone(), images: self.images.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Homomorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = HomRepr::deserialize(d)?;
        Homomorphism::new(repr.group, repr.images).map_err(serde::de::Error::custom)
    }
}

impl Homomorphism {
    pub fn new(group: AbelianGroup, images: Vec<GroupElement>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidArgument("a homomorphism needs n >= 1 images".into()));
        }
        if let Some(bad) = images.iter().find(|g| !group.contains(g)) {
            return Err(Error::GroupMismatch { element: bad.to_string(), group: group.to_string() });
        }
        Ok(Homomorphism { group, images })
    }

    /// `phi: Z^n -> Z_k` with `phi(e_i) = images[i] mod k`.
    pub fn cyclic(k: u64, images: &[i64]) -> Result<Self> {
        let group = AbelianGroup::cyclic(k)?;
        let images = images
            .iter()
            .map(|&g| if group.rank() == 0 { Ok(group.zero()) } else { group.element(&[g]) })
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, images)
    }

    pub(crate) fn from_indices(group: &AbelianGroup, indices: &[usize]) -> Self {
        Homomorphism { images: indices.iter().map(|&i| group.element_at(i)).collect(), group: group.clone() }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub(crate) fn image_indices(&self) -> Vec<usize> {
        self.images.iter().map(|g| self.group.index_of(g).expect("validated image")).collect()
    }

    pub fn apply(&self, w: &Word) -> Result<GroupElement> {
        if w.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: w.dim() });
        }
        Ok(self.group.element_at(self.apply_idx(w.coords())))
    }

    #[inline]
    pub(crate) fn apply_idx(&self, coords: &[i64]) -> usize {
        self.group.combine_idx(coords, &self.images)
    }

    /// `lcm` of the image orders: the smallest `p` with `p Z^n` inside the kernel.
    pub fn period(&self) -> u64 {
        use num_integer::Integer;
        self.images.iter().map(|g| self.group.element_order(g).expect("validated image")).fold(1, |acc, o| acc.lcm(&o))
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{} -> {} : (", self.dim(), self.group)?;
        for (i, g) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

/// `phi(w)` for a word `w`.
pub fn hom_apply(phi: &Homomorphism, w: &Word) -> Result<GroupElement> {
    phi.apply(w)
}

/// Either a finite embedding number or infinity for non-surjective maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EmbeddingNumber {
    Finite(u64),
    Infinite,
}

impl EmbeddingNumber {
    pub fn finite(self) -> Option<u64> {
        match self {
            EmbeddingNumber::Finite(v) => Some(v),
            EmbeddingNumber::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, EmbeddingNumber::Infinite)
    }
}

impl fmt::Display for EmbeddingNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingNumber::Finite(v) => write!(f, "{v}"),
            EmbeddingNumber::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for EmbeddingNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EmbeddingNumber::Finite(v) => s.serialize_u64(*v),
            EmbeddingNumber::Infinite => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for EmbeddingNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(EmbeddingNumber::Finite(v)),
            Repr::Str(s) if s == "infinity" => Ok(EmbeddingNumber::Infinite),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("unexpected value {s:?}"))),
        }
    }
}

/// Minimum embedding distance of every reachable element, with a
/// minimal-weight preimage for each.
///
/// Witness ties are broken towards the lexicographically smallest word among
/// the extensions `witness(h) ± e_i` of the previous BFS layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceProfile {
    group: AbelianGroup,
    dist: Vec<Option<u64>>,
    witness: Vec<Option<Word>>,
}

impl DistanceProfile {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn is_surjective(&self) -> bool {
        self.dist.iter().all(Option::is_some)
    }

    pub fn dist(&self, g: &GroupElement) -> Result<Option<u64>> {
        Ok(self.dist[self.group.index_of(g)?])
    }

    pub fn witness(&self, g: &GroupElement) -> Result<Option<&Word>> {
        Ok(self.witness[self.group.index_of(g)?].as_ref())
    }

    pub(crate) fn witness_at(&self, idx: usize) -> Option<&Word> {
        self.witness[idx].as_ref()
    }

    /// `|G_d|` for `d = 0..=max distance`.
    pub fn layer_sizes(&self) -> Vec<u64> {
        let mut layers = Vec::new();
        for d in self.dist.iter().flatten() {
            let d = *d as usize;
            if layers.len() <= d {
                layers.resize(d + 1, 0);
            }
            layers[d] += 1;
        }
        layers
    }

    /// Largest embedding distance, or `None` when `phi` is not surjective.
    pub fn covering_radius(&self) -> Option<u64> {
        if !self.is_surjective() {
            return None;
        }
        self.dist.iter().flatten().copied().max()
    }

    pub fn embedding_number(&self) -> EmbeddingNumber {
        if self.is_surjective() {
            EmbeddingNumber::Finite(self.dist.iter().flatten().sum())
        } else {
            EmbeddingNumber::Infinite
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (GroupElement, Option<u64>, Option<&Word>)> + '_ {
        (0..self.dist.len()).map(|i| (self.group.element_at(i), self.dist[i], self.witness[i].as_ref()))
    }
}

#[derive(Serialize)]
struct ProfileEntry<'a> {
    element: GroupElement,
    distance: Option<u64>,
    witness: Option<&'a Word>,
}

impl Serialize for DistanceProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DistanceProfile", 4)?;
        st.serialize_field("group", &self.group)?;
        st.serialize_field("surjective", &self.is_surjective())?;
        st.serialize_field("embedding_number", &self.embedding_number())?;
        let entries: Vec<ProfileEntry<'_>> =
            self.entries().map(|(element, distance, witness)| ProfileEntry { element, distance, witness }).collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Breadth-first distance profile of `phi` on the Cayley graph of its group.
pub fn distance_profile(phi: &Homomorphism) -> DistanceProfile {
    let group = phi.group();
    let n = phi.dim();
    let order = group.order() as usize;
    let gens: Vec<[(i64, usize); 2]> =
        phi.image_indices().into_iter().map(|g| [(-1, group.neg_idx(g)), (1, g)]).collect();

    let mut dist: Vec<Option<u64>> = vec![None; order];
    let mut witness: Vec<Option<Word>> = vec![None; order];
    dist[0] = Some(0);
    witness[0] = Some(Word::origin(n));

    let mut frontier = vec![0usize];
    let mut d = 0u64;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &h in &frontier {
            for (i, pair) in gens.iter().enumerate() {
                for &(sign, step) in pair {
                    let g = group.add_idx(h, step);
                    match dist[g] {
                        None => {
                            dist[g] = Some(d + 1);
                            witness[g] = witness[h].as_ref().map(|w| w.shifted(i, sign));
                            next.push(g);
                        }
                        Some(x) if x == d + 1 => {
                            let cand = witness[h].as_ref().map(|w| w.shifted(i, sign));
                            if cand < witness[g] {
                                witness[g] = cand;
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        next.sort_unstable();
        frontier = next;
        d += 1;
    }
    DistanceProfile { group: group.clone(), dist, witness }
}

/// Embedding number from generator indices, without building witnesses.
pub(crate) fn embedding_number_idx(group: &AbelianGroup, images: &[usize]) -> EmbeddingNumber {
    let order = group.order() as usize;
    let mut steps = Vec::with_capacity(2 * images.len());
    for &g in images {
        steps.push(g);
        steps.push(group.neg_idx(g));
    }
    let mut seen = vec![false; order];
    seen[0] = true;
    let mut reached = 1usize;
    let mut total = 0u64;
    let mut frontier = vec![0usize];
    let mut next = Vec::new();
    let mut d = 0u64;
    while !frontier.is_empty() {
        d += 1;
        next.clear();
        for &h in &frontier {
            for &s in &steps {
                let g = group.add_idx(h, s);
                if !seen[g] {
                    seen[g] = true;
                    next.push(g);
                }
            }
        }
        reached += next.len();
        total += d * next.len() as u64;
        std::mem::swap(&mut frontier, &mut next);
    }
    if reached == order {
        EmbeddingNumber::Finite(total)
    } else {
        EmbeddingNumber::Infinite
    }
}

/// `pi(n, G, phi)`.
pub fn embedding_number(phi: &Homomorphism) -> EmbeddingNumber {
    embedding_number_idx(phi.group(), &phi.image_indices())
}

/// Whether `phi` is one-to-one on the Lee sphere `S_{n,r}`.
pub fn is_injective_on_sphere(phi: &Homomorphism, r: u64) -> bool {
    let order = phi.group().order();
    match sphere_size(phi.dim(), r) {
        Ok(s) if s <= order => {}
        _ => return false,
    }
    let mut seen = vec![false; order as usize];
    let mut injective = true;
    for d in 0..=r {
        for_each_in_shell(phi.dim(), d, &mut |w| {
            let g = phi.apply_idx(w);
            injective &= !std::mem::replace(&mut seen[g], true);
        });
        if !injective {
            return false;
        }
    }
    true
}

/// Whether `phi(S_{n,r}) = G`.
pub fn is_surjective_on_sphere(phi: &Homomorphism, r: u64) -> bool {
    let order = phi.group().order();
    if r >= order {
        // every reachable element sits within distance |G| - 1
        return distance_profile(phi).is_surjective();
    }
    let mut seen = vec![false; order as usize];
    let mut covered = 0u64;
    for d in 0..=r {
        for_each_in_shell(phi.dim(), d, &mut |w| {
            let g = phi.apply_idx(w);
            if !std::mem::replace(&mut seen[g], true) {
                covered += 1;
            }
        });
        if covered == order {
            return true;
        }
    }
    false
}

/// Reusable optimality test for many homomorphisms of one `(n, |G|)`.
///
/// Holds the words of `S_{n,r}` and of the shell at distance `r + 1`, where
/// `r = radius_for(n, |G|)`.
#[derive(Clone, Debug)]
pub struct OptimalityChecker {
    n: usize,
    order: u64,
    perfect: bool,
    inner: Vec<i64>,
    outer: Vec<i64>,
    seen: Vec<u32>,
    stamp: u32,
}

impl OptimalityChecker {
    pub fn new(n: usize, order: u64) -> Result<Self> {
        let r = radius_for(n, order)?;
        let perfect = sphere_size(n, r)? == order;
        let mut inner = Vec::new();
        for d in 0..=r {
            for_each_in_shell(n, d, &mut |w| inner.extend_from_slice(w));
        }
        let mut outer = Vec::new();
        if !perfect {
            shell_size(n, r + 1)?;
            for_each_in_shell(n, r + 1, &mut |w| outer.extend_from_slice(w));
        }
        Ok(OptimalityChecker { n, order, perfect, inner, outer, seen: vec![0; order as usize], stamp: 0 })
    }

    /// `|G|` equals `|S_{n,r}|`, so optimality means a bijection on the sphere.
    pub fn is_perfect_order(&self) -> bool {
        self.perfect
    }

    pub fn check(&mut self, phi: &Homomorphism) -> Result<bool> {
        if phi.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: phi.dim() });
        }
        if phi.group().order() != self.order {
            return Err(Error::InvalidArgument(format!("checker built for order {}, got {}", self.order, phi.group())));
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        let n = self.n;
        if let [k] = phi.group().factors() {
            let k = *k as i64;
            let imgs: Vec<i64> = phi.images().iter().map(|g| g.residues()[0] as i64).collect();
            let apply = |w: &[i64]| -> usize {
                let mut acc = 0i64;
                for (x, g) in w.iter().zip(&imgs) {
                    acc = (acc + x * g).rem_euclid(k);
                }
                acc as usize
            };
            Ok(self.run(n, stamp, apply))
        } else {
            Ok(self.run(n, stamp, |w| phi.apply_idx(w)))
        }
    }

    fn run(&mut self, n: usize, stamp: u32, apply: impl Fn(&[i64]) -> usize) -> bool {
        let mut covered = 0u64;
        for w in self.inner.chunks_exact(n) {
            let g = apply(w);
            if self.seen[g] == stamp {
                return false;
            }
            self.seen[g] = stamp;
            covered += 1;
        }
        if self.perfect {
            return true;
        }
        for w in self.outer.chunks_exact(n) {
            let g = apply(w);
            if self.seen[g] != stamp {
                self.seen[g] = stamp;
                covered += 1;
                if covered == self.order {
                    return true;
                }
            }
        }
        covered == self.order
    }
}

/// Whether `phi` attains `f(n, |G|)`: injective on `S_{n,r}` and surjective on
/// `S_{n,r+1}` (a bijection on `S_{n,r}` when `|G| = |S_{n,r}|`).
pub fn is_optimal(phi: &Homomorphism) -> Result<bool> {
    OptimalityChecker::new(phi.dim(), phi.group().order())?.check(phi)
}

/// Excess of `pi(n, G, phi)` over `f(n, |G|)` assembled term by term from the
/// layer sizes: `sum_{d<=r} (r+1-d) eps_d + sum_{d>=r+2} (d-r-1) |G_d|`,
/// where `eps_d` is the number of words at distance `d` not used by any layer.
/// `None` when `phi` is not surjective.
pub fn lower_bound_gap(profile: &DistanceProfile, n: usize) -> Result<Option<u64>> {
    if !profile.is_surjective() {
        return Ok(None);
    }
    let k = profile.group().order();
    let r = radius_for(n, k)?;
    let layers = profile.layer_sizes();
    let layer = |d: u64| layers.get(d as usize).copied().unwrap_or(0);
    let mut gap = 0u64;
    for d in 0..=r {
        let eps = shell_size(n, d)?
            .checked_sub(layer(d))
            .ok_or_else(|| Error::Precondition(format!("layer {d} larger than its shell")))?;
        gap += (r + 1 - d) * eps;
    }
    for d in (r + 2)..layers.len() as u64 {
        gap += (d - r - 1) * layer(d);
    }
    Ok(Some(gap))
}

/// Outcome of minimising the embedding number over homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiGroupResult {
    pub value: EmbeddingNumber,
    /// First minimiser in candidate order, `None` if no map is surjective.
    pub attained_by: Option<Homomorphism>,
    pub candidates: u64,
}

/// Representatives of `G / ±1`, by index.
pub(crate) fn sign_representatives(group: &AbelianGroup) -> Vec<usize> {
    (0..group.order() as usize).filter(|&g| g <= group.neg_idx(g)).collect()
}

fn check_budget(order: u64, n: usize, budget: u128) -> Result<()> {
    let required = (order as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Calls `visit` on every non-decreasing `n`-tuple over `0..m` whose last
/// entry is `top`, in colexicographic order.
fn for_each_colex_below(n: usize, top: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(pos: usize, max: usize, buf: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        for v in 0..=max {
            buf[pos] = v;
            if pos == 0 {
                visit(buf);
            } else {
                go(pos - 1, v, buf, visit);
            }
        }
    }
    let mut buf = vec![0usize; n];
    buf[n - 1] = top;
    if n == 1 {
        visit(&buf);
    } else {
        go(n - 2, top, &mut buf, visit);
    }
}

/// Best candidate whose largest representative is `reps[top]`.
fn best_with_top(
    group: &AbelianGroup,
    reps: &[usize],
    n: usize,
    top: usize,
) -> (EmbeddingNumber, Option<Vec<usize>>, u64) {
    let mut best = EmbeddingNumber::Infinite;
    let mut arg = None;
    let mut count = 0u64;
    let mut images = vec![0usize; n];
    for_each_colex_below(n, top, &mut |t| {
        count += 1;
        for (slot, &i) in images.iter_mut().zip(t) {
            *slot = reps[i];
        }
        let v = embedding_number_idx(group, &images);
        if v < best {
            best = v;
            arg = Some(images.clone());
        }
    });
    (best, arg, count)
}

/// `pi(n, G)`: the minimum embedding number over all homomorphisms `Z^n -> G`.
///
/// Candidates are taken up to negating and permuting the images, both of
/// which preserve Lee weight, and visited in colexicographic order over
/// sign representatives; the first minimiser is reported.
pub fn pi_group(n: usize, group: &AbelianGroup, budget: u128) -> Result<PiGroupResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    check_budget(group.order(), n, budget)?;
    let reps = sign_representatives(group);

    #[cfg(feature = "parallel")]
    let per_top: Vec<_> = {
        use rayon::prelude::*;
        (0..reps.len()).into_par_iter().map(|top| best_with_top(group, &reps, n, top)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_top: Vec<_> = (0..reps.len()).map(|top| best_with_top(group, &reps, n, top)).collect();

    let candidates = per_top.iter().map(|p| p.2).sum();
    let best = per_top.into_iter().enumerate().filter(|(_, p)| p.1.is_some()).min_by_key(|(top, p)| (p.0, *top));
    Ok(match best {
        Some((_, (value, Some(images), _))) => {
            PiGroupResult { value, attained_by: Some(Homomorphism::from_indices(group, &images)), candidates }
        }
        _ => PiGroupResult { value: EmbeddingNumber::Infinite, attained_by: None, candidates },
    })
}

/// `pi(n, k)` together with the per-group minima.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiNumberResult {
    pub value: EmbeddingNumber,
    pub attained_by: Option<Homomorphism>,
    pub per_group: Vec<(AbelianGroup, EmbeddingNumber)>,
}

/// `pi(n, k)`: the minimum of `pi(n, G)` over abelian groups of order `k`.
/// Ties go to the earliest group of [`groups_of_order`], i.e. cyclic first.
pub fn pi_number(n: usize, k: u64, budget: u128) -> Result<PiNumberResult> {
    let groups = groups_of_order(k)?;
    for g in &groups {
        check_budget(g.order(), n, budget)?;
    }
    let mut best: Option<PiGroupResult> = None;
    let mut per_group = Vec::with_capacity(groups.len());
    for g in &groups {
        let res = pi_group(n, g, budget)?;
        per_group.push((g.clone(), res.value));
        if best.as_ref().is_none_or(|b| res.value < b.value) {
            best = Some(res);
        }
    }
    let best = best.expect("at least one group of every order");
    Ok(PiNumberResult { value: best.value, attained_by: best.attained_by, per_group })
}
