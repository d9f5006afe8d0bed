//! Brute-force reference implementations shared by the integration tests.
//! Nothing here goes through the BFS, the sphere formulas or the pruned
//! searches of the library.

#![allow(dead_code)]

use std::collections::HashMap;

use lee_embed::{AbelianGroup, GroupElement, Homomorphism, Word};
use rand::Rng;

/// Every point of the box `[-h, h]^n`.
pub fn box_points(n: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-h..=h).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn weight(p: &[i64]) -> u64 {
    p.iter().map(|x| x.unsigned_abs()).sum()
}

/// Word count of `S_{n,r}` by scanning the box `[-r, r]^n`.
pub fn sphere_count(n: usize, r: u64) -> u64 {
    box_points(n, r as i64).iter().filter(|p| weight(p) <= r).count() as u64
}

/// Sum of the `k` smallest Lee weights in `Z^n`.
pub fn smallest_weights_sum(n: usize, k: u64) -> u64 {
    let mut h = 1;
    loop {
        let mut ws: Vec<u64> = box_points(n, h).iter().map(|p| weight(p)).collect();
        ws.sort_unstable();
        // every weight <= h is inside the box
        if ws.iter().filter(|&&w| w <= h as u64).count() as u64 >= k {
            return ws[..k as usize].iter().sum();
        }
        h += 1;
    }
}

/// `phi(p)` computed with the group's public arithmetic only.
pub fn apply_slow(phi: &Homomorphism, p: &[i64]) -> GroupElement {
    let g = phi.group();
    let mut acc = g.zero();
    for (&c, img) in p.iter().zip(phi.images()) {
        let mut term = g.zero();
        let step = if c >= 0 { img.clone() } else { g.neg(img).unwrap() };
        for _ in 0..c.unsigned_abs() {
            term = g.add(&term, &step).unwrap();
        }
        acc = g.add(&acc, &term).unwrap();
    }
    acc
}

/// Minimum Lee weight of a preimage of every element reached by `phi`.
///
/// Every coset of `p Z^n` (`p` the exponent of `G`) has a representative in
/// `[-p/2, p/2]^n` that is coordinate-wise no heavier than any other member,
/// so scanning that box is exhaustive.
pub fn min_weights(phi: &Homomorphism) -> HashMap<GroupElement, u64> {
    let exp = *phi.group().factors().last().unwrap_or(&1) as i64;
    let mut best: HashMap<GroupElement, u64> = HashMap::new();
    for p in box_points(phi.dim(), exp / 2) {
        let g = apply_slow(phi, &p);
        let w = weight(&p);
        best.entry(g).and_modify(|b| *b = (*b).min(w)).or_insert(w);
    }
    best
}

/// `pi(n, G, phi)` from [`min_weights`]; `None` when not surjective.
pub fn embedding_number_slow(phi: &Homomorphism) -> Option<u64> {
    let m = min_weights(phi);
    (m.len() as u64 == phi.group().order()).then(|| m.values().sum())
}

/// Every homomorphism `Z^n -> G`, with no symmetry reduction.
pub fn all_homs(n: usize, group: &AbelianGroup) -> Vec<Homomorphism> {
    let elems: Vec<GroupElement> = group.elements().collect();
    let mut tuples: Vec<Vec<GroupElement>> = vec![vec![]];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                elems.iter().map(move |e| {
                    let mut u = t.clone();
                    u.push(e.clone());
                    u
                })
            })
            .collect();
    }
    tuples.into_iter().map(|t| Homomorphism::new(group.clone(), t).unwrap()).collect()
}

/// Whether `phi` restricted to `S_{n,r}` is a bijection onto `G`.
pub fn bijective_on_sphere_slow(phi: &Homomorphism, r: u64) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut count = 0;
    for p in box_points(phi.dim(), r as i64) {
        if weight(&p) <= r {
            count += 1;
            if !seen.insert(apply_slow(phi, &p)) {
                return false;
            }
        }
    }
    count == phi.group().order()
}

/// A random abelian group of order at most `max_order`, built from a random
/// divisibility chain.
pub fn random_group(rng: &mut impl Rng, max_order: u64) -> AbelianGroup {
    loop {
        let rank = rng.gen_range(1..=3);
        let mut factors = Vec::new();
        let mut d = rng.gen_range(2..=max_order.max(2));
        for _ in 0..rank {
            factors.push(d);
            d *= rng.gen_range(1..=3);
        }
        let order: u64 = factors.iter().product();
        if order <= max_order {
            return AbelianGroup::new(factors).unwrap();
        }
    }
}

pub fn random_hom(rng: &mut impl Rng, n: usize, group: &AbelianGroup) -> Homomorphism {
    let images = (0..n)
        .map(|_| {
            let r: Vec<i64> = group.factors().iter().map(|&d| rng.gen_range(0..d as i64)).collect();
            group.element(&r).unwrap()
        })
        .collect();
    Homomorphism::new(group.clone(), images).unwrap()
}

pub fn word(c: &[i64]) -> Word {
    Word::new(c.to_vec()).unwrap()
}
