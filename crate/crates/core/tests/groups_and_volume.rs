mod common;

use lee_embed::group::groups_of_order;
use lee_embed::lee::sphere_size;
use lee_embed::volume::{
    exclusion_margin, lee_sphere_volume, octahedron_alpha, octahedron_volume, packing_ratio, Rational,
};
use lee_embed::AbelianGroup;
use num_traits::Signed;
use proptest::prelude::*;

/// Divisibility chains `2 <= d_1 | d_2 | ... | d_t` with product `k`.
fn chains(k: u64, min: u64) -> Vec<Vec<u64>> {
    if k == 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for d in (min.max(2)..=k).filter(|d| k.is_multiple_of(*d) && d % min == 0) {
        for rest in chains(k / d, d) {
            // the remaining factors must all be multiples of d
            if rest.iter().all(|r| r % d == 0) {
                let mut c = vec![d];
                c.extend(rest);
                out.push(c);
            }
        }
    }
    out
}

#[test]
fn group_lists_match_divisibility_chains() {
    for k in 1..=300u64 {
        let mut expected = chains(k, 1);
        expected.sort();
        let mut got: Vec<Vec<u64>> = groups_of_order(k).unwrap().iter().map(|g| g.factors().to_vec()).collect();
        assert!(got[0].len() <= 1, "cyclic first for k = {k}");
        got.sort();
        assert_eq!(got, expected, "k = {k}");
    }
}

proptest! {
    #[test]
    fn group_axioms(seed in any::<u64>(), a in any::<[u16; 3]>(), b in any::<[u16; 3]>(), c in any::<[u16; 3]>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_group(&mut rng, 500);
        let el = |x: [u16; 3]| g.element(&x[..g.rank()].iter().map(|&v| v as i64).collect::<Vec<_>>()).unwrap();
        let (a, b, c) = (el(a), el(b), el(c));
        prop_assert_eq!(g.add(&a, &b).unwrap(), g.add(&b, &a).unwrap());
        prop_assert_eq!(
            g.add(&g.add(&a, &b).unwrap(), &c).unwrap(),
            g.add(&a, &g.add(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(g.add(&a, &g.neg(&a).unwrap()).unwrap(), g.zero());
        prop_assert_eq!(g.element_at(g.index_of(&a).unwrap()), a.clone());
        let ord = g.element_order(&a).unwrap();
        prop_assert_eq!(g.factors().last().unwrap() % ord, 0);
    }

    #[test]
    fn group_names_round_trip(k in 1u64..2000) {
        for g in groups_of_order(k).unwrap() {
            let back: AbelianGroup = g.to_string().parse().unwrap();
            prop_assert_eq!(back, g);
        }
    }
}

#[test]
fn sphere_volume_is_sphere_size() {
    for n in 1..=8 {
        for r in 0..=40 {
            assert_eq!(lee_sphere_volume(n, r).unwrap(), sphere_size(n, r).unwrap());
        }
    }
}

/// The rational comparison against a plain integer one:
/// `(2r+1)^3 / 6 / k > 18/19` iff `19 (2r+1)^3 > 108 k`.
#[test]
fn rational_margin_matches_integer_comparison() {
    let alpha = octahedron_alpha();
    for r in 0..=10_000u64 {
        let k = sphere_size(3, r + 1).unwrap() - 1;
        let lhs = 19 * (2 * r as u128 + 1).pow(3);
        let rhs = 108 * k as u128;
        let margin = exclusion_margin(3, r, &alpha).unwrap();
        assert_eq!(margin.is_positive(), lhs > rhs, "r = {r}");
        // margin = (lhs - rhs) / (114 k)
        let exact = Rational::new((lhs as i128 - rhs as i128).into(), (114 * k as i128).into());
        assert_eq!(margin, exact, "r = {r}");
    }
}

#[test]
fn packing_ratio_increases_towards_one() {
    let mut prev = packing_ratio(3, 1).unwrap();
    for r in 2..=10_000 {
        let cur = packing_ratio(3, r).unwrap();
        assert!(cur > prev, "r = {r}");
        assert!(cur < Rational::from_integer(1.into()));
        prev = cur;
    }
    assert_eq!(octahedron_volume(3, 1).unwrap(), Rational::new(27.into(), 6.into()));
}
