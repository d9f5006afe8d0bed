mod common;

use common::{apply_slow, box_points, weight, word};
use lee_embed::embedding::{is_injective_on_sphere, is_optimal, is_surjective_on_sphere};
use lee_embed::group::groups_of_order;
use lee_embed::lee::{radius_for, sphere_size};
use lee_embed::planar::optimal_hom_2d;
use lee_embed::qpl::{build_code, bundled_appendix, choose_tile, torus_tiling_check, CodeClass, LinearLeeCode};
use lee_embed::{Homomorphism, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn code_z13() -> LinearLeeCode {
    build_code(&Homomorphism::cyclic(13, &[2, 3]).unwrap(), 2).unwrap()
}

fn code_z55() -> LinearLeeCode {
    build_code(&Homomorphism::cyclic(55, &[1, 5, 21]).unwrap(), 2).unwrap()
}

#[test]
fn optimal_maps_give_perfect_or_quasi_perfect_codes() {
    let mut homs: Vec<Homomorphism> = (2..=300).map(|k| optimal_hom_2d(k).unwrap().hom).collect();
    homs.extend(bundled_appendix().iter().map(|r| r.hom().unwrap()).filter(|h| is_optimal(h).unwrap()));
    for phi in homs {
        let k = phi.group().order();
        let e = radius_for(phi.dim(), k).unwrap();
        let code = build_code(&phi, e).unwrap();
        let perfect_order = k == sphere_size(phi.dim(), e).unwrap();
        let expected = if perfect_order { CodeClass::Perfect } else { CodeClass::QuasiPerfect };
        assert_eq!(code.class(), expected, "{phi}");
    }
}

#[test]
fn leaders_are_minimal_and_hit_their_syndrome() {
    for code in [code_z13(), code_z55()] {
        let phi = code.hom();
        let mut max = 0;
        for g in phi.group().elements() {
            let l = code.coset_leader(&g).unwrap();
            assert_eq!(apply_slow(phi, l.coords()), g);
            max = max.max(l.lee_weight());
        }
        assert_eq!(max, code.covering_radius());
    }
}

/// Lattices `L` in `Z^2` given in Hermite normal form `(a, 0), (b, d)`.
/// When brute force on the torus says `L` is a quasi-perfect (or perfect)
/// `e`-code, the natural map `Z^2 -> Z^2 / L` must be injective on `S_e`
/// and surjective on `S_{e+1}`.
#[test]
fn quasi_perfect_lattices_give_optimal_style_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut lattices: Vec<(i64, i64, i64)> = Vec::new();
    for a in 1..=40i64 {
        for d in 1..=40 / a {
            for b in 0..a {
                lattices.push((a, b, d));
            }
        }
    }
    for _ in 0..100 {
        let a = rng.gen_range(1..=9);
        let d = rng.gen_range(1..=9);
        lattices.push((a, rng.gen_range(0..a), d));
    }
    let mut qpl_seen = 0;
    for (a, b, d) in lattices {
        let k = a * d;
        let in_lattice = |x: i64, y: i64| y.rem_euclid(d) == 0 && (x - b * (y / d)).rem_euclid(a) == 0;
        // k Z^2 is inside L, so the k x k torus is a fundamental region
        let tor = |x: i64| x.min(k - x) as u64;
        let codewords: Vec<(i64, i64)> =
            (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).filter(|&(x, y)| in_lattice(x, y)).collect();
        let min_dist = codewords
            .iter()
            .filter(|&&c| c != (0, 0))
            .map(|&(x, y)| tor(x) + tor(y))
            .chain(std::iter::once(k as u64))
            .min()
            .unwrap();
        let covering = (0..k)
            .flat_map(|x| (0..k).map(move |y| (x, y)))
            .map(|(x, y)| {
                codewords
                    .iter()
                    .map(|&(cx, cy)| tor((x - cx).rem_euclid(k)) + tor((y - cy).rem_euclid(k)))
                    .min()
                    .unwrap()
            })
            .max()
            .unwrap();
        let e = (min_dist - 1) / 2;
        if covering > e + 1 {
            continue;
        }
        qpl_seen += 1;
        let phi = natural_map(a, b, d);
        assert!(is_injective_on_sphere(&phi, e), "lattice ({a},{b},{d}) e = {e}");
        assert!(is_surjective_on_sphere(&phi, e + 1), "lattice ({a},{b},{d}) e = {e}");
    }
    assert!(qpl_seen > 50, "only {qpl_seen} quasi-perfect lattices");
}

/// A homomorphism `Z^2 -> G` with kernel exactly `L`, found by search over
/// every group of order `ad`, using plain residue arithmetic.
fn natural_map(a: i64, b: i64, d: i64) -> Homomorphism {
    let k = (a * d) as u64;
    for group in groups_of_order(k).unwrap() {
        let f: Vec<i64> = group.factors().iter().map(|&x| x as i64).collect();
        let elems: Vec<Vec<i64>> = group.elements().map(|g| g.residues().iter().map(|&r| r as i64).collect()).collect();
        for u in &elems {
            if (0..f.len()).any(|i| (a * u[i]) % f[i] != 0) {
                continue;
            }
            for v in &elems {
                if (0..f.len()).any(|i| (b * u[i] + d * v[i]) % f[i] != 0) {
                    continue;
                }
                // L is inside the kernel; equal index means equality
                let reached: std::collections::HashSet<Vec<i64>> = (0..k as i64)
                    .flat_map(|x| (0..k as i64).map(move |y| (x, y)))
                    .map(|(x, y)| (0..f.len()).map(|i| (x * u[i] + y * v[i]) % f[i]).collect())
                    .collect();
                if reached.len() as u64 == k {
                    let img = |w: &Vec<i64>| group.element(w).unwrap();
                    return Homomorphism::new(group.clone(), vec![img(u), img(v)]).unwrap();
                }
            }
        }
    }
    unreachable!("Z^2 / L has order ad")
}

#[test]
fn tiles_tile() {
    for row in bundled_appendix().iter().filter(|r| r.k <= 70) {
        let phi = row.hom().unwrap();
        if !is_optimal(&phi).unwrap() {
            continue;
        }
        let e = radius_for(3, row.k).unwrap();
        let tile = choose_tile(&phi, e).unwrap();
        assert!(torus_tiling_check(&phi, &tile).unwrap(), "k = {}", row.k);
    }
    // a sphere that is too small to be a tile
    let phi = Homomorphism::cyclic(16, &[2, 3]).unwrap();
    let mut cells: Vec<Word> = box_points(2, 2).into_iter().filter(|p| weight(p) <= 2).map(|p| word(&p)).collect();
    cells.push(word(&[3, 0]));
    cells.push(word(&[0, 3]));
    cells.push(word(&[-3, 0]));
    assert_eq!(cells.len(), 16);
    // 3*2 = 6 = 2*3 collides with (0, 2)
    assert!(!torus_tiling_check(&phi, &cells).unwrap());
}

fn codeword(code: &LinearLeeCode, w: Word) -> Word {
    code.decode(&w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn decoding_planar(x in -200i64..200, y in -200i64..200, cx in -200i64..200, cy in -200i64..200) {
        let code = code_z13();
        let w = word(&[x, y]);
        let c = codeword(&code, word(&[cx, cy]));
        let once = code.decode(&w).unwrap();
        prop_assert!(code.is_codeword(&once).unwrap());
        prop_assert!(w.checked_sub(&once).unwrap().lee_weight() <= 2);
        prop_assert_eq!(code.decode(&once).unwrap(), once.clone());
        let shifted = w.checked_add(&c).unwrap();
        prop_assert_eq!(code.decode(&shifted).unwrap(), once.checked_add(&c).unwrap());
    }

    #[test]
    fn decoding_cubic(w in prop::collection::vec(-100i64..100, 3), c in prop::collection::vec(-100i64..100, 3)) {
        let code = code_z55();
        let w = word(&w);
        let c = codeword(&code, word(&c));
        let once = code.decode(&w).unwrap();
        prop_assert!(code.is_codeword(&once).unwrap());
        prop_assert!(w.checked_sub(&once).unwrap().lee_weight() <= 3);
        prop_assert_eq!(code.decode(&once).unwrap(), once.clone());
        prop_assert_eq!(code.decode(&w.checked_add(&c).unwrap()).unwrap(), once.checked_add(&c).unwrap());
    }
}

#[test]
fn torus_distances() {
    assert_eq!(code_z13().minimum_distance_on_torus().unwrap(), 5);
    let z55 = code_z55();
    assert_eq!(z55.class(), CodeClass::QuasiPerfect);
    assert_eq!(z55.covering_radius(), 3);
    assert!(z55.minimum_distance_on_torus().unwrap() >= 5);
}
