//! Quasi-perfect Lee codes from optimal embeddings.
//!
//! An optimal `phi: Z^n -> G` with `|S_{n,e}| <= |G| < |S_{n,e+1}|` is
//! injective on `S_{n,e}` and surjective on `S_{n,e+1}`, so its kernel is a
//! linear code with minimum distance at least `2e + 1` and covering radius at
//! most `e + 1`. Codes are kept as their defining homomorphism; decoding is a
//! syndrome lookup into the coset leaders of the distance profile.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::embedding::{
    distance_profile, is_injective_on_sphere, sign_representatives, DistanceProfile, Homomorphism, OptimalityChecker,
};
use crate::error::{Error, Result};
use crate::group::{groups_of_order, AbelianGroup};
use crate::lee::{enumerate_shell, enumerate_sphere, sphere_size, Word};

/// The optimal embeddings into `Z^3` listed in the appendix table, one row
/// per order, columns `k,phi_e1,phi_e2,phi_e3`.
pub const APPENDIX_CSV: &str = include_str!("../data/appendix_z3.csv");

/// Largest torus `p^n` scanned by the exhaustive torus checks.
pub const TORUS_LIMIT: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Only `Z_k`.
    Cyclic,
    /// Every abelian group of order `k`, cyclic first.
    AllGroups,
}

fn count_multisets(m: u128, n: usize) -> u128 {
    // C(m + n - 1, n)
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c.saturating_mul(m + i) / (i + 1);
    }
    c
}

/// First optimal homomorphism `Z^n -> G`, `|G| = k`, in lexicographic order
/// over non-decreasing tuples of sign representatives (for `Z_k`:
/// `0 <= g_1 <= ... <= g_n <= k/2`). `Ok(None)` once the space is exhausted.
pub fn search_optimal_embedding(n: usize, k: u64, mode: SearchMode, budget: u128) -> Result<Option<Homomorphism>> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let groups = match mode {
        SearchMode::Cyclic => vec![AbelianGroup::cyclic(k)?],
        SearchMode::AllGroups => groups_of_order(k)?,
    };
    let sizes: Vec<Vec<usize>> = groups.iter().map(sign_representatives).collect();
    let required: u128 = sizes.iter().map(|r| count_multisets(r.len() as u128, n)).sum();
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut checker = OptimalityChecker::new(n, k)?;
    for (group, reps) in groups.iter().zip(&sizes) {
        let mut idx = vec![0usize; n];
        loop {
            let images: Vec<usize> = idx.iter().map(|&i| reps[i]).collect();
            let hom = Homomorphism::from_indices(group, &images);
            if checker.check(&hom)? {
                return Ok(Some(hom));
            }
            // next non-decreasing tuple in lexicographic order
            let Some(pos) = (0..n).rev().find(|&p| idx[p] + 1 < reps.len()) else {
                break;
            };
            let v = idx[pos] + 1;
            for slot in &mut idx[pos..] {
                *slot = v;
            }
        }
    }
    Ok(None)
}

/// One row of the appendix table: `phi: Z^3 -> Z_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixRow {
    pub k: u64,
    pub images: [i64; 3],
}

impl AppendixRow {
    pub fn hom(&self) -> Result<Homomorphism> {
        Homomorphism::cyclic(self.k, &self.images)
    }

    /// `phi(e_1) = 1`, except `phi(e_1) = 2` for `k = 438`.
    pub fn follows_e1_convention(&self) -> bool {
        self.images[0] == if self.k == 438 { 2 } else { 1 }
    }
}

#[derive(Deserialize)]
struct CsvRow {
    k: String,
    phi_e1: String,
    phi_e2: String,
    phi_e3: String,
}

/// Parses `k,phi_e1,phi_e2,phi_e3` rows.
pub fn parse_appendix(reader: impl Read) -> Result<Vec<AppendixRow>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["k", "phi_e1", "phi_e2", "phi_e3"] {
        return Err(Error::MalformedRow { line: 1, reason: format!("unexpected header {headers:?}") });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<CsvRow>().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::MalformedRow { line, reason: e.to_string() })?;
        let int = |s: &str| {
            s.parse::<i64>().map_err(|_| Error::MalformedRow { line, reason: format!("not an integer: {s:?}") })
        };
        let k = int(&rec.k)?;
        if k < 1 {
            return Err(Error::MalformedRow { line, reason: format!("order {k} must be positive") });
        }
        rows.push(AppendixRow { k: k as u64, images: [int(&rec.phi_e1)?, int(&rec.phi_e2)?, int(&rec.phi_e3)?] });
    }
    Ok(rows)
}

pub fn bundled_appendix() -> Vec<AppendixRow> {
    parse_appendix(APPENDIX_CSV.as_bytes()).expect("bundled appendix parses")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub k: u64,
    pub images: [i64; 3],
    pub optimal: bool,
    pub e1_convention: bool,
    /// For a failing row: the first optimal cyclic embedding found by search.
    pub replacement: Option<Homomorphism>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageEntry {
    pub e: u64,
    pub lower: u64,
    pub upper: u64,
    /// Smallest verified row order in `[lower, upper)`.
    pub k: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixReport {
    pub rows: Vec<RowReport>,
    pub failures: Vec<u64>,
    pub coverage: Vec<CoverageEntry>,
    pub all_rows_pass: bool,
    pub coverage_complete: bool,
}

fn verify_row(row: &AppendixRow, repair: bool) -> Result<RowReport> {
    let hom = row.hom()?;
    let optimal = OptimalityChecker::new(3, row.k)?.check(&hom)?;
    let replacement =
        if !optimal && repair { search_optimal_embedding(3, row.k, SearchMode::Cyclic, u128::MAX)? } else { None };
    Ok(RowReport { k: row.k, images: row.images, optimal, e1_convention: row.follows_e1_convention(), replacement })
}

/// Checks every row for optimality in `Z^3` and that every radius in
/// `1..=max_e` has a verified order in `[|S_{3,e}|, |S_{3,e+1}|)`.
/// Failing rows are reported, and with `repair` a replacement is searched for.
pub fn verify_appendix(rows: &[AppendixRow], max_e: u64, repair: bool) -> Result<AppendixReport> {
    #[cfg(feature = "parallel")]
    let reports: Vec<RowReport> = {
        use rayon::prelude::*;
        rows.par_iter().map(|r| verify_row(r, repair)).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let reports: Vec<RowReport> = rows.iter().map(|r| verify_row(r, repair)).collect::<Result<_>>()?;

    let failures: Vec<u64> = reports.iter().filter(|r| !r.optimal).map(|r| r.k).collect();
    let mut coverage = Vec::new();
    for e in 1..=max_e {
        let lower = sphere_size(3, e)?;
        let upper = sphere_size(3, e + 1)?;
        let k = reports.iter().filter(|r| r.optimal && (lower..upper).contains(&r.k)).map(|r| r.k).min();
        coverage.push(CoverageEntry { e, lower, upper, k });
    }
    Ok(AppendixReport {
        all_rows_pass: failures.is_empty(),
        coverage_complete: coverage.iter().all(|c| c.k.is_some()),
        rows: reports,
        failures,
        coverage,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CodeClass {
    Perfect,
    QuasiPerfect,
    Other,
}

/// The linear code `ker(phi)` with a coset-leader table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearLeeCode {
    hom: Homomorphism,
    e: u64,
    period: u64,
    covering_radius: u64,
    class: CodeClass,
    profile: DistanceProfile,
}

/// Serialized form of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    pub group: AbelianGroup,
    pub images: Vec<crate::group::GroupElement>,
    pub e: u64,
    pub period: u64,
    pub covering_radius: u64,
}

impl LinearLeeCode {
    pub fn n(&self) -> usize {
        self.hom.dim()
    }

    pub fn hom(&self) -> &Homomorphism {
        &self.hom
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn covering_radius(&self) -> u64 {
        self.covering_radius
    }

    pub fn class(&self) -> CodeClass {
        self.class
    }

    /// Minimal-weight word with syndrome `g`.
    pub fn coset_leader(&self, g: &crate::group::GroupElement) -> Result<&Word> {
        Ok(self.profile.witness(g)?.expect("surjective code"))
    }

    pub fn is_codeword(&self, w: &Word) -> Result<bool> {
        Ok(self.hom.apply(w)? == self.hom.group().zero())
    }

    /// Nearest-codeword estimate `w - leader(phi(w))`.
    pub fn decode(&self, w: &Word) -> Result<Word> {
        if w.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: w.dim() });
        }
        let s = self.hom.apply_idx(w.coords());
        w.checked_sub(self.profile.witness_at(s).expect("surjective code"))
    }

    pub fn spec(&self) -> CodeSpec {
        CodeSpec {
            n: self.n(),
            group: self.hom.group().clone(),
            images: self.hom.images().to_vec(),
            e: self.e,
            period: self.period,
            covering_radius: self.covering_radius,
        }
    }

    /// Rebuilds a code and checks the recorded period and covering radius.
    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        let hom = Homomorphism::new(spec.group.clone(), spec.images.clone())?;
        if hom.dim() != spec.n {
            return Err(Error::DimensionMismatch { expected: spec.n, found: hom.dim() });
        }
        let code = build_code(&hom, spec.e)?;
        if code.period != spec.period || code.covering_radius != spec.covering_radius {
            return Err(Error::InvalidArgument(format!(
                "code spec records period {} / covering radius {}, computed {} / {}",
                spec.period, spec.covering_radius, code.period, code.covering_radius
            )));
        }
        Ok(code)
    }

    /// Smallest toroidal Lee weight of a non-zero codeword of the torus
    /// `(Z_p)^n`, `p` the period.
    pub fn minimum_distance_on_torus(&self) -> Result<u64> {
        let p = self.period as i64;
        let mut best = u64::MAX;
        for_each_torus_point(self.n(), self.period, &mut |t| {
            if t.iter().any(|&x| x != 0) && self.hom.apply_idx(t) == 0 {
                let w: u64 = t.iter().map(|&x| x.min(p - x) as u64).sum();
                best = best.min(w);
            }
        })?;
        Ok(best)
    }
}

impl Serialize for LinearLeeCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

fn for_each_torus_point(n: usize, p: u64, visit: &mut dyn FnMut(&[i64])) -> Result<()> {
    let total = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > TORUS_LIMIT {
        return Err(Error::BudgetExceeded { required: total, budget: TORUS_LIMIT });
    }
    let mut t = vec![0i64; n];
    loop {
        visit(&t);
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            t[i] += 1;
            if t[i] < p as i64 {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Builds `ker(phi)` as an `e`-error-correcting code; `phi` must be
/// surjective and injective on `S_{n,e}`.
pub fn build_code(hom: &Homomorphism, e: u64) -> Result<LinearLeeCode> {
    let group = hom.group();
    if group.order() < 2 {
        return Err(Error::Precondition("the trivial group gives the degenerate code Z^n".into()));
    }
    if !is_injective_on_sphere(hom, e) {
        return Err(Error::Precondition(format!("{hom} is not injective on S_{{{},{e}}}", hom.dim())));
    }
    let profile = distance_profile(hom);
    let Some(covering_radius) = profile.covering_radius() else {
        return Err(Error::Precondition(format!("{hom} is not surjective")));
    };
    let class = if covering_radius == e && group.order() == sphere_size(hom.dim(), e)? {
        CodeClass::Perfect
    } else if covering_radius == e + 1 {
        CodeClass::QuasiPerfect
    } else {
        CodeClass::Other
    };
    Ok(LinearLeeCode { period: hom.period(), hom: hom.clone(), e, covering_radius, class, profile })
}

pub fn decode(code: &LinearLeeCode, w: &Word) -> Result<Word> {
    code.decode(w)
}

/// A tile `S_{n,e} ⊆ K ⊂ S_{n,e+1}` on which `phi` is a bijection: the
/// sphere plus, in lexicographic order, the first word of the next shell
/// hitting each element not yet covered.
pub fn choose_tile(hom: &Homomorphism, e: u64) -> Result<Vec<Word>> {
    if !is_injective_on_sphere(hom, e) {
        return Err(Error::Precondition(format!("{hom} is not injective on S_{{{},{e}}}", hom.dim())));
    }
    let order = hom.group().order() as usize;
    let mut seen = vec![false; order];
    let mut tile = enumerate_sphere(hom.dim(), e);
    for w in &tile {
        seen[hom.apply_idx(w.coords())] = true;
    }
    for w in enumerate_shell(hom.dim(), e + 1) {
        if tile.len() == order {
            break;
        }
        let g = hom.apply_idx(w.coords());
        if !seen[g] {
            seen[g] = true;
            tile.push(w);
        }
    }
    if tile.len() != order {
        return Err(Error::Precondition(format!("{hom} is not surjective on S_{{{},{}}}", hom.dim(), e + 1)));
    }
    Ok(tile)
}

/// Whether the translates of `cells` by `ker(phi)` partition the torus
/// `(Z_p)^n`, `p` the period of `phi`. Since `p Z^n ⊆ ker(phi)`, this is a
/// finite check of a lattice tiling of `Z^n`.
pub fn torus_tiling_check(hom: &Homomorphism, cells: &[Word]) -> Result<bool> {
    let order = hom.group().order();
    if cells.len() as u64 != order {
        return Err(Error::InvalidArgument(format!("{} cells for a group of order {order}", cells.len())));
    }
    if let Some(c) = cells.iter().find(|c| c.dim() != hom.dim()) {
        return Err(Error::DimensionMismatch { expected: hom.dim(), found: c.dim() });
    }
    let n = hom.dim();
    let p = hom.period();
    let mut kernel = Vec::new();
    for_each_torus_point(n, p, &mut |t| {
        if hom.apply_idx(t) == 0 {
            kernel.extend_from_slice(t);
        }
    })?;
    let total = (p as usize).pow(n as u32);
    let mut hits = vec![0u32; total];
    let pi = p as i64;
    for l in kernel.chunks_exact(n) {
        for c in cells {
            let idx = l
                .iter()
                .zip(c.coords())
                .fold(0usize, |acc, (&a, &b)| acc * p as usize + (a + b).rem_euclid(pi) as usize);
            hits[idx] += 1;
        }
    }
    Ok(hits.iter().all(|&h| h == 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_examples() {
        let h7 = search_optimal_embedding(3, 7, SearchMode::Cyclic, u128::MAX).unwrap().unwrap();
        assert_eq!(h7, Homomorphism::cyclic(7, &[1, 2, 3]).unwrap());
        assert_eq!(search_optimal_embedding(3, 25, SearchMode::Cyclic, u128::MAX).unwrap(), None);
        assert_eq!(search_optimal_embedding(3, 25, SearchMode::AllGroups, u128::MAX).unwrap(), None);
        let h55 = search_optimal_embedding(3, 55, SearchMode::Cyclic, u128::MAX).unwrap().unwrap();
        assert!(crate::embedding::is_optimal(&h55).unwrap());
        assert!(matches!(search_optimal_embedding(3, 55, SearchMode::Cyclic, 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn appendix_parsing() {
        let rows = bundled_appendix();
        assert_eq!(rows.len(), 122);
        assert!(rows.iter().all(AppendixRow::follows_e1_convention));
        let r438 = rows.iter().find(|r| r.k == 438).unwrap();
        assert_eq!(r438.images, [2, 45, 122]);

        assert!(matches!(parse_appendix("k,a,b,c\n1,1,1,1\n".as_bytes()), Err(Error::MalformedRow { line: 1, .. })));
        assert!(matches!(
            parse_appendix("k,phi_e1,phi_e2,phi_e3\n14,1,2,5\n15,1,x,4\n".as_bytes()),
            Err(Error::MalformedRow { line: 3, .. })
        ));
        assert!(parse_appendix("k,phi_e1,phi_e2,phi_e3\n0,1,2,3\n".as_bytes()).is_err());
        assert!(parse_appendix("k,phi_e1,phi_e2,phi_e3\n14,1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn selected_rows_verify() {
        let rows = [
            AppendixRow { k: 14, images: [1, 2, 5] },
            AppendixRow { k: 438, images: [2, 45, 122] },
            AppendixRow { k: 455, images: [1, 16, 199] },
        ];
        let report = verify_appendix(&rows, 0, false).unwrap();
        assert!(report.all_rows_pass, "{:?}", report.failures);
        let bad = verify_appendix(&[AppendixRow { k: 16, images: [1, 1, 1] }], 1, true).unwrap();
        assert_eq!(bad.failures, vec![16]);
        assert!(bad.rows[0].replacement.is_some());
        assert!(!bad.coverage_complete);
    }

    #[test]
    fn planar_perfect_code() {
        let hom = Homomorphism::cyclic(13, &[2, 3]).unwrap();
        let code = build_code(&hom, 2).unwrap();
        assert_eq!(code.class(), CodeClass::Perfect);
        assert_eq!(code.covering_radius(), 2);
        assert_eq!(code.period(), 13);
        assert_eq!(code.minimum_distance_on_torus().unwrap(), 5);
        let c = Word::new(vec![2, 3]).unwrap(); // 4 + 9 = 13
        assert!(code.is_codeword(&c).unwrap());
        assert_eq!(code.decode(&c).unwrap(), c);
    }

    #[test]
    fn build_preconditions() {
        assert!(build_code(&Homomorphism::cyclic(1, &[0, 0]).unwrap(), 0).is_err());
        assert!(build_code(&Homomorphism::cyclic(16, &[1, 5]).unwrap(), 2).is_err());
        assert!(build_code(&Homomorphism::cyclic(16, &[2, 4]).unwrap(), 0).is_err(), "not surjective");
        let other = build_code(&Homomorphism::cyclic(16, &[1, 5]).unwrap(), 1).unwrap();
        assert_eq!(other.class(), CodeClass::Other);
    }

    #[test]
    fn tiling_checks() {
        let hom = Homomorphism::cyclic(13, &[2, 3]).unwrap();
        let sphere = enumerate_sphere(2, 2);
        assert!(torus_tiling_check(&hom, &sphere).unwrap());
        let mut dup = sphere.clone();
        dup[12] = Word::new(vec![5, 0]).unwrap(); // 10, already hit by (-1, -1)
        assert!(!torus_tiling_check(&hom, &dup).unwrap());
        assert!(torus_tiling_check(&hom, &sphere[..12]).is_err());

        let h27 = Homomorphism::cyclic(27, &[1, 5, 8]).unwrap();
        let tile = choose_tile(&h27, 2).unwrap();
        assert_eq!(tile.len(), 27);
        assert!(tile.iter().all(|w| w.lee_weight() <= 3));
        assert!(torus_tiling_check(&h27, &tile).unwrap());
    }

    #[test]
    fn code_spec_roundtrip() {
        let code = build_code(&Homomorphism::cyclic(55, &[1, 5, 21]).unwrap(), 2).unwrap();
        let json = serde_json::to_value(&code).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"n": 3, "group": "Z_55", "images": [1, 5, 21], "e": 2, "period": 55, "covering_radius": 3})
        );
        let spec: CodeSpec = serde_json::from_value(json).unwrap();
        assert_eq!(LinearLeeCode::from_spec(&spec).unwrap(), code);
        let mut wrong = spec.clone();
        wrong.covering_radius = 2;
        assert!(LinearLeeCode::from_spec(&wrong).is_err());
    }
}
