//! Curve classes of the extended fan: the kernel lattice of the ray matrix,
//! primitive collections and classes, Mori-cone generators, intersection
//! numbers and nef/ample certificates.

use crate::arith::{Int, Rat};
use crate::linalg::{kernel_basis_int, same_lattice, solve_integer, solve_rational, IMat};
use crate::lp::nonneg_combination;
use crate::toricfan::{is_cone_supported, DeltaFan};
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Primitive-collection enumeration is exponential in the ray count; inputs
/// beyond this bound are rejected instead of silently grinding.
pub const MAX_RAYS_FOR_ENUMERATION: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("{0} rays exceed the enumeration bound of {MAX_RAYS_FOR_ENUMERATION}")]
    TooManyRays(usize),
    #[error("ray set {0:?} is not a primitive collection")]
    NotPrimitiveCollection(Vec<usize>),
    #[error("fan defect: {0}")]
    FanDefect(String),
    #[error("no integer basis of the kernel lattice with nef duals found; supply one explicitly")]
    NoNefBasis,
    #[error("class is not in the kernel lattice")]
    NotInKernel,
}

/// Integer vector (d_rho) over the rays of the extended fan, lying in the
/// kernel of the ray matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurveClass {
    pub components: Vec<Int>,
}

impl CurveClass {
    pub fn new(delta: &DeltaFan, components: Vec<Int>) -> Result<Self, CurveError> {
        let c = CurveClass { components };
        if !c.in_kernel(delta) {
            return Err(CurveError::NotInKernel);
        }
        Ok(c)
    }

    pub fn in_kernel(&self, delta: &DeltaFan) -> bool {
        if self.components.len() != delta.num_rays() {
            return false;
        }
        (0..delta.rank).all(|row| {
            let mut s = Int::zero();
            for (j, d) in self.components.iter().enumerate() {
                s += d * &delta.rays[j][row];
            }
            s.is_zero()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|x| x.is_zero())
    }
}

/// Componentwise positive and negative parts: d = d_plus - d_minus.
pub fn plus_minus(d: &[Int]) -> (Vec<Int>, Vec<Int>) {
    let plus = d
        .iter()
        .map(|x| if x.is_positive() { x.clone() } else { Int::zero() })
        .collect();
    let minus = d
        .iter()
        .map(|x| if x.is_negative() { -x.clone() } else { Int::zero() })
        .collect();
    (plus, minus)
}

pub fn support_of_positive_part(d: &[Int]) -> Vec<usize> {
    d.iter()
        .enumerate()
        .filter(|(_, x)| x.is_positive())
        .map(|(i, _)| i)
        .collect()
}

/// Kernel lattice basis of the ray matrix, in Hermite-canonical form.
pub fn kernel_basis(delta: &DeltaFan) -> Vec<Vec<Int>> {
    kernel_basis_int(&delta.ray_matrix())
}

pub fn kernel_rank(delta: &DeltaFan) -> usize {
    delta.num_rays() - delta.rank
}

/// All minimal non-faces of the cone complex: ray sets not supported by a
/// cone whose every proper subset is supported. Breadth-first over subset
/// sizes; supersets of found non-faces are pruned.
pub fn primitive_collections(delta: &DeltaFan) -> Result<Vec<Vec<usize>>, CurveError> {
    let m = delta.num_rays();
    if m > MAX_RAYS_FOR_ENUMERATION {
        return Err(CurveError::TooManyRays(m));
    }
    let mut non_faces: Vec<Vec<usize>> = Vec::new();
    let mut subset = Vec::new();
    for size in 2..=m {
        enumerate_subsets(m, size, 0, &mut subset, &mut |s: &[usize]| {
            if non_faces.iter().any(|nf| nf.iter().all(|r| s.contains(r))) {
                return;
            }
            if !is_cone_supported(delta, s) {
                non_faces.push(s.to_vec());
            }
        });
    }
    Ok(non_faces)
}

fn enumerate_subsets(
    m: usize,
    size: usize,
    start: usize,
    acc: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if acc.len() == size {
        visit(acc);
        return;
    }
    let remaining = size - acc.len();
    for i in start..=m.saturating_sub(remaining) {
        acc.push(i);
        enumerate_subsets(m, size, i + 1, acc, visit);
        acc.pop();
    }
}

/// The curve class of a primitive collection: +1 on the collection and the
/// negated coordinates of the ray sum in its minimal containing cone.
pub fn primitive_class(delta: &DeltaFan, collection: &[usize]) -> Result<CurveClass, CurveError> {
    if is_cone_supported(delta, collection) {
        return Err(CurveError::NotPrimitiveCollection(collection.to_vec()));
    }
    let mut v = vec![Int::zero(); delta.rank];
    for &r in collection {
        for (row, x) in delta.rays[r].iter().enumerate() {
            v[row] += x;
        }
    }
    // Locate v inside a maximal cone; the minimal cone is the set of rays
    // with strictly positive coordinate, unique by the fan axioms.
    let mut found: Option<(Vec<usize>, Vec<Int>)> = None;
    for cone in delta.max_cones() {
        let a: Vec<Vec<Rat>> = (0..delta.rank)
            .map(|row| {
                cone.iter()
                    .map(|&r| Rat::from_integer(delta.rays[r][row].clone()))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
        let coords = solve_rational(&a, &rhs).expect("smooth cone rays are a lattice basis");
        if coords.iter().any(|c| c.is_negative()) {
            continue;
        }
        let mut support = Vec::new();
        let mut coeffs = Vec::new();
        for (c, &r) in coords.iter().zip(cone.iter()) {
            if !c.is_zero() {
                if !c.denom().is_one() {
                    return Err(CurveError::FanDefect(format!(
                        "non-integral cone coordinate {c} for ray sum {v:?}"
                    )));
                }
                support.push(r);
                coeffs.push(c.numer().clone());
            }
        }
        match &found {
            None => found = Some((support, coeffs)),
            Some((s0, c0)) => {
                if *s0 != support || *c0 != coeffs {
                    return Err(CurveError::FanDefect(format!(
                        "ray sum {v:?} has two distinct minimal cones"
                    )));
                }
            }
        }
    }
    let Some((support, coeffs)) = found else {
        return Err(CurveError::FanDefect(format!(
            "ray sum {v:?} lies in no cone; the base fan is not complete"
        )));
    };
    if support.iter().any(|r| collection.contains(r)) {
        return Err(CurveError::FanDefect(format!(
            "minimal cone {support:?} meets the collection {collection:?}"
        )));
    }
    let mut d = vec![Int::zero(); delta.num_rays()];
    for &r in collection {
        d[r] = Int::one();
    }
    for (&r, a) in support.iter().zip(&coeffs) {
        d[r] = -a.clone();
    }
    CurveClass::new(delta, d)
}

/// Primitive collections together with their (deduplicated) classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveClassSet {
    pub collections: Vec<Vec<usize>>,
    pub classes: Vec<CurveClass>,
}

pub fn mori_generators(delta: &DeltaFan) -> Result<PrimitiveClassSet, CurveError> {
    let collections = primitive_collections(delta)?;
    let mut classes: Vec<CurveClass> = Vec::new();
    let mut kept = Vec::new();
    for c in collections {
        let class = primitive_class(delta, &c)?;
        if !classes.contains(&class) {
            classes.push(class);
            kept.push(c);
        }
    }
    Ok(PrimitiveClassSet {
        collections: kept,
        classes,
    })
}

/// Toric divisor data, either as ray coefficients or in the fixed nef basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisorClass {
    RayCoeffs(Vec<Int>),
    BasisCoeffs(Vec<Int>),
}

pub fn pair_ray(coeffs: &[Int], d: &[Int]) -> Int {
    coeffs.iter().zip(d).map(|(a, b)| a * b).sum()
}

/// A verified basis of the kernel lattice whose dual divisor classes are nef.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Basis {
    pub basis: Vec<CurveClass>,
    pub dual_nef: Vec<bool>,
}

impl H2Basis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Integer coordinates of a kernel vector in this basis.
    pub fn coords(&self, d: &[Int]) -> Option<Vec<Int>> {
        let m = d.len();
        let a: IMat = (0..m)
            .map(|row| self.basis.iter().map(|b| b.components[row].clone()).collect())
            .collect();
        solve_integer(&a, d)
    }

    /// Integer ray-coefficient representatives of the dual divisor classes.
    pub fn dual_divisors(&self) -> Vec<Vec<Int>> {
        let r = self.rank();
        let m = self.basis[0].components.len();
        let b: IMat = (0..r)
            .map(|a| (0..m).map(|j| self.basis[a].components[j].clone()).collect())
            .collect();
        (0..r)
            .map(|a| {
                let mut e = vec![Int::zero(); r];
                e[a] = Int::one();
                solve_integer(&b, &e).expect("kernel lattice is saturated")
            })
            .collect()
    }
}

pub fn intersect(divisor: &DivisorClass, d: &CurveClass, basis: &H2Basis) -> Int {
    match divisor {
        DivisorClass::RayCoeffs(a) => pair_ray(a, &d.components),
        DivisorClass::BasisCoeffs(t) => {
            let coords = basis
                .coords(&d.components)
                .expect("curve class must lie in the kernel lattice");
            t.iter().zip(&coords).map(|(a, b)| a * b).sum()
        }
    }
}

pub fn is_nef(divisor: &DivisorClass, gens: &PrimitiveClassSet, basis: &H2Basis) -> bool {
    gens.classes
        .iter()
        .all(|c| !intersect(divisor, c, basis).is_negative())
}

pub fn is_ample(divisor: &DivisorClass, gens: &PrimitiveClassSet, basis: &H2Basis) -> bool {
    gens.classes
        .iter()
        .all(|c| intersect(divisor, c, basis).is_positive())
}

/// Exact Mori-cone membership: d is a nonnegative rational combination of
/// the generators.
pub fn in_mori_cone(gens: &PrimitiveClassSet, d: &[Int]) -> bool {
    let g: Vec<Vec<Int>> = gens.classes.iter().map(|c| c.components.clone()).collect();
    nonneg_combination(&g, d).is_some()
}

/// Checks that the rows span the kernel lattice over the integers and that
/// every dual class is nef. Returns all violations.
pub fn verify_h2_basis(
    delta: &DeltaFan,
    basis: &[CurveClass],
    gens: &PrimitiveClassSet,
) -> Vec<String> {
    let mut bad = Vec::new();
    let expected_rank = kernel_rank(delta);
    if basis.len() != expected_rank {
        bad.push(format!(
            "basis has {} elements, kernel rank is {expected_rank}",
            basis.len()
        ));
        return bad;
    }
    for (i, b) in basis.iter().enumerate() {
        if !b.in_kernel(delta) {
            bad.push(format!("basis vector {i} is not in the kernel lattice"));
        }
    }
    if !bad.is_empty() {
        return bad;
    }
    let rows: Vec<Vec<Int>> = basis.iter().map(|b| b.components.clone()).collect();
    if !same_lattice(&rows, &kernel_basis(delta)) {
        bad.push("vectors do not span the kernel lattice over the integers".to_string());
        return bad;
    }
    let h2 = H2Basis {
        basis: basis.to_vec(),
        dual_nef: vec![false; basis.len()],
    };
    // T_a is nef iff the a-th coordinate of every Mori generator is >= 0.
    for a in 0..basis.len() {
        for c in &gens.classes {
            let coords = h2.coords(&c.components).expect("basis spans the lattice");
            if coords[a].is_negative() {
                bad.push(format!(
                    "dual class {a} pairs negatively with the generator {:?}",
                    c.components
                ));
                break;
            }
        }
    }
    bad
}

/// Builds a verified basis: a user-supplied one is checked, otherwise the
/// primitive classes themselves are tried, then a bounded unimodular search.
pub fn resolve_h2_basis(
    delta: &DeltaFan,
    gens: &PrimitiveClassSet,
    supplied: Option<Vec<CurveClass>>,
) -> Result<H2Basis, CurveError> {
    let r = kernel_rank(delta);
    if let Some(basis) = supplied {
        let bad = verify_h2_basis(delta, &basis, gens);
        if !bad.is_empty() {
            return Err(CurveError::FanDefect(format!(
                "supplied h2 basis rejected: {}",
                bad.join("; ")
            )));
        }
        return Ok(H2Basis {
            dual_nef: vec![true; basis.len()],
            basis,
        });
    }
    // Preferred choice: a subset of the primitive classes.
    if gens.classes.len() >= r {
        let mut idx: Vec<usize> = Vec::new();
        let mut result = None;
        enumerate_subsets(gens.classes.len(), r, 0, &mut idx, &mut |s: &[usize]| {
            if result.is_some() {
                return;
            }
            let candidate: Vec<CurveClass> =
                s.iter().map(|&i| gens.classes[i].clone()).collect();
            if verify_h2_basis(delta, &candidate, gens).is_empty() {
                result = Some(candidate);
            }
        });
        if let Some(basis) = result {
            return Ok(H2Basis {
                dual_nef: vec![true; basis.len()],
                basis,
            });
        }
    }
    // Fallback: small unimodular images of the Hermite kernel basis.
    let kernel = kernel_basis(delta);
    if r <= 2 {
        let range: Vec<i64> = (-3..=3).collect();
        let mut mats: Vec<Vec<Vec<i64>>> = Vec::new();
        if r == 1 {
            mats.push(vec![vec![1]]);
            mats.push(vec![vec![-1]]);
        } else {
            for a in &range {
                for b in &range {
                    for c in &range {
                        for d in &range {
                            if (a * d - b * c).abs() == 1 {
                                mats.push(vec![vec![*a, *b], vec![*c, *d]]);
                            }
                        }
                    }
                }
            }
        }
        for m in mats {
            let rows: Vec<Vec<Int>> = (0..r)
                .map(|i| {
                    (0..kernel[0].len())
                        .map(|j| {
                            (0..r)
                                .map(|l| Int::from(m[i][l]) * &kernel[l][j])
                                .sum::<Int>()
                        })
                        .collect()
                })
                .collect();
            let candidate: Vec<CurveClass> = rows
                .into_iter()
                .map(|components| CurveClass { components })
                .collect();
            if verify_h2_basis(delta, &candidate, gens).is_empty() {
                return Ok(H2Basis {
                    dual_nef: vec![true; candidate.len()],
                    basis: candidate,
                });
            }
        }
    }
    Err(CurveError::NoNefBasis)
}

/// Ray-coefficient divisors of the input bundles on the extended fan: the
/// class of L_i is minus the i-th bundle ray divisor.
pub fn bundle_divisor_ray_coeffs(delta: &DeltaFan, bundle: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); delta.num_rays()];
    let idx = delta
        .bundle_ray_indices()
        .nth(bundle)
        .expect("bundle index in range");
    v[idx] = -Int::one();
    v
}

/// Anticanonical pairing: -K_Y · d = sum of all components.
pub fn anticanonical_pairing(d: &[Int]) -> Int {
    d.iter().sum()
}

/// Lattice points of the Mori cone with coordinate sum <= level, in
/// lexicographic coordinate order.
pub fn ne_points_up_to(
    gens: &PrimitiveClassSet,
    basis: &H2Basis,
    level: u32,
) -> Vec<(Vec<u32>, Vec<Int>)> {
    let r = basis.rank();
    let m = basis.basis[0].components.len();
    let mut out = Vec::new();
    let mut coords = vec![0u32; r];
    simplex_points(level, 0, &mut coords, &mut |coords: &[u32]| {
        let mut d = vec![Int::zero(); m];
        for (a, &c) in coords.iter().enumerate() {
            for j in 0..m {
                d[j] += Int::from(c as i64) * &basis.basis[a].components[j];
            }
        }
        if in_mori_cone(gens, &d) {
            out.push((coords.to_vec(), d));
        }
    });
    out
}

fn simplex_points(budget: u32, pos: usize, coords: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if pos == coords.len() {
        visit(coords);
        return;
    }
    for c in 0..=budget {
        coords[pos] = c;
        simplex_points(budget - c, pos + 1, coords, visit);
    }
    coords[pos] = 0;
}

/// Outcome of one seeded randomized suite, reproducible from the seed.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Sign property of the Mori cone, both directions, on seeded samples:
/// kernel vectors whose positive part is cone-supported have -d effective,
/// and nonzero effective classes have unsupported positive part.
pub fn mori_sign_suite(
    delta: &DeltaFan,
    gens: &PrimitiveClassSet,
    seed: u64,
    count: usize,
) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kernel = kernel_basis(delta);
    let r = kernel.len();
    let m = delta.num_rays();
    let mut failures = Vec::new();
    let mut checked = 0usize;

    // Direction 1: sample kernel vectors, keep those with supported d^+.
    let mut found = 0usize;
    let mut attempts = 0usize;
    while found < count && attempts < 200_000 {
        attempts += 1;
        let coeffs: Vec<i64> = (0..r).map(|_| rng.gen_range(-6..=6)).collect();
        let mut d = vec![Int::zero(); m];
        for (a, &c) in coeffs.iter().enumerate() {
            for j in 0..m {
                d[j] += Int::from(c) * &kernel[a][j];
            }
        }
        if d.iter().all(|x| x.is_zero()) {
            continue;
        }
        let support = support_of_positive_part(&d);
        if !is_cone_supported(delta, &support) {
            continue;
        }
        found += 1;
        checked += 1;
        let minus_d: Vec<Int> = d.iter().map(|x| -x.clone()).collect();
        if !in_mori_cone(gens, &minus_d) {
            failures.push(format!(
                "d = {d:?} has cone-supported positive part but -d is not effective"
            ));
        }
    }
    if found < count {
        failures.push(format!(
            "only {found} of {count} supported samples found within the attempt budget"
        ));
    }

    // Direction 2: nonzero nonnegative combinations of the generators.
    for _ in 0..count {
        let mut d = vec![Int::zero(); m];
        let mut nonzero = false;
        for c in &gens.classes {
            let lambda: i64 = rng.gen_range(0..=4);
            if lambda > 0 {
                nonzero = true;
            }
            for j in 0..m {
                d[j] += Int::from(lambda) * &c.components[j];
            }
        }
        if !nonzero {
            // Force a nonzero sample deterministically.
            let c = &gens.classes[0];
            for j in 0..m {
                d[j] += &c.components[j];
            }
        }
        checked += 1;
        let support = support_of_positive_part(&d);
        if is_cone_supported(delta, &support) {
            failures.push(format!(
                "effective d = {d:?} has cone-supported positive part"
            ));
        }
    }
    SuiteReport {
        name: "mori-sign-property".to_string(),
        seed,
        checked,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::linalg::int_mat;
    use crate::toricfan::{build_delta, BundleData, Fan};

    fn p1_fan() -> Fan {
        Fan::new(1, int_mat(&[vec![1], vec![-1]]), vec![vec![0], vec![1]])
    }

    fn pn_fan(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones: Vec<Vec<usize>> = (0..=n)
            .map(|skip| (0..=n).filter(|&i| i != skip).collect())
            .collect();
        Fan::new(n, int_mat(&rays), cones)
    }

    /// Blow-up of P^n at a torus-fixed point: extra ray -e_n subdividing the
    /// cone spanned by all rays except e_n.
    pub fn blpn_fan(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = vec![{
            let mut v = vec![0i64; n];
            v[n - 1] = -1;
            v
        }];
        for i in 0..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            rays.push(v);
        }
        rays.push(vec![-1; n]);
        // Indices: 0 = exceptional-side ray v_0, 1..=n = e_i, n+1 = -(1..1).
        let old: Vec<usize> = (1..=n + 1).collect();
        let subdivided: Vec<usize> = old.iter().copied().filter(|&i| i != n).collect();
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for skip in &old {
            let cone: Vec<usize> = old.iter().copied().filter(|i| i != skip).collect();
            if cone != subdivided {
                cones.push(cone);
            }
        }
        for skip in &subdivided {
            let mut cone: Vec<usize> = vec![0];
            cone.extend(subdivided.iter().copied().filter(|i| i != skip));
            cones.push(cone);
        }
        Fan::new(n, int_mat(&rays), cones)
    }

    fn p1_o2_delta() -> DeltaFan {
        build_delta(
            &p1_fan(),
            &BundleData {
                coeffs: vec![vec![int(2), int(0)]],
            },
        )
        .unwrap()
    }

    #[test]
    fn kernel_of_p1_o2() {
        let delta = p1_o2_delta();
        assert_eq!(kernel_basis(&delta), vec![vec![int(1), int(1), int(-2)]]);
        assert_eq!(kernel_rank(&delta), 1);
    }

    #[test]
    fn kernel_of_bare_p1() {
        let delta = build_delta(&p1_fan(), &BundleData::none()).unwrap();
        assert_eq!(kernel_basis(&delta), vec![vec![int(1), int(1)]]);
    }

    #[test]
    fn kernel_of_blp3_spans_e_and_h_minus_e() {
        let n = 3;
        let delta = build_delta(&blpn_fan(n), &BundleData::none()).unwrap();
        let basis = kernel_basis(&delta);
        assert_eq!(basis.len(), 2);
        // e: -1 at ray 0, +1 at rays 1..n-1, 0 at ray n, +1 at ray n+1.
        let mut e = vec![int(0); n + 2];
        e[0] = int(-1);
        for i in 1..n {
            e[i] = int(1);
        }
        e[n + 1] = int(1);
        // h - e: +1 at ray 0, +1 at ray n.
        let mut hme = vec![int(0); n + 2];
        hme[0] = int(1);
        hme[n] = int(1);
        assert!(same_lattice(&basis, &[e, hme]));
    }

    #[test]
    fn plus_minus_examples() {
        let (p, m) = plus_minus(&[int(1), int(1), int(-2)]);
        assert_eq!(p, vec![int(1), int(1), int(0)]);
        assert_eq!(m, vec![int(0), int(0), int(2)]);
        let (p, m) = plus_minus(&[int(0)]);
        assert_eq!((p, m), (vec![int(0)], vec![int(0)]));
        let (p, m) = plus_minus(&[int(-3), int(2)]);
        assert_eq!(p, vec![int(0), int(2)]);
        assert_eq!(m, vec![int(3), int(0)]);
    }

    #[test]
    fn pn_has_one_primitive_collection() {
        for n in 1..=4 {
            let delta = build_delta(&pn_fan(n), &BundleData::none()).unwrap();
            let cols = primitive_collections(&delta).unwrap();
            assert_eq!(cols, vec![(0..=n).collect::<Vec<_>>()], "n = {n}");
        }
    }

    #[test]
    fn blpn_has_two_primitive_collections() {
        for n in 2..=3 {
            let delta = build_delta(&blpn_fan(n), &BundleData::none()).unwrap();
            let mut cols = primitive_collections(&delta).unwrap();
            cols.sort();
            let mut expected = vec![
                vec![0, n],
                (1..=n + 1).filter(|&i| i != n).collect::<Vec<_>>(),
            ];
            expected.sort();
            assert_eq!(cols, expected, "n = {n}");
        }
    }

    #[test]
    fn bundle_rays_never_join_collections() {
        let delta = p1_o2_delta();
        let cols = primitive_collections(&delta).unwrap();
        assert_eq!(cols, vec![vec![0, 1]]);
        for c in &cols {
            assert!(c.iter().all(|&r| r < delta.num_base_rays()));
        }
    }

    #[test]
    fn primitive_class_on_p1_o2() {
        let delta = p1_o2_delta();
        let class = primitive_class(&delta, &[0, 1]).unwrap();
        assert_eq!(class.components, vec![int(1), int(1), int(-2)]);
    }

    #[test]
    fn primitive_class_on_pn_is_all_ones() {
        let delta = build_delta(&pn_fan(3), &BundleData::none()).unwrap();
        let class = primitive_class(&delta, &[0, 1, 2, 3]).unwrap();
        assert_eq!(class.components, vec![int(1); 4]);
    }

    #[test]
    fn primitive_class_rejects_faces() {
        let delta = build_delta(&pn_fan(2), &BundleData::none()).unwrap();
        assert!(matches!(
            primitive_class(&delta, &[0, 1]),
            Err(CurveError::NotPrimitiveCollection(_))
        ));
    }

    #[test]
    fn mori_generators_of_blp2() {
        let delta = build_delta(&blpn_fan(2), &BundleData::none()).unwrap();
        let gens = mori_generators(&delta).unwrap();
        assert_eq!(gens.classes.len(), 2);
        // e = (-1, 1, 0, 1), h - e = (1, 0, 1, 0) in ray order v0, e1, e2, -(1,1).
        let mut classes: Vec<Vec<Int>> =
            gens.classes.iter().map(|c| c.components.clone()).collect();
        classes.sort();
        assert_eq!(
            classes,
            vec![
                vec![int(-1), int(1), int(0), int(1)],
                vec![int(1), int(0), int(1), int(0)],
            ]
        );
    }

    #[test]
    fn p1xp1_has_the_two_rulings() {
        let fan = Fan::new(
            2,
            int_mat(&[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]),
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
        );
        let delta = build_delta(&fan, &BundleData::none()).unwrap();
        let gens = mori_generators(&delta).unwrap();
        let mut classes: Vec<Vec<Int>> =
            gens.classes.iter().map(|c| c.components.clone()).collect();
        classes.sort();
        assert_eq!(
            classes,
            vec![
                vec![int(0), int(0), int(1), int(1)],
                vec![int(1), int(1), int(0), int(0)],
            ]
        );
    }

    #[test]
    fn intersections_on_pn_and_blpn() {
        // O(a) on P^n against h: ray-coefficient a on one ray.
        let delta = build_delta(&pn_fan(3), &BundleData::none()).unwrap();
        let gens = mori_generators(&delta).unwrap();
        let basis = resolve_h2_basis(&delta, &gens, None).unwrap();
        let a_h = DivisorClass::RayCoeffs({
            let mut v = vec![int(0); 4];
            v[0] = int(5);
            v
        });
        let h = &gens.classes[0];
        assert_eq!(intersect(&a_h, h, &basis), int(5));
        let zero = CurveClass {
            components: vec![int(0); 4],
        };
        assert_eq!(intersect(&a_h, &zero, &basis), int(0));

        // E against e on the blow-up: E = D_0.
        let delta = build_delta(&blpn_fan(2), &BundleData::none()).unwrap();
        let gens = mori_generators(&delta).unwrap();
        let basis = resolve_h2_basis(&delta, &gens, None).unwrap();
        let e_div = DivisorClass::RayCoeffs({
            let mut v = vec![int(0); 4];
            v[0] = int(1);
            v
        });
        let e_class = gens
            .classes
            .iter()
            .find(|c| c.components[0] == int(-1))
            .unwrap();
        assert_eq!(intersect(&e_div, e_class, &basis), int(-1));
    }

    #[test]
    fn nef_and_ample_on_blp2() {
        let delta = build_delta(&blpn_fan(2), &BundleData::none()).unwrap();
        let gens = mori_generators(&delta).unwrap();
        let basis = resolve_h2_basis(&delta, &gens, None).unwrap();
        // aH + bE as ray coefficients: a·D_n + b·D_0.
        let div = |a: i64, b: i64| {
            let mut v = vec![int(0); 4];
            v[0] = int(b);
            v[2] = int(a);
            DivisorClass::RayCoeffs(v)
        };
        assert!(is_ample(&div(2, -1), &gens, &basis));
        assert!(!is_ample(&div(1, 0), &gens, &basis)); // H is nef, not ample
        assert!(is_nef(&div(1, 0), &gens, &basis));
        assert!(is_nef(&div(0, 0), &gens, &basis));
        assert!(!is_ample(&div(0, 0), &gens, &basis));
    }

    #[test]
    fn anticanonical_minus_bundle_on_cy() {
        // -K - L for (P^2, O(3)) is nef but not ample.
        let fan = pn_fan(2);
        let delta = build_delta(
            &fan,
            &BundleData {
                coeffs: vec![vec![int(3), int(0), int(0)]],
            },
        )
        .unwrap();
        let gens = mori_generators(&delta).unwrap();
        let basis = resolve_h2_basis(&delta, &gens, None).unwrap();
        // -K_X - L pulls back to the sum of all extended-fan divisors.
        let coeffs = vec![int(1); delta.num_rays()];
        let div = DivisorClass::RayCoeffs(coeffs);
        assert!(is_nef(&div, &gens, &basis));
        assert!(!is_ample(&div, &gens, &basis));
    }

    #[test]
    fn h2_basis_verification_on_blp2() {
        let delta = build_delta(&blpn_fan(2), &BundleData::none()).unwrap();
        let gens = mori_generators(&delta).unwrap();
        let e = gens
            .classes
            .iter()
            .find(|c| c.components[0] == int(-1))
            .unwrap()
            .clone();
        let hme = gens
            .classes
            .iter()
            .find(|c| c.components[0] == int(1))
            .unwrap()
            .clone();
        assert!(verify_h2_basis(&delta, &[e.clone(), hme.clone()], &gens).is_empty());
        // h = e + (h-e) spans the lattice with e, but its dual is not nef.
        let h = CurveClass {
            components: e
                .components
                .iter()
                .zip(&hme.components)
                .map(|(a, b)| a + b)
                .collect(),
        };
        let bad = verify_h2_basis(&delta, &[e.clone(), h], &gens);
        assert!(bad.iter().any(|v| v.contains("pairs negatively")));
        // Sign flip is not nef either.
        let delta1 = build_delta(&pn_fan(2), &BundleData::none()).unwrap();
        let gens1 = mori_generators(&delta1).unwrap();
        let minus_h = CurveClass {
            components: vec![int(-1); 3],
        };
        let bad = verify_h2_basis(&delta1, &[minus_h], &gens1);
        assert!(!bad.is_empty());
    }

    #[test]
    fn auto_basis_picks_primitive_classes() {
        let delta = build_delta(&blpn_fan(2), &BundleData::none()).unwrap();
        let gens = mori_generators(&delta).unwrap();
        let basis = resolve_h2_basis(&delta, &gens, None).unwrap();
        assert_eq!(basis.rank(), 2);
        assert!(gens.classes.contains(&basis.basis[0]));
        assert!(gens.classes.contains(&basis.basis[1]));
        // Duals of (e, h-e) are integer representatives of (H-E, H).
        let duals = basis.dual_divisors();
        for (a, dual) in duals.iter().enumerate() {
            for (b, class) in basis.basis.iter().enumerate() {
                let expected = if a == b { int(1) } else { int(0) };
                assert_eq!(pair_ray(dual, &class.components), expected);
            }
        }
    }

    #[test]
    fn ne_points_enumeration_on_blp2() {
        let delta = build_delta(&blpn_fan(2), &BundleData::none()).unwrap();
        let gens = mori_generators(&delta).unwrap();
        let basis = resolve_h2_basis(&delta, &gens, None).unwrap();
        let pts = ne_points_up_to(&gens, &basis, 2);
        // Simplex of coordinate sums <= 2 in two coordinates: 6 points.
        assert_eq!(pts.len(), 6);
        assert!(pts.iter().any(|(c, _)| c == &vec![0, 0]));
        assert!(pts.iter().any(|(c, _)| c == &vec![2, 0]));
    }

    #[test]
    fn cone_support_agrees_with_collection_containment() {
        // S is supported by a cone iff it contains no primitive collection.
        use crate::toricfan::is_cone_supported;
        for delta in [
            p1_o2_delta(),
            build_delta(&blpn_fan(2), &BundleData::none()).unwrap(),
        ] {
            let collections = primitive_collections(&delta).unwrap();
            let m = delta.num_rays();
            for mask in 0u32..(1 << m) {
                let s: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
                let supported = is_cone_supported(&delta, &s);
                let contains_collection = collections
                    .iter()
                    .any(|c| c.iter().all(|r| s.contains(r)));
                assert_eq!(supported, !contains_collection, "S = {s:?}");
            }
        }
    }

    #[test]
    fn mori_sign_suite_is_clean_on_examples() {
        for delta in [
            p1_o2_delta(),
            build_delta(&blpn_fan(2), &BundleData::none()).unwrap(),
        ] {
            let gens = mori_generators(&delta).unwrap();
            let report = mori_sign_suite(&delta, &gens, 17, 50);
            assert!(report.failures.is_empty(), "{:?}", report.failures);
        }
    }
}
