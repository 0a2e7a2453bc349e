//! Fans of smooth projective toric varieties and the extended fan of the
//! total space of a split bundle's dual.

use crate::arith::{Int, Rat};
use crate::linalg::{det_int, is_primitive, solve_rational, IMat};
use crate::lp;
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("fan is invalid: {0:?}")]
    Invalid(Vec<String>),
    #[error("bundle coefficient list {index} has length {got}, expected {expected}")]
    BundleLength {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("no strictly concave support function exists (input is not quasi-projective)")]
    Infeasible,
    #[error("supplied weights are not strictly concave across wall {0:?}")]
    NotConcave(Vec<usize>),
    #[error("ray index {0} out of range")]
    RayIndex(usize),
}

/// A complete simplicial smooth fan, given by primitive rays and maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub rank: usize,
    pub rays: Vec<Vec<Int>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<Vec<Int>>, max_cones: Vec<Vec<usize>>) -> Self {
        let max_cones = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Fan {
            rank,
            rays,
            max_cones,
        }
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }
}

/// Per-bundle toric divisor coefficients: L_i is the sum of coeffs\[i\]\[theta\]·D_theta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleData {
    pub coeffs: Vec<Vec<Int>>,
}

impl BundleData {
    pub fn none() -> Self {
        BundleData { coeffs: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RayKind {
    Base,
    Bundle,
}

/// Extended fan: base rays lifted by bundle coefficients, plus one unit ray
/// per bundle. Cones are never materialized; a ray set spans a cone iff its
/// base part lies in a single cone of the base fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaFan {
    pub base_fan: Fan,
    pub rank: usize,
    pub rays: Vec<Vec<Int>>,
    pub ray_kind: Vec<RayKind>,
}

impl DeltaFan {
    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn k(&self) -> usize {
        self.ray_kind
            .iter()
            .filter(|k| **k == RayKind::Bundle)
            .count()
    }

    pub fn num_base_rays(&self) -> usize {
        self.base_fan.num_rays()
    }

    pub fn base_ray_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_rays()).filter(|&i| self.ray_kind[i] == RayKind::Base)
    }

    pub fn bundle_ray_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_rays()).filter(|&i| self.ray_kind[i] == RayKind::Bundle)
    }

    /// Maximal cones of the extended fan: each maximal base cone together
    /// with every bundle ray.
    pub fn max_cones(&self) -> Vec<Vec<usize>> {
        let m = self.num_base_rays();
        self.base_fan
            .max_cones
            .iter()
            .map(|c| {
                let mut cone = c.clone();
                cone.extend(m..self.num_rays());
                cone
            })
            .collect()
    }

    /// Ray matrix with rays as columns (rank x num_rays).
    pub fn ray_matrix(&self) -> IMat {
        (0..self.rank)
            .map(|i| (0..self.num_rays()).map(|j| self.rays[j][i].clone()).collect())
            .collect()
    }
}

/// Rational weights phi(v_rho), one per ray of the extended fan, strictly
/// concave across every interior wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFunction {
    pub weights: Vec<Rat>,
}

/// Checks all Fan invariants and reports every violation found.
pub fn validate_fan(fan: &Fan) -> Vec<String> {
    let mut bad = Vec::new();
    let n = fan.rank;
    if fan.num_rays() < n + 1 {
        bad.push(format!(
            "a complete fan of rank {n} needs at least {} rays, got {}",
            n + 1,
            fan.num_rays()
        ));
    }
    for (i, ray) in fan.rays.iter().enumerate() {
        if ray.len() != n {
            bad.push(format!("ray {i} has dimension {}, expected {n}", ray.len()));
            return bad; // further checks would index out of bounds
        }
        if ray.iter().all(|x| x.is_zero()) {
            bad.push(format!("ray {i} is zero"));
        } else if !is_primitive(ray) {
            bad.push(format!("ray {i} is not primitive"));
        }
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        if cone.len() != n {
            bad.push(format!(
                "maximal cone {ci} has {} rays, expected {n}",
                cone.len()
            ));
            continue;
        }
        if cone.iter().any(|&r| r >= fan.num_rays()) {
            bad.push(format!("maximal cone {ci} has a ray index out of range"));
            continue;
        }
        if !seen.insert(cone.clone()) {
            bad.push(format!("maximal cone {ci} repeats an earlier cone"));
            continue;
        }
        let m: IMat = cone.iter().map(|&r| fan.rays[r].clone()).collect();
        let d = det_int(&m);
        if !d.abs().is_one() {
            bad.push(format!(
                "maximal cone {ci} is not smooth (|det| = {})",
                d.abs()
            ));
        }
    }
    if !bad.is_empty() {
        return bad;
    }
    // Completeness certificate for simplicial fans: every wall is shared by
    // exactly two maximal cones and the wall-adjacency graph is connected.
    let mut wall_count: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        for drop in cone {
            let wall: Vec<usize> = cone.iter().copied().filter(|r| r != drop).collect();
            wall_count.entry(wall).or_default().push(ci);
        }
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); fan.max_cones.len()];
    for (wall, cones) in &wall_count {
        match cones.len() {
            2 => {
                adjacency[cones[0]].push(cones[1]);
                adjacency[cones[1]].push(cones[0]);
            }
            c => bad.push(format!(
                "wall {wall:?} lies in {c} maximal cones, expected 2 (fan not complete)"
            )),
        }
    }
    if bad.is_empty() && !fan.max_cones.is_empty() {
        let mut reached = vec![false; fan.max_cones.len()];
        let mut stack = vec![0usize];
        reached[0] = true;
        while let Some(c) = stack.pop() {
            for &nb in &adjacency[c] {
                if !reached[nb] {
                    reached[nb] = true;
                    stack.push(nb);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            bad.push("wall-adjacency graph is disconnected".to_string());
        }
    }
    bad
}

/// Builds the extended fan of the bundle total space: base ray theta becomes
/// (w_theta, l^1_theta, …, l^k_theta), then one unit ray per bundle.
pub fn build_delta(fan: &Fan, bundles: &BundleData) -> Result<DeltaFan, FanError> {
    let violations = validate_fan(fan);
    if !violations.is_empty() {
        return Err(FanError::Invalid(violations));
    }
    let m = fan.num_rays();
    let k = bundles.k();
    for (i, c) in bundles.coeffs.iter().enumerate() {
        if c.len() != m {
            return Err(FanError::BundleLength {
                index: i,
                got: c.len(),
                expected: m,
            });
        }
    }
    let rank = fan.rank + k;
    let mut rays = Vec::with_capacity(m + k);
    let mut ray_kind = Vec::with_capacity(m + k);
    for (t, w) in fan.rays.iter().enumerate() {
        let mut v = w.clone();
        for c in &bundles.coeffs {
            v.push(c[t].clone());
        }
        rays.push(v);
        ray_kind.push(RayKind::Base);
    }
    for i in 0..k {
        let mut v = vec![Int::zero(); rank];
        v[fan.rank + i] = Int::one();
        rays.push(v);
        ray_kind.push(RayKind::Bundle);
    }
    Ok(DeltaFan {
        base_fan: fan.clone(),
        rank,
        rays,
        ray_kind,
    })
}

/// True iff the base-ray part of the support lies inside one cone of the
/// base fan. Bundle rays never obstruct cone membership.
pub fn is_cone_supported(delta: &DeltaFan, support: &[usize]) -> bool {
    let m = delta.num_base_rays();
    let base: Vec<usize> = support
        .iter()
        .copied()
        .filter(|&i| {
            assert!(i < delta.num_rays(), "ray index {i} out of range");
            i < m
        })
        .collect();
    if base.is_empty() {
        return true;
    }
    delta
        .base_fan
        .max_cones
        .iter()
        .any(|cone| base.iter().all(|r| cone.contains(r)))
}

/// Interior walls of the extended fan, as (cone A, cone B, opposite ray in B).
/// Walls dropping a bundle ray lie on the boundary of the support and carry
/// no concavity constraint.
fn interior_walls(delta: &DeltaFan) -> Vec<(Vec<usize>, Vec<usize>, usize)> {
    let cones = delta.max_cones();
    let mut by_wall: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let base_cones = &delta.base_fan.max_cones;
    for (ci, cone) in base_cones.iter().enumerate() {
        for drop in cone {
            let wall: Vec<usize> = cone.iter().copied().filter(|r| r != drop).collect();
            by_wall.entry(wall).or_default().push(ci);
        }
    }
    let mut walls = Vec::new();
    for (wall, cs) in by_wall {
        if cs.len() == 2 {
            let (a, b) = (cs[0], cs[1]);
            let opposite = *base_cones[b].iter().find(|r| !wall.contains(r)).unwrap();
            walls.push((cones[a].clone(), cones[b].clone(), opposite));
        }
    }
    walls
}

/// Linear functional value of the cone-determined extension at a point: the
/// weights on the smooth cone's rays pin the linear function uniquely.
fn linear_extension_at(
    delta: &DeltaFan,
    cone: &[usize],
    weights: &[Rat],
    point: &[Int],
) -> Option<Rat> {
    // Solve V^T m = w on the cone, then evaluate <m, point>.
    let a: Vec<Vec<Rat>> = cone
        .iter()
        .map(|&r| {
            delta.rays[r]
                .iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let rhs: Vec<Rat> = cone.iter().map(|&r| weights[r].clone()).collect();
    let m = solve_rational(&a, &rhs)?;
    let mut s = Rat::zero();
    for (mi, pi) in m.iter().zip(point) {
        s += mi * Rat::from_integer(pi.clone());
    }
    Some(s)
}

/// Verifies strict concavity across every interior wall.
pub fn verify_support_function(delta: &DeltaFan, weights: &[Rat]) -> Result<(), FanError> {
    if weights.len() != delta.num_rays() {
        return Err(FanError::RayIndex(weights.len()));
    }
    for (cone_a, cone_b, opposite) in interior_walls(delta) {
        let ext = linear_extension_at(delta, &cone_a, weights, &delta.rays[opposite])
            .expect("smooth cone rays are a lattice basis");
        if ext <= weights[opposite] {
            let mut wall: Vec<usize> = cone_a
                .iter()
                .copied()
                .filter(|r| cone_b.contains(r))
                .collect();
            wall.sort_unstable();
            return Err(FanError::NotConcave(wall));
        }
    }
    Ok(())
}

/// Finds weights that are strictly concave across every wall, or verifies a
/// hint. The search is exact rational feasibility over the wall system with
/// margin 1; any positive scaling of a solution is again a solution.
pub fn find_support_function(
    delta: &DeltaFan,
    hint: Option<&[Rat]>,
) -> Result<SupportFunction, FanError> {
    if let Some(weights) = hint {
        verify_support_function(delta, weights)?;
        return Ok(SupportFunction {
            weights: weights.to_vec(),
        });
    }
    let nv = delta.num_rays();
    let mut ineqs: Vec<Vec<Rat>> = Vec::new();
    for (cone_a, _cone_b, opposite) in interior_walls(delta) {
        // <m_A, v_opp> - phi(v_opp) >= 1 is linear in the weights: m_A is
        // V_A^{-T} applied to the weight subvector.
        let a: Vec<Vec<Rat>> = (0..delta.rank)
            .map(|row| {
                cone_a
                    .iter()
                    .map(|&r| Rat::from_integer(delta.rays[r][row].clone()))
                    .collect()
            })
            .collect();
        // Coefficient of weight_r in <m_A, v_opp>: solve V_A^T m = e_r per
        // cone ray; equivalently express v_opp in the cone basis.
        let rhs: Vec<Rat> = delta.rays[opposite]
            .iter()
            .map(|x| Rat::from_integer(x.clone()))
            .collect();
        let coords = solve_rational(&a, &rhs).expect("smooth cone rays are a lattice basis");
        let mut iq = vec![Rat::zero(); nv + 1];
        for (c, &r) in coords.iter().zip(cone_a.iter()) {
            iq[r] = c.clone();
        }
        iq[opposite] -= Rat::one();
        iq[nv] = -Rat::one(); // ... >= 1
        ineqs.push(iq);
    }
    match lp::feasible(&ineqs, nv) {
        Some(weights) => {
            let sf = SupportFunction { weights };
            verify_support_function(delta, &sf.weights).expect("search result must verify");
            Ok(sf)
        }
        None => Err(FanError::Infeasible),
    }
}

/// Monomial weights derived from a support function: subtracting the linear
/// extension of the first maximal cone makes every weight nonnegative (zero
/// exactly on that cone) without changing pairings against kernel classes.
pub fn normalized_weights(delta: &DeltaFan, sf: &SupportFunction) -> Vec<Rat> {
    let cone0 = &delta.max_cones()[0];
    (0..delta.num_rays())
        .map(|r| {
            let ext = linear_extension_at(delta, cone0, &sf.weights, &delta.rays[r])
                .expect("smooth cone rays are a lattice basis");
            ext - &sf.weights[r]
        })
        .collect()
}

/// Membership of a rational point in the support |Delta|: some maximal cone
/// contains it with nonnegative coordinates.
pub fn in_support(delta: &DeltaFan, point: &[Rat]) -> bool {
    for cone in delta.max_cones() {
        let a: Vec<Vec<Rat>> = (0..delta.rank)
            .map(|row| {
                cone.iter()
                    .map(|&r| Rat::from_integer(delta.rays[r][row].clone()))
                    .collect()
            })
            .collect();
        if let Some(coords) = solve_rational(&a, point) {
            if coords.iter().all(|c| !c.is_negative()) {
                return true;
            }
        }
    }
    false
}
