//! The shipped problem corpus: projective spaces with O(a), blow-ups of
//! projective space at a point with O(aH + bE) over the admissible range,
//! and P1 x P1 with and without a bundle.

use crate::cli::ProblemFile;

pub fn pn_fan_data(n: usize) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();
    rays.push(vec![-1; n]);
    let cones: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    (rays, cones)
}

pub fn pn_oa(n: usize, a: i64) -> ProblemFile {
    let (rays, max_cones) = pn_fan_data(n);
    let mut coeffs = vec![0i64; n + 1];
    coeffs[0] = a;
    ProblemFile {
        schema_version: 1,
        name: format!("p{n}_o{a}"),
        lattice_rank: n,
        rays,
        max_cones,
        bundles: vec![coeffs],
        h2_basis: None,
        ample_weights: None,
        truncation_order: None,
    }
}

/// Blow-up of P^n at a torus-fixed point. Ray order: the exceptional-side
/// ray -e_n, then e_1..e_n, then -(1,…,1).
pub fn blpn_fan_data(n: usize) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
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
    (rays, cones)
}

/// Bl_pt P^n with O(aH + bE) and the curve-class basis (e, h - e) fixed so
/// that q_1 = Q^e and q_2 = Q^{h-e}.
pub fn blpn_ab(n: usize, a: i64, b: i64) -> ProblemFile {
    let (rays, max_cones) = blpn_fan_data(n);
    let m = rays.len();
    let mut coeffs = vec![0i64; m];
    coeffs[0] = b;
    coeffs[n] = a;
    // e: -1 on ray 0, +1 on rays 1..n-1 and n+1, b on the bundle ray.
    let mut e = vec![0i64; m + 1];
    e[0] = -1;
    for i in 1..n {
        e[i] = 1;
    }
    e[n + 1] = 1;
    e[m] = b;
    // h - e: +1 on rays 0 and n, -(a+b) on the bundle ray.
    let mut hme = vec![0i64; m + 1];
    hme[0] = 1;
    hme[n] = 1;
    hme[m] = -(a + b);
    ProblemFile {
        schema_version: 1,
        name: format!("blp{n}_a{a}_b{}", b.to_string().replace('-', "m")),
        lattice_rank: n,
        rays,
        max_cones,
        bundles: vec![coeffs],
        h2_basis: Some(vec![e, hme]),
        ample_weights: None,
        truncation_order: None,
    }
}

pub fn p1xp1_fan_data() -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    (
        vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
        vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
    )
}

pub fn p1xp1() -> ProblemFile {
    let (rays, max_cones) = p1xp1_fan_data();
    ProblemFile {
        schema_version: 1,
        name: "p1xp1".to_string(),
        lattice_rank: 2,
        rays,
        max_cones,
        bundles: Vec::new(),
        h2_basis: None,
        ample_weights: None,
        truncation_order: None,
    }
}

pub fn p1xp1_o11() -> ProblemFile {
    let (rays, max_cones) = p1xp1_fan_data();
    ProblemFile {
        schema_version: 1,
        name: "p1xp1_o11".to_string(),
        lattice_rank: 2,
        rays,
        max_cones,
        bundles: vec![vec![1, 0, 1, 0]],
        h2_basis: None,
        ample_weights: None,
        truncation_order: None,
    }
}

/// Admissible blow-up parameters: b in {-1, …, 1-n} and a+b in {1, 2}.
pub fn admissible_blowup_params(n: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for b in (1 - n as i64)..=-1 {
        for s in 1..=2i64 {
            out.push((s - b, b));
        }
    }
    out.sort();
    out
}

/// Every shipped problem, in a fixed order.
pub fn all() -> Vec<ProblemFile> {
    let mut out = Vec::new();
    for n in 1..=4usize {
        for a in 1..=(n as i64 + 1) {
            out.push(pn_oa(n, a));
        }
    }
    for n in 2..=3usize {
        for (a, b) in admissible_blowup_params(n) {
            out.push(blpn_ab(n, a, b));
        }
    }
    out.push(p1xp1());
    out.push(p1xp1_o11());
    out
}
