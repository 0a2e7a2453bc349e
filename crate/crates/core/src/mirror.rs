//! Cohomology-valued Laurent arithmetic for the I-function: the A_d(z)
//! coefficients, their annihilation identity, the F/G layer extraction and
//! the formal mirror map.

use crate::arith::{Int, Rat};
use crate::batyrev::CohRing;
use crate::curveclasses::{in_mori_cone, ne_points_up_to, H2Basis, PrimitiveClassSet};
use crate::toricfan::DeltaFan;
use num::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MirrorError {
    #[error("class is not effective; the coefficient is only defined on the Mori cone")]
    NotEffective,
    #[error("cannot invert a factor with m = 0: the class is nilpotent")]
    NilpotentInverse,
    #[error("series has constant term {0}, expected 1")]
    BadConstantTerm(String),
}

/// Laurent polynomial in z with rational coefficients.
pub type ZLaurent = BTreeMap<i64, Rat>;

/// Element of H^{2*} ⊗ Q[z, z^{-1}] in the standard monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CohLaurent {
    pub entries: Vec<ZLaurent>,
}

impl CohLaurent {
    pub fn zero(dim: usize) -> Self {
        CohLaurent {
            entries: vec![ZLaurent::new(); dim],
        }
    }

    pub fn one(coh: &CohRing) -> Self {
        let mut v = CohLaurent::zero(coh.dim);
        let unit = coh
            .basis
            .iter()
            .position(|m| m.iter().all(|&e| e == 0))
            .expect("unit monomial");
        v.entries[unit].insert(0, Rat::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_empty())
    }

    pub fn add(&self, other: &CohLaurent) -> CohLaurent {
        let mut out = self.clone();
        for (i, e) in other.entries.iter().enumerate() {
            for (z, c) in e {
                let slot = out.entries[i].entry(*z).or_insert_with(Rat::zero);
                *slot += c;
                if slot.is_zero() {
                    out.entries[i].remove(z);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> CohLaurent {
        if c.is_zero() {
            return CohLaurent::zero(self.entries.len());
        }
        CohLaurent {
            entries: self
                .entries
                .iter()
                .map(|e| e.iter().map(|(z, x)| (*z, x * c)).collect())
                .collect(),
        }
    }

    pub fn shift_z(&self, by: i64) -> CohLaurent {
        CohLaurent {
            entries: self
                .entries
                .iter()
                .map(|e| e.iter().map(|(z, x)| (z + by, x.clone())).collect())
                .collect(),
        }
    }

    /// Multiplication by a ring class, slice by slice in z.
    pub fn mul_class(&self, coh: &CohRing, class: &[Rat]) -> CohLaurent {
        let mut out = CohLaurent::zero(coh.dim);
        let zs: std::collections::BTreeSet<i64> = self
            .entries
            .iter()
            .flat_map(|e| e.keys().copied())
            .collect();
        for z in zs {
            let slice: Vec<Rat> = self
                .entries
                .iter()
                .map(|e| e.get(&z).cloned().unwrap_or_else(Rat::zero))
                .collect();
            let prod = coh.mul(class, &slice);
            for (i, c) in prod.into_iter().enumerate() {
                if !c.is_zero() {
                    let slot = out.entries[i].entry(z).or_insert_with(Rat::zero);
                    *slot += c;
                }
            }
        }
        for e in out.entries.iter_mut() {
            e.retain(|_, c| !c.is_zero());
        }
        out
    }

    /// Multiplication by (class + m·z).
    pub fn mul_linear(&self, coh: &CohRing, class: &[Rat], m: i64) -> CohLaurent {
        let mut out = self.mul_class(coh, class);
        if m != 0 {
            out = out.add(&self.scale(&Rat::from_integer(Int::from(m))).shift_z(1));
        }
        out
    }

    /// Division by (class + m·z) for m ≠ 0, by the finite geometric series of
    /// the nilpotent part: 1/(mz + N) = Σ_j (-N)^j/(mz)^{j+1}.
    pub fn div_linear(
        &self,
        coh: &CohRing,
        class: &[Rat],
        m: i64,
    ) -> Result<CohLaurent, MirrorError> {
        if m == 0 {
            return Err(MirrorError::NilpotentInverse);
        }
        let minv = Rat::new(Int::one(), Int::from(m));
        let mut out = CohLaurent::zero(coh.dim);
        let mut cur = self.scale(&minv).shift_z(-1);
        loop {
            if cur.is_zero() {
                break;
            }
            out = out.add(&cur);
            cur = cur
                .mul_class(coh, class)
                .scale(&-minv.clone())
                .shift_z(-1);
        }
        Ok(out)
    }

    /// Coefficient of z^power in the component of a basis element.
    pub fn coeff(&self, basis_index: usize, z_power: i64) -> Rat {
        self.entries[basis_index]
            .get(&z_power)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Evaluation at z = 1 as a ring element.
    pub fn at_z_one(&self) -> Vec<Rat> {
        self.entries
            .iter()
            .map(|e| e.values().fold(Rat::zero(), |acc, c| acc + c))
            .collect()
    }
}

/// Static data shared by the I-function computations.
pub struct MirrorContext<'a> {
    pub delta: &'a DeltaFan,
    pub gens: &'a PrimitiveClassSet,
    pub basis: &'a H2Basis,
    pub coh: &'a CohRing,
    pub bundle_classes: Vec<Vec<Rat>>,
    pub base_ray_classes: Vec<Vec<Rat>>,
    base_rays: Vec<usize>,
    bundle_rays: Vec<usize>,
}

impl<'a> MirrorContext<'a> {
    pub fn new(
        delta: &'a DeltaFan,
        gens: &'a PrimitiveClassSet,
        basis: &'a H2Basis,
        coh: &'a CohRing,
    ) -> Self {
        let base_rays: Vec<usize> = delta.base_ray_indices().collect();
        let bundle_rays: Vec<usize> = delta.bundle_ray_indices().collect();
        let bundle_classes = bundle_rays
            .iter()
            .map(|&rho| coh.scale(&coh.divisor_class(rho), &-Rat::one()))
            .collect();
        let base_ray_classes = base_rays.iter().map(|&rho| coh.divisor_class(rho)).collect();
        MirrorContext {
            delta,
            gens,
            basis,
            coh,
            bundle_classes,
            base_ray_classes,
            base_rays,
            bundle_rays,
        }
    }

    fn bundle_pairing(&self, components: &[Int], i: usize) -> i64 {
        i64::try_from(&-components[self.bundle_rays[i]].clone()).expect("desk scale")
    }

    fn base_pairing(&self, components: &[Int], pos: usize) -> i64 {
        i64::try_from(&components[self.base_rays[pos]]).expect("desk scale")
    }

    /// Expected homogeneity weight of A_d: pairing with c_1(E) - c_1(T_X).
    pub fn expected_weight(&self, components: &[Int]) -> i64 {
        let e: i64 = (0..self.bundle_rays.len())
            .map(|i| self.bundle_pairing(components, i))
            .sum();
        let t: i64 = (0..self.base_rays.len())
            .map(|p| self.base_pairing(components, p))
            .sum();
        e - t
    }
}

/// The z-Laurent cohomology coefficient of q^d in the I-series.
pub fn a_coefficient(ctx: &MirrorContext, components: &[Int]) -> Result<CohLaurent, MirrorError> {
    if !in_mori_cone(ctx.gens, components) {
        return Err(MirrorError::NotEffective);
    }
    let mut out = CohLaurent::one(ctx.coh);
    for i in 0..ctx.bundle_rays.len() {
        let di = ctx.bundle_pairing(components, i);
        debug_assert!(di >= 0, "nef bundles pair nonnegatively on the Mori cone");
        for m in 1..=di {
            out = out.mul_linear(ctx.coh, &ctx.bundle_classes[i], m);
        }
    }
    for pos in 0..ctx.base_rays.len() {
        let dt = ctx.base_pairing(components, pos);
        if dt >= 0 {
            for m in 1..=dt {
                out = out.div_linear(ctx.coh, &ctx.base_ray_classes[pos], m)?;
            }
        } else {
            // Factors for m = d_θ+1 .. 0; the m = 0 factor is the bare class.
            for m in dt + 1..=0 {
                out = out.mul_linear(ctx.coh, &ctx.base_ray_classes[pos], m);
            }
        }
    }
    Ok(out)
}

/// A_d(z) is homogeneous of weight d_E - d_TX for weight(z) = 1 and
/// weight(H^{2p}) = p.
pub fn weight_homogeneous(ctx: &MirrorContext, components: &[Int], a: &CohLaurent) -> bool {
    let expected = ctx.expected_weight(components);
    let grading = ctx.coh.grading();
    a.entries.iter().enumerate().all(|(i, e)| {
        e.keys()
            .all(|&z| grading[i] as i64 + z == expected)
    })
}

/// The coefficient identity equivalent to the box operator of d'
/// annihilating the I-series, checked exactly in the ring at z = 1:
///
///   A_d(1)·Π_i [L_i + d_i + ν]_{ν=1..d'_i^-} · Π_θ [D_θ + d_θ - ν]_{ν=0..d'_θ^+-1}
/// = A_{d-d'}(1)·Π_i [L_i + (d-d')_i + ν]_{ν=1..d'_i^+} · Π_θ [D_θ + (d-d')_θ - ν]_{ν=0..d'_θ^--1},
///
/// with A_{d-d'} := 0 when d-d' is not effective.
pub fn annihilation_identity(
    ctx: &MirrorContext,
    d: &[Int],
    dprime: &[Int],
) -> Result<bool, MirrorError> {
    let coh = ctx.coh;
    let a_d = a_coefficient(ctx, d)?.at_z_one();
    let d_minus: Vec<Int> = d.iter().zip(dprime).map(|(x, y)| x - y).collect();
    let a_dm = if in_mori_cone(ctx.gens, &d_minus) {
        a_coefficient(ctx, &d_minus)?.at_z_one()
    } else {
        coh.zero_class()
    };
    let with_scalar = |class: &[Rat], c: i64| -> Vec<Rat> {
        let mut shifted = class.to_vec();
        let one = coh.one();
        for (s, u) in shifted.iter_mut().zip(&one) {
            *s += u * Rat::from_integer(Int::from(c));
        }
        shifted
    };
    let mut lhs = a_d;
    let mut rhs = a_dm;
    for i in 0..ctx.bundle_rays.len() {
        let di = ctx.bundle_pairing(d, i);
        let dpi = ctx.bundle_pairing(dprime, i);
        let dmi = di - dpi;
        for nu in 1..=(-dpi).max(0) {
            lhs = coh.mul(&lhs, &with_scalar(&ctx.bundle_classes[i], di + nu));
        }
        for nu in 1..=dpi.max(0) {
            rhs = coh.mul(&rhs, &with_scalar(&ctx.bundle_classes[i], dmi + nu));
        }
    }
    for pos in 0..ctx.base_rays.len() {
        let dt = ctx.base_pairing(d, pos);
        let dpt = ctx.base_pairing(dprime, pos);
        let dmt = dt - dpt;
        for nu in 0..dpt.max(0) {
            lhs = coh.mul(&lhs, &with_scalar(&ctx.base_ray_classes[pos], dt - nu));
        }
        for nu in 0..(-dpt).max(0) {
            rhs = coh.mul(&rhs, &with_scalar(&ctx.base_ray_classes[pos], dmt - nu));
        }
    }
    Ok(lhs == rhs)
}

/// I-series coefficients for all effective d with coordinate sum ≤ order.
pub struct ITruncation {
    pub order: u32,
    pub entries: Vec<(Vec<u32>, Vec<Int>, CohLaurent)>,
}

pub fn i_truncate(ctx: &MirrorContext, order: u32) -> Result<ITruncation, MirrorError> {
    let mut entries = Vec::new();
    for (coords, components) in ne_points_up_to(ctx.gens, ctx.basis, order) {
        let a = a_coefficient(ctx, &components)?;
        entries.push((coords, components, a));
    }
    Ok(ITruncation { order, entries })
}

/// Truncated multivariate power series in the q-coordinates.
pub type QSeries = BTreeMap<Vec<u32>, Rat>;

fn series_trim(s: &mut QSeries, order: u32) {
    s.retain(|m, c| m.iter().map(|&x| x as u64).sum::<u64>() <= order as u64 && !c.is_zero());
}

pub fn series_mul(a: &QSeries, b: &QSeries, order: u32) -> QSeries {
    let mut out = QSeries::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            if m.iter().map(|&x| x as u64).sum::<u64>() > order as u64 {
                continue;
            }
            let e = out.entry(m).or_insert_with(Rat::zero);
            *e += ca * cb;
        }
    }
    series_trim(&mut out, order);
    out
}

pub fn series_add(a: &QSeries, b: &QSeries) -> QSeries {
    let mut out = a.clone();
    for (m, c) in b {
        let e = out.entry(m.clone()).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            out.remove(m);
        }
    }
    out
}

fn graded_monomials(r: usize, order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut coords = vec![0u32; r];
    fn rec(budget: u32, pos: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == acc.len() {
            out.push(acc.clone());
            return;
        }
        for c in 0..=budget {
            acc[pos] = c;
            rec(budget - c, pos + 1, acc, out);
        }
        acc[pos] = 0;
    }
    rec(order, 0, &mut coords, &mut out);
    out.sort_by_key(|m| (m.iter().map(|&x| x as u64).sum::<u64>(), m.clone()));
    out
}

/// Inverse of a series with constant term 1.
pub fn series_inv(a: &QSeries, r: usize, order: u32) -> Result<QSeries, MirrorError> {
    let zero = vec![0u32; r];
    let c0 = a.get(&zero).cloned().unwrap_or_else(Rat::zero);
    if !c0.is_one() {
        return Err(MirrorError::BadConstantTerm(crate::arith::render_rat(&c0)));
    }
    let mut inv = QSeries::new();
    inv.insert(zero.clone(), Rat::one());
    for m in graded_monomials(r, order) {
        if m == zero {
            continue;
        }
        // inv[m] = -Σ_{0 < k ≤ m} a[k]·inv[m-k]
        let mut s = Rat::zero();
        for (k, ck) in a {
            if k == &zero || k.iter().zip(&m).any(|(x, y)| x > y) {
                continue;
            }
            let rest: Vec<u32> = m.iter().zip(k).map(|(x, y)| x - y).collect();
            if let Some(ci) = inv.get(&rest) {
                s += ck * ci;
            }
        }
        if !s.is_zero() {
            inv.insert(m, -s);
        }
    }
    Ok(inv)
}

/// exp of a series with zero constant term.
pub fn series_exp(a: &QSeries, r: usize, order: u32) -> QSeries {
    let zero = vec![0u32; r];
    assert!(
        a.get(&zero).map(|c| c.is_zero()).unwrap_or(true),
        "exp needs zero constant term"
    );
    let mut out = QSeries::new();
    out.insert(zero, Rat::one());
    let mut power = out.clone();
    let mut factorial = Rat::one();
    for j in 1..=order as u64 {
        power = series_mul(&power, a, order);
        factorial *= Rat::from_integer(Int::from(j as i64));
        if power.is_empty() {
            break;
        }
        let scaled: QSeries = power
            .iter()
            .map(|(m, c)| (m.clone(), c / &factorial))
            .collect();
        out = series_add(&out, &scaled);
    }
    out
}

/// The scalar layers of the I-series: F from (H⁰, z⁰), g₀ from (H⁰, z^{-1}),
/// g_a from the H² part of z^{-1} in nef-basis coordinates. The log layer of
/// the prefactor is kept symbolic: the full H² layer is Σ_a (log q_a + g_a/F)·T_a.
pub struct MirrorSeries {
    pub f: QSeries,
    pub g0: QSeries,
    pub ga: Vec<QSeries>,
    pub r: usize,
    pub order: u32,
}

pub fn extract_fg(ctx: &MirrorContext, it: &ITruncation) -> MirrorSeries {
    let coh = ctx.coh;
    let r = ctx.basis.rank();
    let unit = coh
        .basis
        .iter()
        .position(|m| m.iter().all(|&e| e == 0))
        .expect("unit monomial");
    // Degree-one standard monomials are single variables x_ρ.
    let deg_one: Vec<(usize, usize)> = coh
        .basis
        .iter()
        .enumerate()
        .filter(|(_, m)| crate::polyalg::mono_degree(m) == 1)
        .map(|(i, m)| {
            let rho = m.iter().position(|&e| e == 1).unwrap();
            (i, rho)
        })
        .collect();
    let mut f = QSeries::new();
    let mut g0 = QSeries::new();
    let mut ga = vec![QSeries::new(); r];
    for (coords, _, a) in &it.entries {
        let cf = a.coeff(unit, 0);
        if !cf.is_zero() {
            f.insert(coords.clone(), cf);
        }
        let c0 = a.coeff(unit, -1);
        if !c0.is_zero() {
            g0.insert(coords.clone(), c0);
        }
        // H² layer: as a divisor Σ coeff_ρ D_ρ, paired with the basis classes.
        for (slot, series) in ga.iter_mut().enumerate() {
            let mut t = Rat::zero();
            for &(i, rho) in &deg_one {
                let c = a.coeff(i, -1);
                if !c.is_zero() {
                    t += c * Rat::from_integer(ctx.basis.basis[slot].components[rho].clone());
                }
            }
            if !t.is_zero() {
                series.insert(coords.clone(), t);
            }
        }
    }
    MirrorSeries {
        f,
        g0,
        ga,
        r,
        order: it.order,
    }
}

/// Reassembling the extracted layers from the truncation reproduces them.
pub fn extraction_roundtrip(ctx: &MirrorContext, it: &ITruncation, ms: &MirrorSeries) -> bool {
    let coh = ctx.coh;
    let unit = coh
        .basis
        .iter()
        .position(|m| m.iter().all(|&e| e == 0))
        .unwrap();
    let duals = ctx.basis.dual_divisors();
    for (coords, _, a) in &it.entries {
        if ms.f.get(coords).cloned().unwrap_or_else(Rat::zero) != a.coeff(unit, 0) {
            return false;
        }
        if ms.g0.get(coords).cloned().unwrap_or_else(Rat::zero) != a.coeff(unit, -1) {
            return false;
        }
        // Rebuild the H² z^{-1} class from the T-coordinates.
        let mut rebuilt = coh.zero_class();
        for (slot, dual) in duals.iter().enumerate() {
            let t = ms.ga[slot].get(coords).cloned().unwrap_or_else(Rat::zero);
            if t.is_zero() {
                continue;
            }
            let mut class = coh.zero_class();
            for (rho, c) in dual.iter().enumerate() {
                if !c.is_zero() {
                    let d = coh.divisor_class(rho);
                    class = coh.add(&class, &coh.scale(&d, &Rat::from_integer(c.clone())));
                }
            }
            rebuilt = coh.add(&rebuilt, &coh.scale(&class, &t));
        }
        let grading = coh.grading();
        for (i, g) in grading.iter().enumerate() {
            if *g == 1 && rebuilt[i] != a.coeff(i, -1) {
                return false;
            }
        }
    }
    true
}

/// The mirror map: t₀ = g₀/F and q'_a = q_a·exp(g_a/F), all truncated.
pub struct MirrorMap {
    pub t0: QSeries,
    /// Multiplier series e_a with q'_a = q_a·e_a; constant term 1.
    pub q_corrections: Vec<QSeries>,
}

pub fn mirror_map(ms: &MirrorSeries) -> Result<MirrorMap, MirrorError> {
    let finv = series_inv(&ms.f, ms.r, ms.order)?;
    let t0 = series_mul(&ms.g0, &finv, ms.order);
    let q_corrections = ms
        .ga
        .iter()
        .map(|g| series_exp(&series_mul(g, &finv, ms.order), ms.r, ms.order))
        .collect();
    Ok(MirrorMap {
        t0,
        q_corrections,
    })
}

impl MirrorMap {
    /// Leading behavior t₀ = O(q) and q'_a = q_a(1 + O(q)).
    pub fn leading_terms_normalized(&self, r: usize) -> bool {
        let zero = vec![0u32; r];
        let t0_ok = self
            .t0
            .get(&zero)
            .map(|c| c.is_zero())
            .unwrap_or(true);
        let q_ok = self
            .q_corrections
            .iter()
            .all(|e| e.get(&zero).map(|c| c.is_one()).unwrap_or(false));
        t0_ok && q_ok
    }
}
