//! Buchberger's algorithm with the normal selection strategy, reduced bases,
//! normal forms, standard monomials and colon ideals by elimination.

use super::field::CoeffField;
use super::{mono_degree, mono_div, mono_divides, mono_lcm, mono_mul, MonOrder, Mono, Poly, PolyRing};
use std::collections::BTreeSet;

/// Reduced Groebner basis: monic generators, pairwise tail-reduced, sorted
/// ascending by leading monomial. `certificate` collects the non-constant
/// coefficient contents inverted anywhere during the computation; their
/// non-vanishing locus is where the computed standard basis stays a basis.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<F: CoeffField> {
    pub gens: Vec<Poly<F>>,
    pub order: MonOrder,
    pub certificate: BTreeSet<String>,
}

impl<F: CoeffField> GroebnerBasis<F> {
    pub fn leading_monomials(&self, ring: &PolyRing<F>) -> Vec<Mono> {
        self.gens
            .iter()
            .map(|g| ring.leading_monomial(g, &self.order).unwrap())
            .collect()
    }
}

fn make_monic<F: CoeffField>(
    ring: &PolyRing<F>,
    p: &Poly<F>,
    ord: &MonOrder,
    certificate: &mut BTreeSet<String>,
) -> Poly<F> {
    let lc = ring.leading_coeff(p, ord).expect("nonzero polynomial");
    for item in ring.field.inversion_certificate(&lc) {
        certificate.insert(item);
    }
    let inv = ring.field.inv(&lc);
    ring.scale(p, &inv)
}

/// Full normal form: no term of the result is divisible by any leading
/// monomial of the reducers. Reducers are scanned in slice order.
pub fn normal_form<F: CoeffField>(
    ring: &PolyRing<F>,
    p: &Poly<F>,
    gens: &[Poly<F>],
    ord: &MonOrder,
) -> Poly<F> {
    let lms: Vec<(Mono, F::Elem)> = gens
        .iter()
        .map(|g| {
            let lm = ring.leading_monomial(g, ord).expect("nonzero reducer");
            let lc = g.terms[&lm].clone();
            (lm, lc)
        })
        .collect();
    let mut rem = Poly::zero();
    let mut work = p.clone();
    'outer: while !work.is_zero() {
        let lm = ring.leading_monomial(&work, ord).unwrap();
        let lc = work.terms[&lm].clone();
        for (i, (glm, glc)) in lms.iter().enumerate() {
            if mono_divides(glm, &lm) {
                let m = mono_div(&lm, glm);
                let c = ring.field.div(&lc, glc);
                work = ring.sub(&work, &ring.mul_term(&gens[i], &m, &c));
                continue 'outer;
            }
        }
        // Move the irreducible leading term to the remainder.
        work.terms.remove(&lm);
        rem.terms.insert(lm, lc);
    }
    rem
}

/// Buchberger with normal pair selection (smallest lcm degree, then age) and
/// the coprimality criterion. Deterministic for a fixed generator order.
pub fn buchberger<F: CoeffField>(
    ring: &PolyRing<F>,
    gens: &[Poly<F>],
    ord: &MonOrder,
) -> GroebnerBasis<F> {
    let mut certificate = BTreeSet::new();
    let mut basis: Vec<Poly<F>> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(make_monic(ring, g, ord, &mut certificate));
        }
    }
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let lm =
        |ring: &PolyRing<F>, p: &Poly<F>| -> Mono { ring.leading_monomial(p, ord).unwrap() };
    for i in 0..basis.len() {
        for j in 0..i {
            let l = mono_lcm(&lm(ring, &basis[i]), &lm(ring, &basis[j]));
            pairs.insert((mono_degree(&l), j, i));
        }
    }
    while let Some(first) = pairs.iter().next().copied() {
        pairs.remove(&first);
        let (_, i, j) = first;
        let lmi = lm(ring, &basis[i]);
        let lmj = lm(ring, &basis[j]);
        let l = mono_lcm(&lmi, &lmj);
        // Coprime leading monomials reduce to zero automatically.
        if l == mono_mul(&lmi, &lmj) {
            continue;
        }
        // Monic generators: S = x^(l-lmi)·g_i - x^(l-lmj)·g_j.
        let s = ring.sub(
            &ring.mul_term(&basis[i], &mono_div(&l, &lmi), &ring.field.one()),
            &ring.mul_term(&basis[j], &mono_div(&l, &lmj), &ring.field.one()),
        );
        let r = normal_form(ring, &s, &basis, ord);
        if !r.is_zero() {
            let r = make_monic(ring, &r, ord, &mut certificate);
            let new = basis.len();
            let lmn = lm(ring, &r);
            basis.push(r);
            for t in 0..new {
                let l = mono_lcm(&lm(ring, &basis[t]), &lmn);
                pairs.insert((mono_degree(&l), t, new));
            }
        }
    }
    // Auto-reduction to the unique reduced basis.
    let mut reduced: Vec<Poly<F>> = Vec::new();
    // Drop generators whose leading monomial is divisible by another's.
    let lms: Vec<Mono> = basis.iter().map(|g| lm(ring, g)).collect();
    for (i, g) in basis.iter().enumerate() {
        let dominated = lms.iter().enumerate().any(|(j, other)| {
            j != i && mono_divides(other, &lms[i]) && (lms[j] != lms[i] || j < i)
        });
        if !dominated {
            reduced.push(g.clone());
        }
    }
    // Tail-reduce each against the others until stable.
    loop {
        let mut changed = false;
        for i in 0..reduced.len() {
            let others: Vec<Poly<F>> = reduced
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            if others.is_empty() {
                break;
            }
            let nf = normal_form(ring, &reduced[i], &others, ord);
            if nf != reduced[i] {
                changed = true;
                if nf.is_zero() {
                    reduced.remove(i);
                } else {
                    reduced[i] = make_monic(ring, &nf, ord, &mut certificate);
                }
                break;
            }
        }
        if !changed {
            break;
        }
    }
    reduced.sort_by(|a, b| ord.cmp(&lm(ring, a), &lm(ring, b)));
    GroebnerBasis {
        gens: reduced,
        order: ord.clone(),
        certificate,
    }
}

/// Monomials outside the leading-term ideal; None when the staircase is
/// infinite.
pub fn quotient_basis<F: CoeffField>(
    ring: &PolyRing<F>,
    gb: &GroebnerBasis<F>,
) -> Option<Vec<Mono>> {
    let lms = gb.leading_monomials(ring);
    if lms.iter().any(|m| m.iter().all(|&e| e == 0)) {
        return Some(Vec::new()); // unit ideal
    }
    let n = ring.nvars();
    // Finite dimension iff every variable has a pure power among the lms.
    let mut bounds = vec![0u32; n];
    for i in 0..n {
        let bound = lms
            .iter()
            .filter(|m| m.iter().enumerate().all(|(j, &e)| j == i || e == 0))
            .map(|m| m[i])
            .min()?;
        bounds[i] = bound;
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    enumerate_box(&bounds, 0, &mut current, &mut |m: &[u32]| {
        if !lms.iter().any(|lm| mono_divides(lm, &m.to_vec())) {
            out.push(m.to_vec());
        }
    });
    out.sort_by(|a, b| gb.order.cmp(a, b));
    Some(out)
}

fn enumerate_box(bounds: &[u32], pos: usize, acc: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if pos == bounds.len() {
        visit(acc);
        return;
    }
    for e in 0..bounds[pos] {
        acc[pos] = e;
        enumerate_box(bounds, pos + 1, acc, visit);
    }
    acc[pos] = 0;
}

/// Vector-space dimension of the quotient; None for infinite.
pub fn vs_dim<F: CoeffField>(ring: &PolyRing<F>, gb: &GroebnerBasis<F>) -> Option<usize> {
    quotient_basis(ring, gb).map(|b| b.len())
}

/// Generators of (I : f), computed as (I ∩ (f))/f. The intersection comes
/// from eliminating an auxiliary variable t from t·I + (1-t)·(f) under an
/// order where t dominates.
pub fn colon_ideal<F: CoeffField>(
    ring: &PolyRing<F>,
    gens: &[Poly<F>],
    f: &Poly<F>,
    ord: &MonOrder,
) -> GroebnerBasis<F> {
    assert!(!f.is_zero(), "colon by the zero polynomial");
    let n = ring.nvars();
    let mut ext_vars = ring.vars.clone();
    ext_vars.push("t#".to_string());
    let ext = PolyRing::new(ring.field.clone(), ext_vars);
    let lift = |p: &Poly<F>| -> Poly<F> {
        Poly {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.clone();
                    e.push(0);
                    (e, c.clone())
                })
                .collect(),
        }
    };
    let mut t_mono = vec![0u32; n + 1];
    t_mono[n] = 1;
    let t = ext.mono_from_exponents(&t_mono);
    let one_minus_t = ext.sub(&ext.one(), &t);
    let mut ext_gens: Vec<Poly<F>> = gens.iter().map(|g| ext.mul(&t, &lift(g))).collect();
    ext_gens.push(ext.mul(&one_minus_t, &lift(f)));
    let elim_ord = MonOrder::ElimLast(Box::new(ord.clone()));
    let gb = buchberger(&ext, &ext_gens, &elim_ord);
    // Intersection: generators free of t; divide each exactly by f.
    let mut quotients = Vec::new();
    for g in &gb.gens {
        if g.terms.keys().all(|m| m[n] == 0) {
            let dropped = Poly {
                terms: g
                    .terms
                    .iter()
                    .map(|(m, c)| (m[..n].to_vec(), c.clone()))
                    .collect(),
            };
            let q = ring
                .divexact(&dropped, f)
                .expect("intersection elements are divisible by f");
            quotients.push(q);
        }
    }
    if quotients.is_empty() {
        return GroebnerBasis {
            gens: Vec::new(),
            order: ord.clone(),
            certificate: gb.certificate,
        };
    }
    let mut result = buchberger(ring, &quotients, ord);
    result.certificate.extend(gb.certificate);
    result
}
