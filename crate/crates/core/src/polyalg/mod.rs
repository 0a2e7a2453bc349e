//! Exact multivariate polynomial engine over pluggable coefficient fields,
//! with weight-based monomial orders, Buchberger Groebner bases, normal
//! forms, elimination and colon ideals.

pub mod field;
pub mod groebner;
pub mod qfrac;

pub use field::{CoeffField, QQ};
pub use groebner::{buchberger, colon_ideal, GroebnerBasis};
pub use qfrac::{QFrac, QPoly, QRat};

use crate::arith::Rat;
use num::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exponent vector over the ring's variable list.
pub type Mono = Vec<u32>;

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_div(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_lcm(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_degree(a: &Mono) -> u64 {
    a.iter().map(|&x| x as u64).sum()
}

/// Total monomial order: a rational weight per variable, ties broken by
/// graded reverse lexicographic comparison; optionally wrapped so that the
/// last variable dominates (elimination order for one auxiliary variable).
#[derive(Debug, Clone, PartialEq)]
pub enum MonOrder {
    WeightedGrevlex(Vec<Rat>),
    ElimLast(Box<MonOrder>),
}

impl MonOrder {
    pub fn grevlex(nvars: usize) -> Self {
        MonOrder::WeightedGrevlex(vec![Rat::zero(); nvars])
    }

    pub fn weight(&self, m: &Mono) -> Rat {
        match self {
            MonOrder::WeightedGrevlex(w) => {
                let mut s = Rat::zero();
                for (wi, &e) in w.iter().zip(m.iter()) {
                    if e != 0 {
                        s += wi * Rat::from_integer(crate::arith::int(e as i64));
                    }
                }
                s
            }
            MonOrder::ElimLast(inner) => inner.weight(&m[..m.len() - 1].to_vec()),
        }
    }

    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match self {
            MonOrder::WeightedGrevlex(w) => {
                let mut wa = Rat::zero();
                let mut wb = Rat::zero();
                for (wi, (&ea, &eb)) in w.iter().zip(a.iter().zip(b.iter())) {
                    if ea != 0 {
                        wa += wi * Rat::from_integer(crate::arith::int(ea as i64));
                    }
                    if eb != 0 {
                        wb += wi * Rat::from_integer(crate::arith::int(eb as i64));
                    }
                }
                wa.cmp(&wb).then_with(|| grevlex_cmp(a, b))
            }
            MonOrder::ElimLast(inner) => {
                let last = a.len() - 1;
                a[last].cmp(&b[last]).then_with(|| {
                    inner.cmp(&a[..last].to_vec(), &b[..last].to_vec())
                })
            }
        }
    }
}

fn grevlex_cmp(a: &Mono, b: &Mono) -> Ordering {
    let da = mono_degree(a);
    let db = mono_degree(b);
    if da != db {
        return da.cmp(&db);
    }
    // Equal degree: the monomial with the smaller last differing exponent
    // is the larger one.
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// Polynomial: finite map from exponent vectors to nonzero coefficients.
#[derive(Debug, Clone)]
pub struct Poly<F: CoeffField> {
    pub terms: BTreeMap<Mono, F::Elem>,
}

impl<F: CoeffField> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<F: CoeffField> Poly<F> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(mono_degree).max().unwrap_or(0)
    }
}

/// Variable context tying a coefficient field to a variable list.
#[derive(Debug, Clone)]
pub struct PolyRing<F: CoeffField> {
    pub field: F,
    pub vars: Vec<String>,
}

impl<F: CoeffField> PolyRing<F> {
    pub fn new(field: F, vars: Vec<String>) -> Self {
        PolyRing { field, vars }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn zero(&self) -> Poly<F> {
        Poly::zero()
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F> {
        let mut p = Poly::zero();
        if !self.field.is_zero(&c) {
            p.terms.insert(vec![0; self.nvars()], c);
        }
        p
    }

    pub fn one(&self) -> Poly<F> {
        self.constant(self.field.one())
    }

    pub fn monomial(&self, m: Mono, c: F::Elem) -> Poly<F> {
        assert_eq!(m.len(), self.nvars());
        let mut p = Poly::zero();
        if !self.field.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(&self, i: usize) -> Poly<F> {
        let mut m = vec![0; self.nvars()];
        m[i] = 1;
        self.monomial(m, self.field.one())
    }

    /// x^e for a nonnegative exponent vector.
    pub fn mono_from_exponents(&self, e: &[u32]) -> Poly<F> {
        self.monomial(e.to_vec(), self.field.one())
    }

    pub fn add(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            match out.terms.get_mut(m) {
                Some(e) => {
                    *e = self.field.add(e, c);
                    if self.field.is_zero(e) {
                        out.terms.remove(m);
                    }
                }
                None => {
                    out.terms.insert(m.clone(), c.clone());
                }
            }
        }
        out
    }

    pub fn neg(&self, a: &Poly<F>) -> Poly<F> {
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F>, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), self.field.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, a: &Poly<F>, m: &Mono, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(ma, x)| (mono_mul(ma, m), self.field.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        let mut out = Poly::zero();
        for (m, c) in &b.terms {
            out = self.add(&out, &self.mul_term(a, m, c));
        }
        out
    }

    pub fn pow(&self, a: &Poly<F>, k: u32) -> Poly<F> {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, a);
        }
        out
    }

    /// Leading monomial under the order; None for the zero polynomial.
    pub fn leading_monomial(&self, p: &Poly<F>, ord: &MonOrder) -> Option<Mono> {
        p.terms.keys().max_by(|a, b| ord.cmp(a, b)).cloned()
    }

    pub fn leading_coeff(&self, p: &Poly<F>, ord: &MonOrder) -> Option<F::Elem> {
        self.leading_monomial(p, ord).map(|m| p.terms[&m].clone())
    }

    /// Sum of the terms of maximal weight; several terms may survive.
    pub fn initial_form(&self, p: &Poly<F>, weights: &[Rat]) -> Poly<F> {
        if p.is_zero() {
            return Poly::zero();
        }
        let w = |m: &Mono| -> Rat {
            let mut s = Rat::zero();
            for (wi, &e) in weights.iter().zip(m.iter()) {
                if e != 0 {
                    s += wi * Rat::from_integer(crate::arith::int(e as i64));
                }
            }
            s
        };
        let max = p.terms.keys().map(&w).max().unwrap();
        Poly {
            terms: p
                .terms
                .iter()
                .filter(|(m, _)| w(m) == max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact division a / b; None when b does not divide a.
    pub fn divexact(&self, a: &Poly<F>, b: &Poly<F>) -> Option<Poly<F>> {
        assert!(!b.is_zero(), "division by the zero polynomial");
        let ord = MonOrder::grevlex(self.nvars());
        let lmb = self.leading_monomial(b, &ord).unwrap();
        let lcb = b.terms[&lmb].clone();
        let mut rem = a.clone();
        let mut quo = Poly::zero();
        while !rem.is_zero() {
            let lmr = self.leading_monomial(&rem, &ord).unwrap();
            if !mono_divides(&lmb, &lmr) {
                return None;
            }
            let m = mono_div(&lmr, &lmb);
            let c = self.field.div(&rem.terms[&lmr], &lcb);
            let t = self.monomial(m.clone(), c.clone());
            quo = self.add(&quo, &t);
            rem = self.sub(&rem, &self.mul_term(b, &m, &c));
        }
        Some(quo)
    }

    /// Homogenization with a fresh last variable of weight one.
    pub fn is_homogeneous(&self, p: &Poly<F>) -> bool {
        let mut degs = p.terms.keys().map(mono_degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn render(&self, p: &Poly<F>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (m, c) in p.terms.iter().rev() {
            let cs = self.field.render(c);
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                if e == 1 {
                    factors.push(self.vars[i].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.vars[i], e));
                }
            }
            let body = if factors.is_empty() {
                cs
            } else if cs == "1" {
                factors.join("*")
            } else if cs == "-1" {
                format!("-{}", factors.join("*"))
            } else if cs.contains(' ') || cs.contains('/') {
                format!("({})*{}", cs, factors.join("*"))
            } else {
                format!("{}*{}", cs, factors.join("*"))
            };
            parts.push(body);
        }
        let mut out = String::new();
        for (i, part) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(part);
            } else if let Some(stripped) = part.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(part);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn ring2() -> PolyRing<QQ> {
        PolyRing::new(QQ, vec!["x".into(), "y".into()])
    }

    #[test]
    fn grevlex_orders_standard_examples() {
        let ord = MonOrder::grevlex(3);
        // x > y > z in grevlex for linear monomials.
        let x = vec![1, 0, 0];
        let y = vec![0, 1, 0];
        let z = vec![0, 0, 1];
        assert_eq!(ord.cmp(&x, &y), Ordering::Greater);
        assert_eq!(ord.cmp(&y, &z), Ordering::Greater);
        // x*z < y^2 in grevlex (classic distinguishing case vs. deglex).
        let xz = vec![1, 0, 1];
        let y2 = vec![0, 2, 0];
        assert_eq!(ord.cmp(&xz, &y2), Ordering::Less);
    }

    #[test]
    fn weights_dominate_tiebreak() {
        let ord = MonOrder::WeightedGrevlex(vec![rat(0), rat(1)]);
        let x2 = vec![2, 0];
        let y = vec![0, 1];
        assert_eq!(ord.cmp(&x2, &y), Ordering::Less);
        assert_eq!(ord.weight(&vec![3, 2]), rat(2));
    }

    #[test]
    fn order_is_multiplicative() {
        let ord = MonOrder::WeightedGrevlex(vec![ratio(1, 2), rat(0), rat(3)]);
        let ms = [
            vec![0u32, 0, 0],
            vec![1, 0, 0],
            vec![0, 2, 1],
            vec![3, 1, 0],
            vec![1, 1, 1],
        ];
        for a in &ms {
            for b in &ms {
                for f in &ms {
                    let ab = ord.cmp(a, b);
                    let afbf = ord.cmp(&mono_mul(a, f), &mono_mul(b, f));
                    assert_eq!(ab, afbf);
                }
            }
        }
    }

    #[test]
    fn elimination_order_dominates() {
        let ord = MonOrder::ElimLast(Box::new(MonOrder::grevlex(1)));
        // t = last variable beats any power of x.
        assert_eq!(ord.cmp(&vec![9, 0], &vec![0, 1]), Ordering::Less);
        assert_eq!(ord.cmp(&vec![1, 1], &vec![0, 1]), Ordering::Greater);
    }

    #[test]
    fn poly_arithmetic_and_division() {
        let r = ring2();
        let x = r.var(0);
        let y = r.var(1);
        // (x+y)^2 = x^2 + 2xy + y^2
        let s = r.add(&x, &y);
        let sq = r.mul(&s, &s);
        assert_eq!(sq.terms.len(), 3);
        assert_eq!(sq.terms[&vec![1, 1]], rat(2));
        // Division back by (x+y).
        let q = r.divexact(&sq, &s).unwrap();
        assert_eq!(q, s);
        // Non-divisible case.
        assert!(r.divexact(&r.add(&sq, &r.one()), &s).is_none());
    }

    #[test]
    fn leading_and_initial_forms() {
        let r = ring2();
        // p = x*y - y^3 with weights (0, 1): initial form is y^3 alone.
        let p = r.sub(
            &r.mul(&r.var(0), &r.var(1)),
            &r.pow(&r.var(1), 3),
        );
        let inf = r.initial_form(&p, &[rat(0), rat(1)]);
        assert_eq!(inf.terms.len(), 1);
        assert!(inf.terms.contains_key(&vec![0, 3]));
        // With zero weights both terms tie in weight.
        let both = r.initial_form(&p, &[rat(0), rat(0)]);
        assert_eq!(both.terms.len(), 2);
        // Leading monomial under pure grevlex: y^3 (higher degree).
        let ord = MonOrder::grevlex(2);
        assert_eq!(r.leading_monomial(&p, &ord).unwrap(), vec![0, 3]);
        assert_eq!(r.leading_monomial(&r.zero(), &ord), None);
        // Monomial: leading = initial = itself.
        let m = r.mono_from_exponents(&[2, 0]);
        assert_eq!(r.leading_monomial(&m, &ord).unwrap(), vec![2, 0]);
    }

    #[test]
    fn render_is_readable() {
        let r = ring2();
        let p = r.sub(&r.mul(&r.var(0), &r.var(1)), &r.constant(ratio(1, 2)));
        assert_eq!(r.render(&p), "x*y - 1/2");
    }
}
