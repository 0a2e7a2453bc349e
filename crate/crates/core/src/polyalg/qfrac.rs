//! Rational functions in the Novikov variables q_1..q_r over the rationals,
//! kept as reduced fractions of integer-coefficient polynomials.

use super::field::CoeffField;
use crate::arith::{gcd_int, Int, Rat};
use num::{Integer, One, Signed, Zero};
use std::collections::BTreeMap;

/// Integer-coefficient polynomial in the q-variables; exponents nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct QPoly {
    pub terms: BTreeMap<Vec<u32>, Int>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn constant(nvars: usize, c: Int) -> Self {
        let mut p = QPoly::zero();
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Int) -> Self {
        let mut p = QPoly::zero();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(Int::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = out.terms.entry(e).or_insert_with(Int::zero);
                *entry += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn mul_int(&self, c: &Int) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Largest monomial in the lexicographic exponent order.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Int)> {
        self.terms.iter().next_back()
    }

    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for c in self.terms.values() {
            g = gcd_int(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Coefficient of var^power, a polynomial with that variable flattened.
    fn coeff_of(&self, var: usize, power: u32) -> QPoly {
        let mut p = QPoly::zero();
        for (e, c) in &self.terms {
            if e[var] == power {
                let mut e2 = e.clone();
                e2[var] = 0;
                p.terms.insert(e2, c.clone());
            }
        }
        p
    }

    fn shift_var(&self, var: usize, power: u32) -> QPoly {
        QPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[var] += power;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Exact polynomial division; None when not divisible.
    pub fn divexact(&self, div: &QPoly) -> Option<QPoly> {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = QPoly::zero();
        let (dexp, dc) = {
            let (e, c) = div.leading().unwrap();
            (e.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rexp, rc) = {
                let (e, c) = rem.leading().unwrap();
                (e.clone(), c.clone())
            };
            if rexp.iter().zip(&dexp).any(|(r, d)| r < d) {
                return None;
            }
            let (q, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qexp: Vec<u32> = rexp.iter().zip(&dexp).map(|(r, d)| r - d).collect();
            let t = QPoly::monomial(qexp, q);
            rem = rem.sub(&t.mul(div));
            quo = quo.add(&t);
        }
        Some(quo)
    }

    /// Sign-normalized primitive part: content divided out, leading
    /// lexicographic coefficient positive.
    pub fn primitive_normalized(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut g = self.content();
        if self.leading().unwrap().1.is_negative() {
            g = -g;
        }
        QPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / &g)).collect(),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = Rat::from_integer(c.clone());
            for (x, &p) in point.iter().zip(e.iter()) {
                for _ in 0..p {
                    t *= x;
                }
            }
            s += t;
        }
        s
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter() {
            let mut factors = Vec::new();
            if e.iter().all(|&x| x == 0) || !c.abs().is_one() {
                factors.push(c.abs().to_string());
            }
            for (i, &p) in e.iter().enumerate() {
                if p == 1 {
                    factors.push(names[i].clone());
                } else if p > 1 {
                    factors.push(format!("{}^{}", names[i], p));
                }
            }
            let term = factors.join("*");
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{term}")
                } else {
                    term
                });
            } else {
                parts.push(format!("{} {term}", if c.is_negative() { "-" } else { "+" }));
            }
        }
        parts.join(" ")
    }
}

/// gcd in Z[q_1..q_r] by recursive primitive pseudo-remainder sequences.
pub fn qpoly_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_zero() {
        return b.sign_normalized();
    }
    if b.is_zero() {
        return a.sign_normalized();
    }
    // Pick the highest variable actually present.
    let nvars = a.terms.keys().next().map(|e| e.len()).unwrap_or(0);
    let var = (0..nvars)
        .rev()
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0);
    let Some(var) = var else {
        // Both constant.
        let ca = a.terms.values().next().unwrap();
        let cb = b.terms.values().next().unwrap();
        let nv = a.terms.keys().next().unwrap().len();
        return QPoly::constant(nv, gcd_int(ca, cb));
    };
    let cont_a = content_in(a, var);
    let cont_b = content_in(b, var);
    let cont_gcd = qpoly_gcd(&cont_a, &cont_b);
    let mut pa = a.divexact(&cont_a).expect("content divides");
    let mut pb = b.divexact(&cont_b).expect("content divides");
    if pa.degree_in(var) < pb.degree_in(var) {
        std::mem::swap(&mut pa, &mut pb);
    }
    while !pb.is_zero() {
        let r = pseudo_rem(&pa, &pb, var);
        pa = pb;
        pb = primitive_in(&r, var);
    }
    let pp = primitive_in(&pa, var);
    cont_gcd.mul(&pp)
}

impl QPoly {
    /// Negated if the leading lexicographic coefficient is negative.
    fn sign_normalized(&self) -> QPoly {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

fn content_in(p: &QPoly, var: usize) -> QPoly {
    let d = p.degree_in(var);
    let mut g = QPoly::zero();
    for power in 0..=d {
        let c = p.coeff_of(var, power);
        if !c.is_zero() {
            g = qpoly_gcd(&g, &c);
        }
    }
    g
}

fn primitive_in(p: &QPoly, var: usize) -> QPoly {
    if p.is_zero() {
        return QPoly::zero();
    }
    let c = content_in(p, var);
    p.divexact(&c).expect("content divides").primitive_normalized()
}

/// lc(b)^(needed) · a mod b with respect to `var`, by repeated elimination.
/// The top slice cancels exactly each step, so the var-degree strictly drops.
fn pseudo_rem(a: &QPoly, b: &QPoly, var: usize) -> QPoly {
    let db = b.degree_in(var);
    if db == 0 {
        // A var-free divisor leaves no pseudo-remainder.
        return QPoly::zero();
    }
    let lb = b.coeff_of(var, db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < db {
            break;
        }
        let lr = r.coeff_of(var, dr);
        // r <- lb·r - lr·b·q_var^(dr-db)
        r = r.mul(&lb).sub(&lr.mul(&b.shift_var(var, dr - db)));
    }
    r
}

/// Reduced fraction num/den of integer q-polynomials. gcd(num, den) = 1
/// including integer content, and den's leading coefficient is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QRat {
    pub num: QPoly,
    pub den: QPoly,
}

/// The field Q(q_1..q_r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFrac {
    pub nvars: usize,
    pub names: Vec<String>,
}

impl QFrac {
    pub fn new(nvars: usize) -> Self {
        QFrac {
            nvars,
            names: (1..=nvars).map(|i| format!("q{i}")).collect(),
        }
    }

    pub fn with_names(names: Vec<String>) -> Self {
        QFrac {
            nvars: names.len(),
            names,
        }
    }

    fn reduce(&self, num: QPoly, den: QPoly) -> QRat {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return QRat {
                num: QPoly::zero(),
                den: QPoly::constant(self.nvars, Int::one()),
            };
        }
        let g = qpoly_gcd(&num, &den);
        let mut num = num.divexact(&g).expect("gcd divides");
        let mut den = den.divexact(&g).expect("gcd divides");
        // Clear the integer content jointly and fix the denominator sign.
        let mut c = gcd_int(&num.content(), &den.content());
        if den.leading().unwrap().1.is_negative() {
            c = -c;
        }
        num = QPoly {
            terms: num.terms.iter().map(|(e, x)| (e.clone(), x / &c)).collect(),
        };
        den = QPoly {
            terms: den.terms.iter().map(|(e, x)| (e.clone(), x / &c)).collect(),
        };
        QRat { num, den }
    }

    /// Laurent monomial q^exps as a field element.
    pub fn q_monomial(&self, exps: &[i64]) -> QRat {
        let pos: Vec<u32> = exps.iter().map(|&e| if e > 0 { e as u32 } else { 0 }).collect();
        let neg: Vec<u32> = exps
            .iter()
            .map(|&e| if e < 0 { (-e) as u32 } else { 0 })
            .collect();
        QRat {
            num: QPoly::monomial(pos, Int::one()),
            den: QPoly::monomial(neg, Int::one()),
        }
    }

    pub fn from_qpoly(&self, p: QPoly) -> QRat {
        QRat {
            num: p,
            den: QPoly::constant(self.nvars, Int::one()),
        }
    }

    /// Evaluation at a rational point; None when the denominator vanishes.
    pub fn specialize(&self, a: &QRat, point: &[Rat]) -> Option<Rat> {
        let d = a.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(a.num.eval(point) / d)
    }
}

impl CoeffField for QFrac {
    type Elem = QRat;

    fn zero(&self) -> QRat {
        QRat {
            num: QPoly::zero(),
            den: QPoly::constant(self.nvars, Int::one()),
        }
    }

    fn one(&self) -> QRat {
        QRat {
            num: QPoly::constant(self.nvars, Int::one()),
            den: QPoly::constant(self.nvars, Int::one()),
        }
    }

    fn is_zero(&self, a: &QRat) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &QRat, b: &QRat) -> QRat {
        let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
        let den = a.den.mul(&b.den);
        self.reduce(num, den)
    }

    fn neg(&self, a: &QRat) -> QRat {
        QRat {
            num: a.num.neg(),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &QRat, b: &QRat) -> QRat {
        self.reduce(a.num.mul(&b.num), a.den.mul(&b.den))
    }

    fn inv(&self, a: &QRat) -> QRat {
        assert!(!a.num.is_zero(), "division by zero");
        self.reduce(a.den.clone(), a.num.clone())
    }

    fn embed_rat(&self, r: &Rat) -> QRat {
        self.reduce(
            QPoly::constant(self.nvars, r.numer().clone()),
            QPoly::constant(self.nvars, r.denom().clone()),
        )
    }

    fn render(&self, a: &QRat) -> String {
        if a.den.is_constant() && a.den.terms.values().next().map(|c| c.is_one()) == Some(true) {
            return a.num.render(&self.names);
        }
        format!("({}) / ({})", a.num.render(&self.names), a.den.render(&self.names))
    }

    fn inversion_certificate(&self, a: &QRat) -> Vec<String> {
        let mut items = Vec::new();
        for p in [&a.num, &a.den] {
            if !p.is_constant() {
                items.push(certificate_normalized(p).render(&self.names));
            }
        }
        items
    }
}

/// Normalization used for certificate display: primitive, and signed so the
/// lexicographically smallest monomial (usually the constant term) is
/// positive, matching forms like 1 - 4q.
fn certificate_normalized(p: &QPoly) -> QPoly {
    let p = p.primitive_normalized();
    if let Some((_, c)) = p.terms.iter().next() {
        if c.is_negative() {
            return p.neg();
        }
    }
    p
}
