//! Pluggable exact coefficient fields for the polynomial engine.

use crate::arith::{render_rat, Rat};
use num::Zero;

/// Exact field arithmetic with decidable equality. Implementations carry
/// whatever context they need (e.g. the number of q-variables).
pub trait CoeffField: Clone + std::fmt::Debug {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn embed_rat(&self, r: &Rat) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    /// Non-constant factors made invertible during a reduction, rendered
    /// canonically. These accumulate into the discriminant certificate of a
    /// Groebner run; the plain rational field never contributes.
    fn inversion_certificate(&self, _a: &Self::Elem) -> Vec<String> {
        Vec::new()
    }
}

/// The rational numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QQ;

impl CoeffField for QQ {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }

    fn one(&self) -> Rat {
        num::One::one()
    }

    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }

    fn neg(&self, a: &Rat) -> Rat {
        -a
    }

    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }

    fn inv(&self, a: &Rat) -> Rat {
        assert!(!a.is_zero(), "division by zero");
        a.recip()
    }

    fn embed_rat(&self, r: &Rat) -> Rat {
        r.clone()
    }

    fn render(&self, a: &Rat) -> String {
        render_rat(a)
    }
}
