//! Exact scalar arithmetic: arbitrary-precision integers and rationals.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Zero};
use std::str::FromStr;

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(int(num), int(den))
}

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = Int::from_str(p.trim()).map_err(|e| format!("bad numerator {p:?}: {e}"))?;
            let q = Int::from_str(q.trim()).map_err(|e| format!("bad denominator {q:?}: {e}"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p = Int::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))?;
            Ok(Rat::from_integer(p))
        }
    }
}

pub fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn gcd_int(a: &Int, b: &Int) -> Int {
    num::Integer::gcd(a, b)
}

/// gcd of a slice, zero for the empty slice.
pub fn gcd_all(xs: &[Int]) -> Int {
    let mut g = Int::zero();
    for x in xs {
        g = gcd_int(&g, x);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn is_negative(x: &Int) -> bool {
    x.sign() == Sign::Minus
}

pub fn factorial(n: u64) -> Int {
    let mut f = Int::one();
    for k in 2..=n {
        f *= int(k as i64);
    }
    f
}
