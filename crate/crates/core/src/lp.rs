//! Exact rational linear feasibility by Fourier–Motzkin elimination.
//!
//! An inequality over variables x_0..x_{n-1} is stored as a vector of length
//! n+1: c_0·x_0 + … + c_{n-1}·x_{n-1} + c_n ≥ 0. No floating point anywhere.

use crate::arith::{Int, Rat};
use num::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Decides feasibility of the non-strict system and returns a witness point.
pub fn feasible(ineqs: &[Vec<Rat>], nvars: usize) -> Option<Vec<Rat>> {
    for iq in ineqs {
        assert_eq!(iq.len(), nvars + 1, "inequality arity mismatch");
    }
    // bounds[v] = (lower expressions, upper expressions) in vars 0..v.
    let mut bounds: Vec<(Vec<Vec<Rat>>, Vec<Vec<Rat>>)> = vec![(Vec::new(), Vec::new()); nvars];
    let mut system: BTreeSet<Vec<Rat>> = ineqs.iter().map(|i| normalize(i)).collect();
    for v in (0..nvars).rev() {
        let mut lowers: Vec<Vec<Rat>> = Vec::new(); // x_v >= expr(x_0..x_{v-1})
        let mut uppers: Vec<Vec<Rat>> = Vec::new(); // x_v <= expr(x_0..x_{v-1})
        let mut rest: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for iq in &system {
            let c = &iq[v];
            if c.is_zero() {
                let mut shorter = iq.clone();
                shorter.remove(v);
                rest.insert(shorter);
            } else {
                // c·x_v + r(x) >= 0  =>  x_v >= -r/c (c>0) or x_v <= -r/c (c<0)
                // At this level iq covers vars 0..v plus the trailing constant.
                debug_assert_eq!(iq.len(), v + 2);
                let mut expr: Vec<Rat> = Vec::with_capacity(v + 1);
                for (j, coeff) in iq.iter().enumerate() {
                    if j != v {
                        expr.push(-(coeff / c));
                    }
                }
                if c.is_positive() {
                    lowers.push(expr);
                } else {
                    uppers.push(expr);
                }
            }
        }
        // Combine each lower/upper pair: lower <= upper.
        for lo in &lowers {
            for up in &uppers {
                let mut iq: Vec<Rat> = up.iter().zip(lo).map(|(u, l)| u - l).collect();
                if iq.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let trivially_false =
                    iq[..iq.len() - 1].iter().all(|x| x.is_zero()) && iq[iq.len() - 1] < Rat::zero();
                if trivially_false {
                    return None;
                }
                iq = normalize(&iq);
                rest.insert(iq);
            }
        }
        bounds[v] = (lowers, uppers);
        system = rest;
    }
    // All variables eliminated: pure constants remain.
    for iq in &system {
        debug_assert_eq!(iq.len(), 1);
        if iq[0] < Rat::zero() {
            return None;
        }
    }
    // Back-substitute in ascending variable order.
    let mut x: Vec<Rat> = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let (lowers, uppers) = &bounds[v];
        let eval = |expr: &Vec<Rat>| -> Rat {
            let mut s = expr[expr.len() - 1].clone();
            for (j, xv) in x.iter().enumerate() {
                s += &expr[j] * xv;
            }
            s
        };
        let lo = lowers.iter().map(eval).max();
        let hi = uppers.iter().map(eval).min();
        let val = match (lo, hi) {
            (Some(l), Some(h)) => {
                if l > h {
                    return None; // cannot happen for a correct elimination
                }
                (&l + &h) / Rat::from_integer(Int::from(2))
            }
            (Some(l), None) => l,
            (None, Some(h)) => h,
            (None, None) => Rat::zero(),
        };
        x.push(val);
    }
    Some(x)
}

fn normalize(iq: &[Rat]) -> Vec<Rat> {
    let lead = iq.iter().find(|c| !c.is_zero());
    match lead {
        None => iq.to_vec(),
        Some(l) => {
            let scale = l.abs();
            iq.iter().map(|c| c / &scale).collect()
        }
    }
}

/// Is `target` a nonnegative rational combination of `generators`?
/// Returns the combination coefficients when it is.
pub fn nonneg_combination(generators: &[Vec<Int>], target: &[Int]) -> Option<Vec<Rat>> {
    let n = generators.len();
    let dim = target.len();
    let mut ineqs: Vec<Vec<Rat>> = Vec::new();
    for row in 0..dim {
        // sum_i lambda_i g_i[row] = target[row], as two inequalities.
        let mut eq: Vec<Rat> = (0..n)
            .map(|i| Rat::from_integer(generators[i][row].clone()))
            .collect();
        eq.push(-Rat::from_integer(target[row].clone()));
        ineqs.push(eq.clone());
        ineqs.push(eq.iter().map(|c| -c).collect());
    }
    for i in 0..n {
        let mut pos = vec![Rat::zero(); n + 1];
        pos[i] = Rat::one();
        ineqs.push(pos);
    }
    feasible(&ineqs, n)
}
