//! toric-qdm: an exact symbolic engine for toric complete intersections.
//!
//! From a smooth projective toric fan and a split sum of nef line bundles the
//! crate builds the extended fan of the bundle total space, the quantum
//! Stanley-Reisner and Batyrev algebras, the GKZ system of differential
//! operators, the left quotient ideal presenting the ambient quantum
//! D-module, and the I-function with its mirror map. All arithmetic is exact.

pub mod arith;
pub mod linalg;
pub mod lp;
pub mod polyalg;
pub mod batyrev;
pub mod cli;
pub mod corpus;
pub mod curveclasses;
pub mod gkz;
pub mod mirror;
pub mod toricfan;

pub use arith::{Int, Rat};
