//! Exact combinatorics for group operads acting on the interval category, quotal and double
//! categories built from congruence families, and categories of operators.
#![no_std]

extern crate alloc;

pub mod congruence;
pub mod fincat;
pub mod interval;
pub mod multicat;
pub mod operad;
pub mod operators;
pub mod perm;
pub mod quotal;
pub mod report;
pub mod segal;

pub use interval::{IntervalMorphism, Point};
pub use operad::{GroupOperad, Symmetric, Trivial};
pub use perm::Permutation;
pub use report::Report;
