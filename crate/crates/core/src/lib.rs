//! Exact symbolic engine for symplectic C∞-structures.
//!
//! The crate works in the completed free graded Lie algebra on the dual of a
//! suspended finite-dimensional graded vector space, truncated at a chosen
//! order. It provides noncommutative Cartan calculus, Harrison and cyclic
//! Harrison cohomology of graded commutative algebras, and the order-by-order
//! algorithms that lift C∞-structures and C∞-morphisms to symplectic ones.

pub mod cli;
pub mod forms;
pub mod graded;
pub mod harrison;
pub mod lie;
pub mod linalg;
pub mod obstruction;
pub mod sample;
pub mod scalar;

#[cfg(test)]
mod testkit;

pub use scalar::Scalar;
