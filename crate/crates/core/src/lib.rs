//! Exact cohomological bounds for the topological complexity of ordered
//! configuration spaces `F(R^m, n)`.

pub mod arnold;
pub mod field;
pub mod linalg;
pub mod rewrite;
pub mod tensor;
pub mod zero_divisors;
pub mod bounds;
pub mod export;
pub mod selftest;
