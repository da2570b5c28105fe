//! Exact arithmetic: coefficient fields, univariate polynomials, root
//! finding and small linear algebra.

pub mod expr;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod roots;

pub use field::{Field, PrimeField, Rationals};
pub use linalg::IntMatrix;
pub use poly::Poly;
