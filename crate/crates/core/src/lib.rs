//! Pre-twisted differentiability over three-dimensional commutative algebras.

pub mod algebra;
pub mod calculus;
pub mod field;
pub mod harmonic;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod report;
pub mod scalar;
