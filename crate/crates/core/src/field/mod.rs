//! Explicit polynomial fields, the Π-parallel `(u, v)` frame and grid sampling.

pub mod grid;
pub mod uv;

use thiserror::Error;

use crate::calculus::{PhiFunction, PhiKind};
use crate::poly::{PolyField, TriPoly};
use crate::scalar::Rational;

pub use grid::{
    read_csv, sample_grid, stencil_stats, GridRow, GridSpec, GridTable, Stencil, StencilStats,
};
pub use uv::{uv_cr_residual_exact, uv_cr_residual_numeric, UvBlock, UvField, UvReport, UvSystem};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("only polynomial φ𝔸-functions have an exact expansion")]
    NotPolynomial,
    #[error("grid has zero nodes along axis {0}")]
    EmptyGrid(usize),
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("field is not parallel to the nodal plane")]
    NotParallel,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// `φ(q) = Aq + k` as a linear polynomial field.
pub fn phi_field(f: &PhiFunction) -> PolyField<Rational> {
    let map = f.context().map();
    PolyField(std::array::from_fn(|i| {
        TriPoly::linear(&map.a.row(i), map.k[i].clone())
    }))
}

/// Components of `c₀ + c₁φ + … + c_mφ^m` as polynomials in `(x, y, z)`.
pub fn expand(f: &PhiFunction) -> Result<PolyField<Rational>, FieldError> {
    let PhiKind::Polynomial(p) = &f.kind else {
        return Err(FieldError::NotPolynomial);
    };
    let table = f.context().table();
    let phi = phi_field(f);
    let mut acc = PolyField::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.multiply(&phi, table).add(&PolyField::constant(c));
    }
    Ok(acc)
}
