//! φ𝔸-differentiable functions, their derivatives, and the CR equations.

mod cr;
mod function;
pub mod matfun;

use thiserror::Error;

pub use cr::{
    cr_residual_numeric, cr_residual_poly, jacobian_fd, CrReport, CrRows, CrSummary, CrSystem,
    Jacobian,
};
pub use function::{
    Elementary, PhiContext, PhiFunction, PhiFunctionJson, PhiKind, PhiPoly, SecondPartials,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CalcError {
    #[error("denominator is singular at the evaluation point")]
    SingularDenominator,
    #[error("{0} has no exact evaluation")]
    NotExact(&'static str),
}
