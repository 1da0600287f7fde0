//! The family A³₁ of three-dimensional commutative unital algebras.

pub mod cyclic;
mod element;
pub mod geometry;
mod params;

use serde::Serialize;
use thiserror::Error;

pub use cyclic::{
    cyclic_multiply, invert, is_in_plane, is_on_trisector, membership, nu, pi_divide,
    pi_divide_dropping, trisector_factor, v_map, Membership,
};
pub use element::Element;
pub use params::{AlgebraParams, StructureTable};

/// Which factor made an element non-invertible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Singularity {
    /// `x + y + z = 0`.
    NodalPlane,
    /// `x = y = z`.
    Trisector,
    /// Both factors vanish.
    Origin,
    /// `det R(u) = 0` in a general member of the family.
    ZeroDeterminant,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("singular element ({0:?})")]
    SingularElement(Singularity),
    #[error("divisor must be a nonzero element of the nodal plane")]
    DegenerateDivisor,
    #[error("element is not in the nodal plane")]
    NotInPlane,
}
