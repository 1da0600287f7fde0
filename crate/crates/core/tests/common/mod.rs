#![allow(dead_code)]

use proptest::prelude::*;
use triharmonic::algebra::{AlgebraParams, Element};
use triharmonic::calculus::PhiPoly;
use triharmonic::harmonic::AffineMap;
use triharmonic::linalg::Mat3;
use triharmonic::scalar::{ratio, Rational};

pub fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

pub fn element() -> impl Strategy<Value = Element<Rational>> {
    [rational(), rational(), rational()].prop_map(Element)
}

pub fn plane_element() -> impl Strategy<Value = Element<Rational>> {
    (rational(), rational()).prop_map(|(x, y)| {
        let z = -(&x + &y);
        Element([x, y, z])
    })
}

pub fn trisector_element() -> impl Strategy<Value = Element<Rational>> {
    rational().prop_map(|t| Element([t.clone(), t.clone(), t]))
}

pub fn params() -> impl Strategy<Value = AlgebraParams<Rational>> {
    [
        rational(),
        rational(),
        rational(),
        rational(),
        rational(),
        rational(),
    ]
    .prop_map(AlgebraParams::new)
}

pub fn matrix() -> impl Strategy<Value = Mat3<Rational>> {
    let row = || [rational(), rational(), rational()];
    [row(), row(), row()].prop_map(Mat3)
}

pub fn affine() -> impl Strategy<Value = AffineMap<Rational>> {
    (matrix(), element()).prop_map(|(a, k)| AffineMap::new(a, k))
}

pub fn point() -> impl Strategy<Value = [Rational; 3]> {
    [rational(), rational(), rational()]
}

/// Polynomials in `u` of degree at most `max_degree`.
pub fn phi_poly(max_degree: usize) -> impl Strategy<Value = PhiPoly> {
    prop::collection::vec(element(), 1..=max_degree + 1).prop_map(PhiPoly::new)
}
