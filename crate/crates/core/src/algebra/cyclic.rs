//! The cyclic algebra `e₂² = e₃`, `e₂e₃ = e₁`, `e₃² = e₂`.

use serde::Serialize;

use super::element::Element;
use super::{AlgebraError, Singularity};
use crate::scalar::Scalar;

pub fn cyclic_multiply<T: Scalar>(a: &Element<T>, b: &Element<T>) -> Element<T> {
    let [a1, a2, a3] = a.0.clone();
    let [b1, b2, b3] = b.0.clone();
    Element([
        a1.clone() * b1.clone() + a2.clone() * b3.clone() + a3.clone() * b2.clone(),
        a1.clone() * b2.clone() + a2.clone() * b1.clone() + a3.clone() * b3.clone(),
        a1 * b3 + a2 * b2 + a3 * b1,
    ])
}

/// `x² + y² + z² − xy − yz − zx`, which vanishes exactly on the trisector.
pub fn trisector_factor<T: Scalar>(u: &Element<T>) -> T {
    let [x, y, z] = u.0.clone();
    x.clone() * x.clone() + y.clone() * y.clone() + z.clone() * z.clone()
        - x.clone() * y.clone()
        - y * z.clone()
        - z * x
}

/// `ν(u) = x³ + y³ + z³ − 3xyz = (x+y+z)(x²+y²+z²−xy−yz−zx)`.
pub fn nu<T: Scalar>(u: &Element<T>) -> T {
    let [x, y, z] = u.0.clone();
    let cube = |t: &T| t.clone() * t.clone() * t.clone();
    cube(&x) + cube(&y) + cube(&z) - T::from_i64(3) * x * y * z
}

fn singularity<T: Scalar>(u: &Element<T>) -> Option<Singularity> {
    let plane = u.coordinate_sum().is_negligible();
    let line = trisector_factor(u).is_negligible();
    match (plane, line) {
        (true, true) => Some(Singularity::Origin),
        (true, false) => Some(Singularity::NodalPlane),
        (false, true) => Some(Singularity::Trisector),
        (false, false) => None,
    }
}

/// Closed-form inverse `(1/ν)[(x²−yz), (z²−xy), (y²−zx)]`.
pub fn invert<T: Scalar>(u: &Element<T>) -> Result<Element<T>, AlgebraError> {
    if let Some(s) = singularity(u) {
        return Err(AlgebraError::SingularElement(s));
    }
    let n = nu(u);
    let [x, y, z] = u.0.clone();
    Ok(Element([
        (x.clone() * x.clone() - y.clone() * z.clone()) / n.clone(),
        (z.clone() * z.clone() - x.clone() * y.clone()) / n.clone(),
        (y.clone() * y - z * x) / n,
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Zero,
    Pi,
    Trisector,
    Neither,
}

pub fn membership<T: Scalar>(u: &Element<T>) -> Membership {
    if u.is_zero() {
        Membership::Zero
    } else if u.coordinate_sum().is_negligible() {
        Membership::Pi
    } else if is_on_trisector(u) {
        Membership::Trisector
    } else {
        Membership::Neither
    }
}

pub fn is_in_plane<T: Scalar>(u: &Element<T>) -> bool {
    u.coordinate_sum().is_negligible()
}

pub fn is_on_trisector<T: Scalar>(u: &Element<T>) -> bool {
    let [x, y, z] = &u.0;
    (x.clone() - y.clone()).is_negligible() && (y.clone() - z.clone()).is_negligible()
}

/// The unique `ω ∈ Π` with `ω·υ′ = μ`.
pub fn pi_divide<T: Scalar>(
    mu: &Element<T>,
    uprime: &Element<T>,
) -> Result<Element<T>, AlgebraError> {
    pi_divide_dropping(mu, uprime, 2)
}

/// As [`pi_divide`], discarding product row `dropped` (0, 1 or 2) in favour of
/// the plane equation `ω¹+ω²+ω³ = 0`.
pub fn pi_divide_dropping<T: Scalar>(
    mu: &Element<T>,
    uprime: &Element<T>,
    dropped: usize,
) -> Result<Element<T>, AlgebraError> {
    assert!(dropped < 3, "row index out of range");
    if uprime.is_zero() || !is_in_plane(uprime) {
        return Err(AlgebraError::DegenerateDivisor);
    }
    if !is_in_plane(mu) {
        return Err(AlgebraError::NotInPlane);
    }
    let [u1, u2, u3] = uprime.0.clone();
    let product_rows = [
        vec![u1.clone(), u3.clone(), u2.clone()],
        vec![u2.clone(), u1.clone(), u3.clone()],
        vec![u3, u2, u1],
    ];
    let mut rows = Vec::with_capacity(3);
    let mut rhs = Vec::with_capacity(3);
    for (i, row) in product_rows.into_iter().enumerate() {
        if i != dropped {
            rows.push(row);
            rhs.push(mu[i].clone());
        }
    }
    rows.push(vec![T::one(), T::one(), T::one()]);
    rhs.push(T::zero());
    let w = crate::linalg::solve(&rows, &rhs).ok_or(AlgebraError::DegenerateDivisor)?;
    Ok(Element([w[0].clone(), w[1].clone(), w[2].clone()]))
}

/// `V(u) = (u³−u²)e₁ + (u³−u¹)e₂ + (u²−u¹)e₃`.
pub fn v_map<T: Scalar>(u: &Element<T>) -> Element<T> {
    let [a, b, c] = u.0.clone();
    Element([c.clone() - b.clone(), c - a.clone(), b - a])
}
