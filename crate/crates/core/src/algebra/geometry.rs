//! Distinguished vectors of the cyclic algebra and the identification `Π ≅ ℂ`.

use std::ops::{Add, Mul};

use super::cyclic::{is_in_plane, v_map};
use super::element::Element;
use super::AlgebraError;
use crate::scalar::{Scalar, Sqrt3Field};

/// Unit normal `(1,1,1)/√3` of the nodal plane.
pub fn normal<T: Sqrt3Field>() -> Element<T> {
    let s = T::one() / T::sqrt3();
    Element([s.clone(), s.clone(), s])
}

/// `v₁ = (1,1,1)/3`.
pub fn v1<T: Scalar>() -> Element<T> {
    let t = T::one() / T::from_i64(3);
    Element([t.clone(), t.clone(), t])
}

/// `v₂ = (2,−1,−1)/3`.
pub fn v2<T: Scalar>() -> Element<T> {
    Element::from_ints([2, -1, -1]).scale(&(T::one() / T::from_i64(3)))
}

/// `v₃ = (0,1,−1)/√3`.
pub fn v3<T: Sqrt3Field>() -> Element<T> {
    Element::from_ints([0, 1, -1]).scale(&(T::one() / T::sqrt3()))
}

/// `w₂ = V(v₂) = −(e₂ + e₃)`.
pub fn w2<T: Scalar>() -> Element<T> {
    v_map(&v2())
}

/// `w₃ = V(v₃) = (−2e₁ − e₂ + e₃)/√3`.
pub fn w3<T: Sqrt3Field>() -> Element<T> {
    v_map(&v3())
}

/// Projection of `u` onto the nodal plane along the trisector.
pub fn tangential<T: Scalar>(u: &Element<T>) -> Element<T> {
    let mean = u.coordinate_sum() / T::from_i64(3);
    Element(u.0.clone().map(|c| c - mean.clone()))
}

/// A complex number over a field containing `√3`.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Complex { re, im }
    }
}

impl<T: Scalar> Add for Complex<T> {
    type Output = Complex<T>;
    fn add(self, rhs: Self) -> Self {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Scalar> Mul for Complex<T> {
    type Output = Complex<T>;
    fn mul(self, rhs: Self) -> Self {
        Complex::new(
            self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

/// `a·v₂ + b·v₃ ↦ a + bi`.
pub fn to_complex<T: Sqrt3Field>(u: &Element<T>) -> Result<Complex<T>, AlgebraError> {
    if !is_in_plane(u) {
        return Err(AlgebraError::NotInPlane);
    }
    let half = T::one() / T::from_i64(2);
    Ok(Complex::new(
        T::from_i64(3) * u[0].clone() * half.clone(),
        T::sqrt3() * (u[1].clone() - u[2].clone()) * half,
    ))
}

pub fn from_complex<T: Sqrt3Field>(z: &Complex<T>) -> Element<T> {
    v2::<T>().scale(&z.re) + v3::<T>().scale(&z.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cyclic::cyclic_multiply;
    use crate::scalar::{QSqrt3, Rational};

    type Q = QSqrt3;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn lengths_and_orthogonality() {
        assert_eq!(v2::<Q>().dot(&v3()), q(0));
        assert_eq!(v2::<Q>().norm_sq(), q(2) / q(3));
        assert_eq!(v3::<Q>().norm_sq(), q(2) / q(3));
        assert_eq!(w2::<Q>().norm_sq(), q(2));
        assert_eq!(w3::<Q>().norm_sq(), q(2));
        assert_eq!(normal::<Q>().norm_sq(), q(1));
        assert_eq!(v_map(&normal::<Q>()), Element::zero());
    }

    #[test]
    fn v_basis_table() {
        let m = cyclic_multiply::<Q>;
        let (a, b, c) = (v1::<Q>(), v2::<Q>(), v3::<Q>());
        assert_eq!(m(&a, &a), a);
        assert_eq!(m(&a, &b), Element::zero());
        assert_eq!(m(&a, &c), Element::zero());
        assert_eq!(m(&b, &b), b);
        assert_eq!(m(&b, &c), c);
        assert_eq!(m(&c, &c), -b.clone());
        assert_eq!(a + b, Element::identity());
    }

    #[test]
    fn w_vectors() {
        assert_eq!(w2::<Rational>(), Element::from_ints([0, -1, -1]));
        let s = Q::new(
            Rational::from_integer(0.into()),
            Rational::new(1.into(), 3.into()),
        );
        assert_eq!(w3::<Q>(), Element::from_ints([-2, -1, 1]).scale(&s));
    }

    #[test]
    fn complex_identification() {
        assert_eq!(to_complex(&v2::<Q>()).unwrap(), Complex::new(q(1), q(0)));
        assert_eq!(to_complex(&v3::<Q>()).unwrap(), Complex::new(q(0), q(1)));
        let sq = cyclic_multiply(&v3::<Q>(), &v3());
        assert_eq!(to_complex(&sq).unwrap(), Complex::new(q(-1), q(0)));
        let u = Element::<Q>::from_ints([3, -1, -2]);
        assert_eq!(from_complex(&to_complex(&u).unwrap()), u);
        assert_eq!(
            to_complex(&Element::<Q>::identity()),
            Err(AlgebraError::NotInPlane)
        );
    }
}
