use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use crate::scalar::{Rational, Scalar};

/// Algebra element `c¹e₁ + c²e₂ + c³e₃`; `e₁` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element<T>(pub [T; 3]);

impl<T: Scalar> Element<T> {
    pub fn new(c1: T, c2: T, c3: T) -> Self {
        Element([c1, c2, c3])
    }

    pub fn zero() -> Self {
        Element(std::array::from_fn(|_| T::zero()))
    }

    /// The identity `e = e₁`.
    pub fn identity() -> Self {
        Self::basis(0)
    }

    /// `e₁`, `e₂`, `e₃` for `i = 0, 1, 2`.
    pub fn basis(i: usize) -> Self {
        Element(std::array::from_fn(|j| {
            if i == j {
                T::one()
            } else {
                T::zero()
            }
        }))
    }

    pub fn from_ints(c: [i64; 3]) -> Self {
        Element(c.map(T::from_i64))
    }

    pub fn from_rationals(c: &[Rational; 3]) -> Self {
        Element(std::array::from_fn(|i| T::from_rational(&c[i])))
    }

    pub fn coords(&self) -> &[T; 3] {
        &self.0
    }

    pub fn scale(&self, s: &T) -> Self {
        Element(std::array::from_fn(|i| self.0[i].clone() * s.clone()))
    }

    /// Coordinate sum `c¹ + c² + c³` (zero exactly on the nodal plane).
    pub fn coordinate_sum(&self) -> T {
        self.0[0].clone() + self.0[1].clone() + self.0[2].clone()
    }

    /// Euclidean inner product of coordinate vectors.
    pub fn dot(&self, other: &Self) -> T {
        (0..3).fold(T::zero(), |acc, i| {
            acc + self.0[i].clone() * other.0[i].clone()
        })
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_negligible())
    }

    pub fn max_abs(&self) -> T {
        crate::scalar::max_abs(&self.0)
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Element<U> {
        Element(std::array::from_fn(|i| f(&self.0[i])))
    }

    pub fn to_f64(&self) -> Element<f64> {
        self.map(|c| c.to_f64())
    }
}

impl<T> Index<usize> for Element<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Element<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Scalar> Add for Element<T> {
    type Output = Element<T>;
    fn add(self, rhs: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = rhs.0;
        Element([a + x, b + y, c + z])
    }
}

impl<T: Scalar> Sub for Element<T> {
    type Output = Element<T>;
    fn sub(self, rhs: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = rhs.0;
        Element([a - x, b - y, c - z])
    }
}

impl<T: Scalar> Neg for Element<T> {
    type Output = Element<T>;
    fn neg(self) -> Self {
        Element(self.0.map(|c| -c))
    }
}

impl<T: fmt::Display> fmt::Display for Element<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}
