//! Sparse polynomials in `(x, y, z)` and algebra-valued polynomial fields.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, StructureTable};
use crate::linalg::Mat3;
use crate::scalar::{Rational, RationalText, Scalar};

/// Exponents of `x`, `y`, `z`.
pub type Exponent = [u32; 3];

/// Polynomial with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TriPoly<T> {
    terms: BTreeMap<Exponent, T>,
}

impl<T: Scalar> Default for TriPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> TriPoly<T> {
    pub fn zero() -> Self {
        TriPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    /// `x`, `y` or `z` for `axis = 0, 1, 2`.
    pub fn var(axis: usize) -> Self {
        let mut e = [0; 3];
        e[axis] = 1;
        Self::monomial(e, T::one())
    }

    pub fn monomial(e: Exponent, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// `Σ cⱼ·(axis j)` plus a constant.
    pub fn linear(c: &[T; 3], constant: T) -> Self {
        let mut p = Self::constant(constant);
        for (axis, ci) in c.iter().enumerate() {
            let mut e = [0; 3];
            e[axis] = 1;
            p.add_term(e, ci.clone());
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, T)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, T> {
        &self.terms
    }

    pub fn coeff(&self, e: Exponent) -> T {
        self.terms.get(&e).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone() * s.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(T::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn partial(&self, axis: usize) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e[axis] > 0)
                .map(|(e, c)| {
                    let mut d = *e;
                    d[axis] -= 1;
                    (d, c.clone() * T::from_i64(e[axis] as i64))
                }),
        )
    }

    pub fn laplacian(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, a| acc + self.partial(a).partial(a))
    }

    pub fn eval(&self, q: &[T; 3]) -> T {
        self.eval_with(q, |c| c.clone())
    }

    /// Evaluates at a point of another field, converting each coefficient.
    pub fn eval_with<U: Scalar>(&self, q: &[U; 3], conv: impl Fn(&T) -> U) -> U {
        let mut powers: [Vec<U>; 3] = std::array::from_fn(|_| vec![U::one()]);
        let mut acc = U::zero();
        for (e, c) in &self.terms {
            for axis in 0..3 {
                while powers[axis].len() <= e[axis] as usize {
                    let next = powers[axis].last().unwrap().clone() * q[axis].clone();
                    powers[axis].push(next);
                }
            }
            let m = powers[0][e[0] as usize].clone()
                * powers[1][e[1] as usize].clone()
                * powers[2][e[2] as usize].clone();
            acc = acc + conv(c) * m;
        }
        acc
    }

    pub fn eval_f64(&self, q: &[f64; 3]) -> f64 {
        self.eval_with(q, |c| c.to_f64())
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TriPoly<U> {
        TriPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Substitutes `x_i ↦ Σⱼ m[i][j]·x_j`.
    pub fn substitute_linear(&self, m: &Mat3<T>) -> Self {
        let images: [TriPoly<T>; 3] =
            std::array::from_fn(|i| TriPoly::linear(&m.row(i), T::zero()));
        let mut powers: [Vec<TriPoly<T>>; 3] =
            std::array::from_fn(|_| vec![Self::constant(T::one())]);
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            for axis in 0..3 {
                while powers[axis].len() <= e[axis] as usize {
                    let next = powers[axis].last().unwrap() * &images[axis];
                    powers[axis].push(next);
                }
            }
            let term = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize])
                * &powers[2][e[2] as usize];
            out = out + term.scale(c);
        }
        out
    }
}

impl<T: Scalar> Add for &TriPoly<T> {
    type Output = TriPoly<T>;
    fn add(self, rhs: &TriPoly<T>) -> TriPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<T: Scalar> Add for TriPoly<T> {
    type Output = TriPoly<T>;
    fn add(self, rhs: TriPoly<T>) -> TriPoly<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for &TriPoly<T> {
    type Output = TriPoly<T>;
    fn sub(self, rhs: &TriPoly<T>) -> TriPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for TriPoly<T> {
    type Output = TriPoly<T>;
    fn sub(self, rhs: TriPoly<T>) -> TriPoly<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for &TriPoly<T> {
    type Output = TriPoly<T>;
    fn mul(self, rhs: &TriPoly<T>) -> TriPoly<T> {
        let mut out = TriPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(
                    [a[0] + b[0], a[1] + b[1], a[2] + b[2]],
                    ca.clone() * cb.clone(),
                );
            }
        }
        out
    }
}

impl<T: Scalar> Mul for TriPoly<T> {
    type Output = TriPoly<T>;
    fn mul(self, rhs: TriPoly<T>) -> TriPoly<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for TriPoly<T> {
    type Output = TriPoly<T>;
    fn neg(self) -> TriPoly<T> {
        self.map_coeffs(|c| -c.clone())
    }
}

fn monomial_text(e: &Exponent) -> String {
    let mut parts = Vec::new();
    for (name, k) in ["x", "y", "z"].iter().zip(e) {
        match k {
            0 => {}
            1 => parts.push(name.to_string()),
            k => parts.push(format!("{name}^{k}")),
        }
    }
    parts.join("*")
}

/// Highest total degree first, e.g. `x^2 - 2*x*y + 3`.
impl<T: Scalar> fmt::Display for TriPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut order: Vec<(&Exponent, &T)> = self.terms.iter().collect();
        order.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (n, (e, c)) in order.into_iter().enumerate() {
            let plain = c.to_string();
            let compound = plain.chars().skip(1).any(|ch| ch == '+' || ch == '-');
            let negative = !compound && *c < T::zero();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            let text = if compound {
                format!("({plain})")
            } else {
                magnitude.to_string()
            };
            let mono = monomial_text(e);
            let body = match (mono.is_empty(), magnitude.is_one()) {
                (true, _) => text,
                (false, true) => mono,
                (false, false) => format!("{text}*{mono}"),
            };
            match (n, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// `F = F¹e₁ + F²e₂ + F³e₃` with polynomial components.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PolyField<T: Scalar>(pub [TriPoly<T>; 3]);

impl<T: Scalar> PolyField<T> {
    pub fn zero() -> Self {
        PolyField(std::array::from_fn(|_| TriPoly::zero()))
    }

    pub fn constant(c: &Element<T>) -> Self {
        PolyField(std::array::from_fn(|i| TriPoly::constant(c[i].clone())))
    }

    pub fn components(&self) -> &[TriPoly<T>; 3] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(TriPoly::is_zero)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&TriPoly<T>) -> TriPoly<U>) -> PolyField<U> {
        PolyField(std::array::from_fn(|i| f(&self.0[i])))
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PolyField<U> {
        self.map(|p| p.map_coeffs(&f))
    }

    pub fn add(&self, other: &Self) -> Self {
        PolyField(std::array::from_fn(|i| &self.0[i] + &other.0[i]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        PolyField(std::array::from_fn(|i| &self.0[i] - &other.0[i]))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|p| p.scale(s))
    }

    /// Componentwise algebra product.
    pub fn multiply(&self, other: &Self, table: &StructureTable<T>) -> Self {
        let c = table.constants();
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let prod = &self.0[i] * &other.0[j];
                if prod.is_zero() {
                    continue;
                }
                for (k, slot) in out.0.iter_mut().enumerate() {
                    if !c[i][j][k].is_zero() {
                        *slot = &*slot + &prod.scale(&c[i][j][k]);
                    }
                }
            }
        }
        out
    }

    pub fn partial(&self, axis: usize) -> Self {
        self.map(|p| p.partial(axis))
    }

    /// `J[i][a] = ∂Fⁱ/∂a`.
    pub fn jacobian(&self) -> [[TriPoly<T>; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|a| self.0[i].partial(a)))
    }

    pub fn laplacian(&self) -> Self {
        self.map(TriPoly::laplacian)
    }

    /// `∂ₓF¹ + ∂_yF² + ∂_zF³`.
    pub fn divergence(&self) -> TriPoly<T> {
        (0..3).fold(TriPoly::zero(), |acc, a| acc + self.0[a].partial(a))
    }

    pub fn curl(&self) -> Self {
        let d = |i: usize, a: usize| self.0[i].partial(a);
        PolyField([d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)])
    }

    /// `V(F) = (F³−F²)e₁ + (F³−F¹)e₂ + (F²−F¹)e₃`.
    pub fn lamellarize(&self) -> Self {
        let [f1, f2, f3] = &self.0;
        PolyField([f3 - f2, f3 - f1, f2 - f1])
    }

    /// `w·F`; zero iff `H(q) = w·q` is a first integral of `q̇ = F(q)`.
    pub fn first_integral_check(&self, w: &[T; 3]) -> TriPoly<T> {
        (0..3).fold(TriPoly::zero(), |acc, i| acc + self.0[i].scale(&w[i]))
    }

    pub fn substitute_linear(&self, m: &Mat3<T>) -> Self {
        self.map(|p| p.substitute_linear(m))
    }

    pub fn eval(&self, q: &[T; 3]) -> Element<T> {
        Element(std::array::from_fn(|i| self.0[i].eval(q)))
    }

    pub fn eval_f64(&self, q: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.0[i].eval_f64(q))
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.iter().filter_map(TriPoly::degree).max()
    }
}

impl<T: Scalar> fmt::Display for PolyField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.0[0], self.0[1], self.0[2])
    }
}

/// One term `{"e": [i, j, k], "c": "num/den"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub e: Exponent,
    pub c: RationalText,
}

impl TriPoly<Rational> {
    pub fn to_terms_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson {
                e: *e,
                c: RationalText(c.clone()),
            })
            .collect()
    }

    pub fn from_terms_json(terms: &[TermJson]) -> Self {
        Self::from_terms(terms.iter().map(|t| (t.e, t.c.0.clone())))
    }
}
