use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matfun::{exp3, sin_cos3, sinh_cosh3};
use super::CalcError;
use crate::algebra::{AlgebraParams, Element, StructureTable};
use crate::harmonic::{AffineMap, SecondProducts};
use crate::scalar::{Rational, RationalText, Scalar};

/// The algebra and affine map a φ𝔸-function lives over.
#[derive(Clone, Debug)]
pub struct PhiContext {
    params: AlgebraParams<Rational>,
    map: AffineMap<Rational>,
    table: StructureTable<Rational>,
    table_f64: StructureTable<f64>,
    map_f64: AffineMap<f64>,
}

impl PartialEq for PhiContext {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.map == other.map
    }
}

impl PhiContext {
    pub fn new(params: AlgebraParams<Rational>, map: AffineMap<Rational>) -> Self {
        PhiContext {
            table: params.table(),
            table_f64: params.to_f64().table(),
            map_f64: map.to_f64(),
            params,
            map,
        }
    }

    /// Cyclic algebra with `A = [[−1,−1,0],[1,0,−1],[0,1,1]]`, `k = 0`.
    pub fn cyclic_harmonic() -> Self {
        Self::new(AlgebraParams::cyclic(), AffineMap::cyclic_harmonic())
    }

    pub fn params(&self) -> &AlgebraParams<Rational> {
        &self.params
    }

    pub fn map(&self) -> &AffineMap<Rational> {
        &self.map
    }

    pub fn table(&self) -> &StructureTable<Rational> {
        &self.table
    }

    pub fn table_f64(&self) -> &StructureTable<f64> {
        &self.table_f64
    }

    pub fn map_f64(&self) -> &AffineMap<f64> {
        &self.map_f64
    }
}

/// `c₀ + c₁u + … + c_m u^m` with algebra-valued coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiPoly {
    coeffs: Vec<Element<Rational>>,
}

impl PhiPoly {
    pub fn new(mut coeffs: Vec<Element<Rational>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PhiPoly { coeffs }
    }

    pub fn zero() -> Self {
        PhiPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Element<Rational>) -> Self {
        Self::new(vec![c])
    }

    /// `c·u^n`.
    pub fn monomial(c: Element<Rational>, n: usize) -> Self {
        let mut coeffs = vec![Element::zero(); n];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `u` itself.
    pub fn identity() -> Self {
        Self::monomial(Element::identity(), 1)
    }

    pub fn coeffs(&self) -> &[Element<Rational>] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rational::from_integer((k as i64).into())))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(Element::zero);
                    let b = other.coeffs.get(k).cloned().unwrap_or_else(Element::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by the algebra element `s`.
    pub fn scale(&self, s: &Element<Rational>, table: &StructureTable<Rational>) -> Self {
        Self::new(self.coeffs.iter().map(|c| table.multiply(c, s)).collect())
    }

    pub fn mul(&self, other: &Self, table: &StructureTable<Rational>) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Element::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + table.multiply(a, b);
            }
        }
        Self::new(out)
    }

    /// Horner evaluation at `u` with the algebra product.
    pub fn eval<T: Scalar>(&self, u: &Element<T>, table: &StructureTable<T>) -> Element<T> {
        let mut acc = Element::<T>::zero();
        for c in self.coeffs.iter().rev() {
            acc = table.multiply(&acc, u) + Element::from_rationals(&c.0);
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Elementary {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Elementary {
    /// Derivative as `(function, sign)`.
    fn derivative(self) -> (Elementary, i64) {
        match self {
            Elementary::Exp => (Elementary::Exp, 1),
            Elementary::Sin => (Elementary::Cos, 1),
            Elementary::Cos => (Elementary::Sin, -1),
            Elementary::Sinh => (Elementary::Cosh, 1),
            Elementary::Cosh => (Elementary::Sinh, 1),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhiKind {
    Polynomial(PhiPoly),
    /// `num(u)·den(u)⁻¹`.
    Rational {
        num: PhiPoly,
        den: PhiPoly,
    },
    /// `c·f(u)`.
    Elementary(Elementary, Element<Rational>),
}

/// A φ𝔸-differentiable function `F(q) = G(φ(q))`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiFunction {
    pub kind: PhiKind,
    ctx: Arc<PhiContext>,
}

pub type SecondPartials<T> = SecondProducts<T>;

impl PhiFunction {
    pub fn new(kind: PhiKind, ctx: PhiContext) -> Self {
        PhiFunction {
            kind,
            ctx: Arc::new(ctx),
        }
    }

    pub fn polynomial(p: PhiPoly, ctx: PhiContext) -> Self {
        Self::new(PhiKind::Polynomial(p), ctx)
    }

    pub fn rational(num: PhiPoly, den: PhiPoly, ctx: PhiContext) -> Self {
        Self::new(PhiKind::Rational { num, den }, ctx)
    }

    pub fn elementary(f: Elementary, coeff: Element<Rational>, ctx: PhiContext) -> Self {
        Self::new(PhiKind::Elementary(f, coeff), ctx)
    }

    /// `φ(q)` itself.
    pub fn phi(ctx: PhiContext) -> Self {
        Self::polynomial(PhiPoly::identity(), ctx)
    }

    pub fn context(&self) -> &PhiContext {
        &self.ctx
    }

    fn with_kind(&self, kind: PhiKind) -> Self {
        PhiFunction {
            kind,
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.kind, PhiKind::Polynomial(_))
    }

    /// The φ𝔸-derivative `F′_φ`.
    pub fn derivative(&self) -> Self {
        let table = self.ctx.table();
        let kind = match &self.kind {
            PhiKind::Polynomial(p) => PhiKind::Polynomial(p.derivative()),
            PhiKind::Rational { num, den } => {
                let top = num.derivative().mul(den, table);
                let bottom = num.mul(&den.derivative(), table);
                PhiKind::Rational {
                    num: top.sub(&bottom),
                    den: den.mul(den, table),
                }
            }
            PhiKind::Elementary(f, c) => {
                let (g, sign) = f.derivative();
                PhiKind::Elementary(g, c.scale(&Rational::from_integer(sign.into())))
            }
        };
        self.with_kind(kind)
    }

    fn value_at_f64(&self, u: &Element<f64>) -> Result<Element<f64>, CalcError> {
        let table = self.ctx.table_f64();
        match &self.kind {
            PhiKind::Polynomial(p) => Ok(p.eval(u, table)),
            PhiKind::Rational { num, den } => {
                let d = den.eval(u, table);
                let inv = table
                    .invert(&d)
                    .map_err(|_| CalcError::SingularDenominator)?;
                Ok(table.multiply(&num.eval(u, table), &inv))
            }
            PhiKind::Elementary(f, c) => {
                let r = table.matrix_of(u);
                let m = match f {
                    Elementary::Exp => exp3(&r),
                    Elementary::Sin => sin_cos3(&r).0,
                    Elementary::Cos => sin_cos3(&r).1,
                    Elementary::Sinh => sinh_cosh3(&r).0,
                    Elementary::Cosh => sinh_cosh3(&r).1,
                };
                Ok(Element(m.apply(&c.to_f64().0)))
            }
        }
    }

    fn value_at_exact(&self, u: &Element<Rational>) -> Result<Element<Rational>, CalcError> {
        let table = self.ctx.table();
        match &self.kind {
            PhiKind::Polynomial(p) => Ok(p.eval(u, table)),
            PhiKind::Rational { num, den } => {
                let d = den.eval(u, table);
                let inv = table
                    .invert(&d)
                    .map_err(|_| CalcError::SingularDenominator)?;
                Ok(table.multiply(&num.eval(u, table), &inv))
            }
            PhiKind::Elementary(f, _) => Err(CalcError::NotExact(f.name())),
        }
    }

    pub fn eval(&self, q: &[f64; 3]) -> Result<Element<f64>, CalcError> {
        self.value_at_f64(&self.ctx.map_f64().apply(q))
    }

    pub fn eval_exact(&self, q: &[Rational; 3]) -> Result<Element<Rational>, CalcError> {
        self.value_at_exact(&self.ctx.map().apply(q))
    }

    /// Field sampler; singular points give `NaN`.
    pub fn sample(&self, q: [f64; 3]) -> [f64; 3] {
        self.eval(&q).map(|e| e.0).unwrap_or([f64::NAN; 3])
    }

    /// `(F′_φ(q)·φ_x, F′_φ(q)·φ_y, F′_φ(q)·φ_z)`.
    pub fn partials(&self, q: &[f64; 3]) -> Result<[Element<f64>; 3], CalcError> {
        let d = self.derivative().eval(q)?;
        let table = self.ctx.table_f64();
        Ok(self
            .ctx
            .map_f64()
            .partials()
            .map(|p| table.multiply(&d, &p)))
    }

    pub fn partials_exact(&self, q: &[Rational; 3]) -> Result<[Element<Rational>; 3], CalcError> {
        let d = self.derivative().eval_exact(q)?;
        let table = self.ctx.table();
        Ok(self.ctx.map().partials().map(|p| table.multiply(&d, &p)))
    }

    /// `F_ab = F″_φ(q)·φ_a·φ_b`.
    pub fn second_partials(&self, q: &[f64; 3]) -> Result<SecondPartials<f64>, CalcError> {
        let d2 = self.derivative().derivative().eval(q)?;
        Ok(weigh_products(
            &d2,
            self.ctx.map_f64(),
            self.ctx.table_f64(),
        ))
    }

    pub fn second_partials_exact(
        &self,
        q: &[Rational; 3],
    ) -> Result<SecondPartials<Rational>, CalcError> {
        let d2 = self.derivative().derivative().eval_exact(q)?;
        Ok(weigh_products(&d2, self.ctx.map(), self.ctx.table()))
    }
}

fn weigh_products<T: Scalar>(
    d2: &Element<T>,
    map: &AffineMap<T>,
    table: &StructureTable<T>,
) -> SecondPartials<T> {
    let [x, y, z] = map.partials();
    let f = |a: &Element<T>, b: &Element<T>| table.multiply(d2, &table.multiply(a, b));
    SecondProducts {
        xx: f(&x, &x),
        yy: f(&y, &y),
        zz: f(&z, &z),
        xy: f(&x, &y),
        xz: f(&x, &z),
        yz: f(&y, &z),
    }
}

type CoeffsJson = Vec<[RationalText; 3]>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum KindJson {
    Poly { coeffs: CoeffsJson },
    Rational { num: CoeffsJson, den: CoeffsJson },
    Exp { coeff: [RationalText; 3] },
    Sin { coeff: [RationalText; 3] },
    Cos { coeff: [RationalText; 3] },
    Sinh { coeff: [RationalText; 3] },
    Cosh { coeff: [RationalText; 3] },
}

/// JSON form `{"kind": "poly", "coeffs": [[c¹,c²,c³], ...]}`, optionally with
/// `"params"` and `"map"`; the defaults are the cyclic algebra and its harmonic map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiFunctionJson {
    #[serde(flatten)]
    kind: KindJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<AlgebraParams<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    map: Option<AffineMap<Rational>>,
}

fn poly_from_json(c: &CoeffsJson) -> PhiPoly {
    PhiPoly::new(c.iter().map(|e| Element(e.clone().map(|r| r.0))).collect())
}

fn poly_to_json(p: &PhiPoly) -> CoeffsJson {
    p.coeffs()
        .iter()
        .map(|e| e.0.clone().map(RationalText))
        .collect()
}

impl PhiFunctionJson {
    pub fn build(&self) -> PhiFunction {
        let ctx = PhiContext::new(
            self.params.clone().unwrap_or_else(AlgebraParams::cyclic),
            self.map.clone().unwrap_or_else(AffineMap::cyclic_harmonic),
        );
        let el = |c: &[RationalText; 3]| Element(c.clone().map(|r| r.0));
        let kind = match &self.kind {
            KindJson::Poly { coeffs } => PhiKind::Polynomial(poly_from_json(coeffs)),
            KindJson::Rational { num, den } => PhiKind::Rational {
                num: poly_from_json(num),
                den: poly_from_json(den),
            },
            KindJson::Exp { coeff } => PhiKind::Elementary(Elementary::Exp, el(coeff)),
            KindJson::Sin { coeff } => PhiKind::Elementary(Elementary::Sin, el(coeff)),
            KindJson::Cos { coeff } => PhiKind::Elementary(Elementary::Cos, el(coeff)),
            KindJson::Sinh { coeff } => PhiKind::Elementary(Elementary::Sinh, el(coeff)),
            KindJson::Cosh { coeff } => PhiKind::Elementary(Elementary::Cosh, el(coeff)),
        };
        PhiFunction::new(kind, ctx)
    }

    pub fn from_function(f: &PhiFunction) -> Self {
        let el = |c: &Element<Rational>| c.0.clone().map(RationalText);
        let kind = match &f.kind {
            PhiKind::Polynomial(p) => KindJson::Poly {
                coeffs: poly_to_json(p),
            },
            PhiKind::Rational { num, den } => KindJson::Rational {
                num: poly_to_json(num),
                den: poly_to_json(den),
            },
            PhiKind::Elementary(g, c) => {
                let coeff = el(c);
                match g {
                    Elementary::Exp => KindJson::Exp { coeff },
                    Elementary::Sin => KindJson::Sin { coeff },
                    Elementary::Cos => KindJson::Cos { coeff },
                    Elementary::Sinh => KindJson::Sinh { coeff },
                    Elementary::Cosh => KindJson::Cosh { coeff },
                }
            }
        };
        PhiFunctionJson {
            kind,
            params: Some(f.ctx.params().clone()),
            map: Some(f.ctx.map().clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ctx() -> PhiContext {
        PhiContext::cyclic_harmonic()
    }

    fn square() -> PhiFunction {
        PhiFunction::polynomial(PhiPoly::monomial(Element::identity(), 2), ctx())
    }

    fn q(c: [i64; 3]) -> [Rational; 3] {
        c.map(rat)
    }

    #[test]
    fn constant_polynomial() {
        let c = Element::from_ints([3, -1, 2]);
        let f = PhiFunction::polynomial(PhiPoly::constant(c.clone()), ctx());
        assert_eq!(f.eval_exact(&q([5, -7, 1])).unwrap(), c);
        assert!(f.derivative().eval_exact(&q([1, 2, 3])).unwrap().is_zero());
    }

    #[test]
    fn square_of_phi() {
        let f = square();
        assert_eq!(
            f.eval_exact(&q([1, 0, 0])).unwrap(),
            Element::from_ints([1, -2, 1])
        );
        let [fx, _, _] = f.partials_exact(&q([1, 0, 0])).unwrap();
        assert_eq!(fx, Element::from_ints([2, -4, 2]));
        let sp = f.second_partials_exact(&q([3, -1, 2])).unwrap();
        assert_eq!(sp.xx, Element::from_ints([2, -4, 2]));
        assert!(sp.square_sum().is_zero());
        let d = f.derivative();
        assert_eq!(
            d.kind,
            PhiKind::Polynomial(PhiPoly::monomial(Element::from_ints([2, 0, 0]), 1))
        );
    }

    #[test]
    fn phi_partials_are_columns() {
        let f = PhiFunction::phi(ctx());
        let parts = f.partials_exact(&q([2, 5, -1])).unwrap();
        assert_eq!(parts, ctx().map().partials());
        let cube = PhiFunction::polynomial(PhiPoly::monomial(Element::identity(), 3), ctx());
        let sp = cube.second_partials_exact(&q([0, 0, 0])).unwrap();
        assert!(sp.as_array().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn exp_at_zero_is_coefficient() {
        let c = Element::from_ints([2, -1, 3]);
        let f = PhiFunction::elementary(Elementary::Exp, c.clone(), ctx());
        let v = f.eval(&[0.0, 0.0, 0.0]).unwrap();
        assert!((0..3).all(|i| (v[i] - c[i].to_f64()).abs() < 1e-15));
        assert_eq!(f.derivative().kind, f.kind);
        assert!(matches!(
            f.eval_exact(&q([0, 0, 0])),
            Err(CalcError::NotExact(_))
        ));
    }

    #[test]
    fn rational_singular_denominator() {
        let f = PhiFunction::rational(
            PhiPoly::constant(Element::identity()),
            PhiPoly::identity(),
            ctx(),
        );
        // φ(q) = (-x-y, x-z, y+z) lies in the nodal plane for every q
        assert_eq!(
            f.eval_exact(&q([1, 2, 3])),
            Err(CalcError::SingularDenominator)
        );
        let shifted = PhiContext::new(
            AlgebraParams::cyclic(),
            AffineMap::cyclic_harmonic().with_offset(Element::from_ints([1, 0, 0])),
        );
        let g = PhiFunction::rational(
            PhiPoly::constant(Element::identity()),
            PhiPoly::identity(),
            shifted,
        );
        let at = q([0, 0, 0]);
        assert_eq!(g.eval_exact(&at).unwrap(), Element::identity());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"kind":"poly","coeffs":[["1","0","0"],["0","1/2","0"]]}"#;
        let spec: PhiFunctionJson = serde_json::from_str(text).unwrap();
        let f = spec.build();
        assert_eq!(f.context(), &ctx());
        let back = PhiFunctionJson::from_function(&f).build();
        assert_eq!(back, f);
        let exp: PhiFunctionJson =
            serde_json::from_str(r#"{"kind":"exp","coeff":[1,0,0]}"#).unwrap();
        assert!(matches!(
            exp.build().kind,
            PhiKind::Elementary(Elementary::Exp, _)
        ));
    }
}
