//! Fields parallel to the nodal plane, `𝐅 = u·v₂ + v·v₃`, in the frame `(ζ, ξ, η)`.
//!
//! `ζ = x + y + z`, `ξ = x − (y + z)/2`, `η = √3(y − z)/2`, so that
//! `x = (ζ + 2ξ)/3`, `y = (ζ − ξ + √3η)/3`, `z = (ζ − ξ − √3η)/3`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::FieldError;
use crate::algebra::geometry::{v2, v3, w2, w3};
use crate::algebra::{AlgebraParams, Element};
use crate::calculus::CrSystem;
use crate::harmonic::AffineMap;
use crate::linalg::Mat3;
use crate::poly::{PolyField, TriPoly};
use crate::scalar::{ratio, QSqrt3, Rational, Scalar, Sqrt3Field};

/// `(ζ, ξ, η)` of a point.
pub fn frame_coords<T: Sqrt3Field>(q: &[T; 3]) -> [T; 3] {
    let [x, y, z] = q.clone();
    let half = T::one() / T::from_i64(2);
    [
        x.clone() + y.clone() + z.clone(),
        x - (y.clone() + z.clone()) * half.clone(),
        T::sqrt3() * (y - z) * half,
    ]
}

/// `(x, y, z)` of a frame point.
pub fn frame_to_xyz<T: Sqrt3Field>(c: &[T; 3]) -> [T; 3] {
    let [zeta, xi, eta] = c.clone();
    let third = T::one() / T::from_i64(3);
    let s = T::sqrt3() * eta;
    [
        (zeta.clone() + xi.clone() * T::from_i64(2)) * third.clone(),
        (zeta.clone() - xi.clone() + s.clone()) * third.clone(),
        (zeta - xi - s) * third,
    ]
}

/// `N[a][c] = ∂(frame c)/∂(axis a)`.
fn chain<T: Sqrt3Field>() -> Mat3<T> {
    let half = T::one() / T::from_i64(2);
    let h3 = T::sqrt3() * half.clone();
    Mat3([
        [T::one(), T::one(), T::zero()],
        [T::one(), -half.clone(), h3.clone()],
        [T::one(), -half, -h3],
    ])
}

/// Row `c` writes frame variable `c` as a linear form in `(x, y, z)`.
fn frame_in_xyz() -> Mat3<QSqrt3> {
    chain::<QSqrt3>().transpose()
}

/// Row `a` writes axis `a` as a linear form in `(ζ, ξ, η)`.
fn xyz_in_frame() -> Mat3<QSqrt3> {
    let q = |a: i64, b: i64, d: i64| QSqrt3::new(ratio(a, d), ratio(b, d));
    Mat3([
        [q(1, 0, 3), q(2, 0, 3), q(0, 0, 1)],
        [q(1, 0, 3), q(-1, 0, 3), q(0, 1, 3)],
        [q(1, 0, 3), q(-1, 0, 3), q(0, -1, 3)],
    ])
}

type FrameSampler = Arc<dyn Fn([f64; 3]) -> [f64; 2] + Send + Sync>;

/// The pair `(u, v)` as functions of `(ζ, ξ, η)`.
#[derive(Clone)]
pub enum UvField {
    Poly {
        u: TriPoly<QSqrt3>,
        v: TriPoly<QSqrt3>,
    },
    Sampled(FrameSampler),
}

impl fmt::Debug for UvField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UvField::Poly { u, v } => write!(f, "UvField::Poly {{ u: {u}, v: {v} }}"),
            UvField::Sampled(_) => f.write_str("UvField::Sampled"),
        }
    }
}

fn complex_mul(
    a: &(TriPoly<QSqrt3>, TriPoly<QSqrt3>),
    b: &(TriPoly<QSqrt3>, TriPoly<QSqrt3>),
) -> (TriPoly<QSqrt3>, TriPoly<QSqrt3>) {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

/// `s = q·w₂/2`, `t = q·w₃/2` as linear forms in the frame.
fn plane_coordinates() -> [TriPoly<QSqrt3>; 2] {
    let half = QSqrt3::rational(ratio(1, 2));
    let m = xyz_in_frame();
    [w2::<QSqrt3>(), w3::<QSqrt3>()].map(|w| {
        let coeffs: [QSqrt3; 3] = std::array::from_fn(|c| {
            (0..3).fold(
                QSqrt3::rational(Rational::from_integer(0.into())),
                |acc, a| acc + w[a].clone() * m.0[a][c].clone(),
            ) * half.clone()
        });
        TriPoly::linear(&coeffs, QSqrt3::rational(ratio(0, 1)))
    })
}

impl UvField {
    pub fn poly(u: TriPoly<QSqrt3>, v: TriPoly<QSqrt3>) -> Self {
        UvField::Poly { u, v }
    }

    pub fn constant(u: Rational, v: Rational) -> Self {
        UvField::Poly {
            u: TriPoly::constant(QSqrt3::rational(u)),
            v: TriPoly::constant(QSqrt3::rational(v)),
        }
    }

    pub fn sampled(f: impl Fn([f64; 3]) -> [f64; 2] + Send + Sync + 'static) -> Self {
        UvField::Sampled(Arc::new(f))
    }

    /// `u = 3F¹/2`, `v = √3(F² − F³)/2` for a field with `F¹ + F² + F³ = 0`.
    pub fn from_plane_field(f: &PolyField<Rational>) -> Result<Self, FieldError> {
        let [f1, f2, f3] = f.components().clone();
        if !(&(&f1 + &f2) + &f3).is_zero() {
            return Err(FieldError::NotParallel);
        }
        let lift = |p: &TriPoly<Rational>| p.map_coeffs(|c| QSqrt3::rational(c.clone()));
        let m = xyz_in_frame();
        let u = lift(&f1).scale(&QSqrt3::rational(ratio(3, 2)));
        let v = lift(&(f2 - f3)).scale(&QSqrt3::new(ratio(0, 1), ratio(1, 2)));
        Ok(UvField::Poly {
            u: u.substitute_linear(&m),
            v: v.substitute_linear(&m),
        })
    }

    /// `u = Re f`, `v = −Im f` for a complex polynomial `f(s + it) = Σ cₙ (s + it)ⁿ`,
    /// with `s = q·w₂/2`, `t = q·w₃/2`.
    pub fn from_holomorphic(coeffs: &[(Rational, Rational)]) -> Self {
        let [s, t] = plane_coordinates();
        let z = (s, t);
        let mut acc = (TriPoly::zero(), TriPoly::zero());
        for (re, im) in coeffs.iter().rev() {
            acc = complex_mul(&acc, &z);
            acc.0 = acc.0 + TriPoly::constant(QSqrt3::rational(re.clone()));
            acc.1 = acc.1 + TriPoly::constant(QSqrt3::rational(im.clone()));
        }
        UvField::Poly {
            u: acc.0,
            v: -acc.1,
        }
    }

    /// Same construction for a holomorphic `f(re, im) -> (re, im)` given numerically.
    pub fn from_holomorphic_fn(f: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static) -> Self {
        let w2f = w2::<f64>();
        let w3f = w3::<f64>();
        UvField::sampled(move |c| {
            let q = Element(frame_to_xyz(&c));
            let (re, im) = f(q.dot(&w2f) / 2.0, q.dot(&w3f) / 2.0);
            [re, -im]
        })
    }

    /// `(u, v)` at frame coordinates.
    pub fn eval_frame(&self, c: [f64; 3]) -> [f64; 2] {
        match self {
            UvField::Poly { u, v } => {
                let conv = |x: &QSqrt3| x.to_f64();
                [u.eval_with(&c, conv), v.eval_with(&c, conv)]
            }
            UvField::Sampled(f) => f(c),
        }
    }

    /// `(u, v)` at a point of `ℝ³`.
    pub fn eval_xyz(&self, q: [f64; 3]) -> [f64; 2] {
        self.eval_frame(frame_coords(&q))
    }

    /// `u·v₂ + v·v₃` at a point.
    pub fn sample(&self, q: [f64; 3]) -> [f64; 3] {
        combine(self.eval_xyz(q), &v2::<f64>(), &v3::<f64>())
    }

    /// `u·w₂ + v·w₃` at a point.
    pub fn sample_lamellar(&self, q: [f64; 3]) -> [f64; 3] {
        combine(self.eval_xyz(q), &w2::<f64>(), &w3::<f64>())
    }

    fn in_xyz(&self) -> Option<[TriPoly<QSqrt3>; 2]> {
        match self {
            UvField::Poly { u, v } => {
                let m = frame_in_xyz();
                Some([u.substitute_linear(&m), v.substitute_linear(&m)])
            }
            UvField::Sampled(_) => None,
        }
    }

    /// `𝐅 = u·v₂ + v·v₃` in `(x, y, z)`; `None` for sampled pairs.
    pub fn to_field(&self) -> Option<PolyField<QSqrt3>> {
        self.in_xyz().map(|uv| poly_combine(&uv, &v2(), &v3()))
    }

    /// `𝐕 = u·w₂ + v·w₃` in `(x, y, z)`; `None` for sampled pairs.
    pub fn to_lamellar_field(&self) -> Option<PolyField<QSqrt3>> {
        self.in_xyz().map(|uv| poly_combine(&uv, &w2(), &w3()))
    }

    /// `(u_ζ, u_ξ, u_η, v_ζ, v_ξ, v_η)` by central differences in the frame.
    pub fn frame_gradient_fd(&self, c: [f64; 3], h: f64) -> [f64; 6] {
        let mut g = [0.0; 6];
        for k in 0..3 {
            let mut up = c;
            let mut dn = c;
            up[k] += h;
            dn[k] -= h;
            let (a, b) = (self.eval_frame(up), self.eval_frame(dn));
            g[k] = (a[0] - b[0]) / (2.0 * h);
            g[3 + k] = (a[1] - b[1]) / (2.0 * h);
        }
        g
    }
}

fn combine(uv: [f64; 2], a: &Element<f64>, b: &Element<f64>) -> [f64; 3] {
    std::array::from_fn(|i| uv[0] * a[i] + uv[1] * b[i])
}

fn poly_combine(
    uv: &[TriPoly<QSqrt3>; 2],
    a: &Element<QSqrt3>,
    b: &Element<QSqrt3>,
) -> PolyField<QSqrt3> {
    PolyField(std::array::from_fn(|i| {
        uv[0].scale(&a[i]) + uv[1].scale(&b[i])
    }))
}

/// Linear rows in `g = (u_ζ, u_ξ, u_η, v_ζ, v_ξ, v_η)`, one block per equation family.
#[derive(Clone, Debug, PartialEq)]
pub struct UvSystem<T> {
    /// CR equations of the cyclic algebra with its harmonic map, composed with the frame.
    pub cr: Vec<[T; 6]>,
    /// Divergence and curl of `u·w₂ + v·w₃`.
    pub lamellar: Vec<[T; 6]>,
    /// `D_{w₂}u + D_{w₃}v` and `D_{w₃}u − κ·D_{w₂}v`.
    pub planar: Vec<[T; 6]>,
    pub kappa: T,
}

/// Coefficients of `Σ slot[3i+a]·(du_i ∂ₐu + dv_i ∂ₐv)` over `g`.
fn compose<T: Sqrt3Field>(slot: &[T; 9], du: &Element<T>, dv: &Element<T>, n: &Mat3<T>) -> [T; 6] {
    let mut out: [T; 6] = std::array::from_fn(|_| T::zero());
    for i in 0..3 {
        for a in 0..3 {
            let s = &slot[3 * i + a];
            if s.is_zero() {
                continue;
            }
            for c in 0..3 {
                out[c] = out[c].clone() + s.clone() * du[i].clone() * n.0[a][c].clone();
                out[3 + c] = out[3 + c].clone() + s.clone() * dv[i].clone() * n.0[a][c].clone();
            }
        }
    }
    out
}

/// Coefficients of `D_w` applied to `u` (`which = 0`) or `v` (`which = 1`).
fn directional<T: Sqrt3Field>(w: &Element<T>, which: usize, n: &Mat3<T>) -> [T; 6] {
    let mut out: [T; 6] = std::array::from_fn(|_| T::zero());
    for c in 0..3 {
        out[3 * which + c] =
            (0..3).fold(T::zero(), |acc, a| acc + w[a].clone() * n.0[a][c].clone());
    }
    out
}

fn lin<T: Scalar>(a: &[T; 6], sa: T, b: &[T; 6], sb: T) -> [T; 6] {
    std::array::from_fn(|k| a[k].clone() * sa.clone() + b[k].clone() * sb.clone())
}

impl<T: Sqrt3Field> UvSystem<T> {
    pub fn new(kappa: T) -> Self {
        let n = chain::<T>();
        let cr_sys = CrSystem::new(
            &AlgebraParams::<T>::cyclic(),
            &AffineMap::<T>::cyclic_harmonic(),
        );
        let cr = cr_sys
            .reduced_rows()
            .iter()
            .map(|r| compose(r, &v2(), &v3(), &n))
            .collect();
        let slot = |entries: &[(usize, usize, i64)]| -> [T; 9] {
            let mut r: [T; 9] = std::array::from_fn(|_| T::zero());
            for &(i, a, s) in entries {
                r[3 * i + a] = T::from_i64(s);
            }
            r
        };
        let lamellar = [
            slot(&[(0, 0, 1), (1, 1, 1), (2, 2, 1)]),
            slot(&[(2, 1, 1), (1, 2, -1)]),
            slot(&[(0, 2, 1), (2, 0, -1)]),
            slot(&[(1, 0, 1), (0, 1, -1)]),
        ]
        .iter()
        .map(|r| compose(r, &w2(), &w3(), &n))
        .collect();
        let (du2, du3) = (directional(&w2(), 0, &n), directional(&w3(), 0, &n));
        let (dv2, dv3) = (directional(&w2(), 1, &n), directional(&w3(), 1, &n));
        let planar = vec![
            lin(&du2, T::one(), &dv3, T::one()),
            lin(&du3, T::one(), &dv2, -kappa.clone()),
        ];
        UvSystem {
            cr,
            lamellar,
            planar,
            kappa,
        }
    }

    /// The constant `κ = 1/3`.
    pub fn third() -> Self {
        Self::new(T::one() / T::from_i64(3))
    }
}

/// One block of rows: largest `|row|` over the probes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UvBlock<T> {
    pub max_abs: Vec<T>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic_zero: Option<bool>,
}

impl<T: Scalar> UvBlock<T> {
    fn from_values(
        values: &[Vec<T>],
        rows: usize,
        within: impl Fn(&T) -> bool,
        symbolic: Option<bool>,
    ) -> Self {
        let mut max_abs = vec![T::zero(); rows];
        for probe in values {
            for (m, v) in max_abs.iter_mut().zip(probe) {
                let a = v.abs();
                if a > *m || a.to_f64().is_nan() {
                    *m = a;
                }
            }
        }
        let pass = max_abs.iter().all(within) && symbolic.unwrap_or(true);
        UvBlock {
            max_abs,
            pass,
            symbolic_zero: symbolic,
        }
    }

    /// 1-based index of the first failing row.
    pub fn first_failure(&self, within: impl Fn(&T) -> bool) -> Option<usize> {
        self.max_abs.iter().position(|v| !within(v)).map(|k| k + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UvReport<T> {
    pub cr: UvBlock<T>,
    pub lamellar: UvBlock<T>,
    pub planar: UvBlock<T>,
}

impl<T: Scalar> UvReport<T> {
    pub fn pass(&self) -> bool {
        self.cr.pass && self.lamellar.pass && self.planar.pass
    }
}

fn apply_rows<T: Scalar>(rows: &[[T; 6]], g: &[T; 6]) -> Vec<T> {
    rows.iter()
        .map(|r| (0..6).fold(T::zero(), |acc, k| acc + r[k].clone() * g[k].clone()))
        .collect()
}

fn symbolic_rows(rows: &[[QSqrt3; 6]], grad: &[TriPoly<QSqrt3>; 6]) -> bool {
    rows.iter().all(|r| {
        (0..6)
            .fold(TriPoly::zero(), |acc, k| acc + grad[k].scale(&r[k]))
            .is_zero()
    })
}

/// Exact check of a polynomial pair at rational probe points.
pub fn uv_cr_residual_exact(
    field: &UvField,
    system: &UvSystem<QSqrt3>,
    probes: &[[Rational; 3]],
) -> Result<UvReport<QSqrt3>, FieldError> {
    let UvField::Poly { u, v } = field else {
        return Err(FieldError::NotPolynomial);
    };
    let grad: [TriPoly<QSqrt3>; 6] = std::array::from_fn(|k| {
        if k < 3 {
            u.partial(k)
        } else {
            v.partial(k - 3)
        }
    });
    let values: Vec<[QSqrt3; 6]> = probes
        .iter()
        .map(|q| {
            let c = frame_coords(&q.clone().map(QSqrt3::rational));
            std::array::from_fn(|k| grad[k].eval(&c))
        })
        .collect();
    let block = |rows: &[[QSqrt3; 6]]| {
        let vals: Vec<Vec<QSqrt3>> = values.iter().map(|g| apply_rows(rows, g)).collect();
        UvBlock::from_values(
            &vals,
            rows.len(),
            |x: &QSqrt3| x.is_zero(),
            Some(symbolic_rows(rows, &grad)),
        )
    };
    Ok(UvReport {
        cr: block(&system.cr),
        lamellar: block(&system.lamellar),
        planar: block(&system.planar),
    })
}

/// Central-difference check at probe points given in `(x, y, z)`.
pub fn uv_cr_residual_numeric(
    field: &UvField,
    system: &UvSystem<f64>,
    probes: &[[f64; 3]],
    h: f64,
    tol: f64,
) -> UvReport<f64> {
    let values: Vec<[f64; 6]> = probes
        .par_iter()
        .map(|q| field.frame_gradient_fd(frame_coords(q), h))
        .collect();
    let block = |rows: &[[f64; 6]]| {
        let vals: Vec<Vec<f64>> = values.iter().map(|g| apply_rows(rows, g)).collect();
        UvBlock::from_values(&vals, rows.len(), |x: &f64| *x <= tol, None)
    };
    UvReport {
        cr: block(&system.cr),
        lamellar: block(&system.lamellar),
        planar: block(&system.planar),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{PhiContext, PhiFunction, PhiPoly};
    use crate::field::expand;
    use crate::scalar::rat;

    fn probes() -> Vec<[Rational; 3]> {
        vec![
            [rat(0), rat(0), rat(0)],
            [rat(1), rat(-2), ratio(1, 3)],
            [ratio(-1, 2), rat(2), rat(3)],
        ]
    }

    fn q(a: i64, b: i64) -> QSqrt3 {
        QSqrt3::new(rat(a), rat(b))
    }

    #[test]
    fn frame_round_trip() {
        let c = frame_coords(&[rat(1), rat(0), rat(0)].map(QSqrt3::rational));
        assert_eq!(c, [q(1, 0), q(1, 0), q(0, 0)]);
        let p = [ratio(3, 7), rat(-2), ratio(5, 2)].map(QSqrt3::rational);
        assert_eq!(frame_to_xyz(&frame_coords(&p)), p);
    }

    #[test]
    fn constants_give_v2() {
        let f = UvField::constant(rat(1), rat(0)).to_field().unwrap();
        assert_eq!(f, PolyField::constant(&v2()));
        let r = uv_cr_residual_exact(
            &UvField::constant(rat(2), rat(-1)),
            &UvSystem::third(),
            &probes(),
        )
        .unwrap();
        assert!(r.pass());
    }

    #[test]
    fn linear_pair_is_plane_parallel() {
        let u = TriPoly::var(1);
        let v = TriPoly::var(2);
        let f = UvField::poly(u, v).to_field().unwrap();
        assert!((&(&f.0[0] + &f.0[1]) + &f.0[2]).is_zero());
        assert!(f.degree() == Some(1));
    }

    #[test]
    fn xi_alone_breaks_the_planar_equations() {
        let r = uv_cr_residual_exact(
            &UvField::poly(TriPoly::var(1), TriPoly::zero()),
            &UvSystem::third(),
            &probes(),
        )
        .unwrap();
        assert!(!r.planar.pass);
        assert_eq!(r.planar.max_abs[0], q(1, 0));
    }

    #[test]
    fn plane_field_of_phi_squared() {
        let f = expand(&PhiFunction::polynomial(
            PhiPoly::monomial(Element::identity(), 2),
            PhiContext::cyclic_harmonic(),
        ))
        .unwrap();
        let uv = UvField::from_plane_field(&f).unwrap();
        let back = uv.to_field().unwrap();
        assert_eq!(back, f.map_coeffs(|c| QSqrt3::rational(c.clone())));
        let lam = uv.to_lamellar_field().unwrap();
        assert_eq!(
            lam,
            f.lamellarize().map_coeffs(|c| QSqrt3::rational(c.clone()))
        );
        let r =
            uv_cr_residual_exact(&uv, &UvSystem::new(QSqrt3::rational(rat(1))), &probes()).unwrap();
        assert!(r.cr.pass && r.lamellar.pass && r.planar.pass, "{r:?}");
        let third = uv_cr_residual_exact(&uv, &UvSystem::third(), &probes()).unwrap();
        assert!(!third.planar.pass);
        assert_eq!(
            third.planar.first_failure(|x: &QSqrt3| x.is_zero()),
            Some(2)
        );
    }

    #[test]
    fn not_parallel() {
        let f = PolyField::constant(&Element::from_ints([1, 0, 0]));
        assert!(matches!(
            UvField::from_plane_field(&f),
            Err(FieldError::NotParallel)
        ));
    }

    #[test]
    fn holomorphic_pairs() {
        // f(z) = z³ − (2 − i)z
        let coeffs = [
            (rat(0), rat(0)),
            (rat(-2), rat(1)),
            (rat(0), rat(0)),
            (rat(1), rat(0)),
        ];
        let uv = UvField::from_holomorphic(&coeffs);
        let r =
            uv_cr_residual_exact(&uv, &UvSystem::new(QSqrt3::rational(rat(1))), &probes()).unwrap();
        assert!(r.planar.pass && r.lamellar.pass, "{r:?}");
        let UvField::Poly { u, v } = &uv else {
            unreachable!()
        };
        let m = frame_in_xyz();
        assert!(u.substitute_linear(&m).laplacian().is_zero());
        assert!(v.substitute_linear(&m).laplacian().is_zero());

        let num = UvField::from_holomorphic_fn(|a, b| {
            let e = a.exp();
            (e * b.cos(), e * b.sin())
        });
        let pts = [[0.1, -0.3, 0.7], [0.5, 0.5, -0.2]];
        let r = uv_cr_residual_numeric(&num, &UvSystem::new(1.0), &pts, 1e-5, 1e-6);
        assert!(r.planar.pass && r.lamellar.pass, "{r:?}");
    }
}
