//! Pre-twisted Cauchy–Riemann equations `φ_a·F_b = φ_b·F_a`.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::AlgebraParams;
use crate::harmonic::AffineMap;
use crate::linalg::{self, Mat3};
use crate::poly::{PolyField, TriPoly};
use crate::scalar::{ratio, Scalar};

/// Jacobian `J[i][a] = ∂Fⁱ/∂a`; row coefficients index slot `3i + a`.
pub type Jacobian<T> = [[T; 3]; 3];

/// The CR rows for one `(P, φ)` pair, as linear forms in the nine partials.
#[derive(Clone, Debug, PartialEq)]
pub struct CrSystem<T> {
    full: Vec<[T; 9]>,
    reduced: Vec<[T; 9]>,
    /// `full[i] = Σₖ expansion[i][k]·reduced[k]`.
    expansion: Vec<Vec<T>>,
}

const CYCLIC_REDUCED: [[i64; 9]; 4] = [
    [1, -1, 0, -1, 0, 0, 0, 1, 0],
    [-1, 0, 0, 0, 1, 0, 1, -1, 0],
    [0, 0, -1, -1, 0, 0, 1, 0, 1],
    [1, 0, 1, 0, 0, -1, -1, 0, 0],
];

impl<T: Scalar> CrSystem<T> {
    pub fn new(p: &AlgebraParams<T>, phi: &AffineMap<T>) -> Self {
        let table = p.table();
        let parts = phi.partials();
        let rep: [Mat3<T>; 3] = std::array::from_fn(|a| table.matrix_of(&parts[a]));
        let mut full = Vec::with_capacity(9);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            for i in 0..3 {
                let mut row: [T; 9] = std::array::from_fn(|_| T::zero());
                for j in 0..3 {
                    row[3 * j + b] = row[3 * j + b].clone() + rep[a].0[i][j].clone();
                    row[3 * j + a] = row[3 * j + a].clone() - rep[b].0[i][j].clone();
                }
                full.push(row);
            }
        }
        let reduced: Vec<[T; 9]> =
            if *p == AlgebraParams::cyclic() && phi.a == AffineMap::cyclic_harmonic().a {
                CYCLIC_REDUCED
                    .iter()
                    .map(|r| r.map(|x| T::from_i64(x)))
                    .collect()
            } else {
                let rows: Vec<Vec<T>> = full.iter().map(|r| r.to_vec()).collect();
                let (m, pivots) = linalg::rref(&rows);
                m.into_iter()
                    .take(pivots.len())
                    .map(|r| std::array::from_fn(|k| r[k].clone()))
                    .collect()
            };
        let expansion = expand_rows(&full, &reduced);
        CrSystem {
            full,
            reduced,
            expansion,
        }
    }

    pub fn full_rows(&self) -> &[[T; 9]] {
        &self.full
    }

    pub fn reduced_rows(&self) -> &[[T; 9]] {
        &self.reduced
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    fn apply(rows: &[[T; 9]], jac: &Jacobian<T>) -> Vec<T> {
        rows.iter()
            .map(|row| {
                (0..9).fold(T::zero(), |acc, s| {
                    acc + row[s].clone() * jac[s / 3][s % 3].clone()
                })
            })
            .collect()
    }

    pub fn evaluate(&self, jac: &Jacobian<T>) -> CrRows<T> {
        CrRows {
            full: Self::apply(&self.full, jac),
            reduced: Self::apply(&self.reduced, jac),
        }
    }

    fn apply_poly(rows: &[[T; 9]], jac: &[[TriPoly<T>; 3]; 3]) -> Vec<TriPoly<T>> {
        rows.iter()
            .map(|row| {
                (0..9).fold(TriPoly::zero(), |acc, s| {
                    if row[s].is_zero() {
                        acc
                    } else {
                        acc + jac[s / 3][s % 3].scale(&row[s])
                    }
                })
            })
            .collect()
    }

    /// The rows as polynomials for a polynomial field.
    pub fn symbolic(&self, field: &PolyField<T>) -> (Vec<TriPoly<T>>, Vec<TriPoly<T>>) {
        let jac = field.jacobian();
        (
            Self::apply_poly(&self.full, &jac),
            Self::apply_poly(&self.reduced, &jac),
        )
    }

    /// Whether vanishing of the reduced rows forces the full rows to vanish.
    fn implication_holds(&self, rows: &CrRows<T>, tol: &T) -> bool {
        if rows.reduced.iter().any(|r| r.abs() > *tol) {
            return true;
        }
        let rounding = if T::EXACT {
            T::zero()
        } else {
            T::from_rational(&ratio(1, 1_000_000_000_000))
        };
        rows.full.iter().zip(&self.expansion).all(|(f, coeffs)| {
            let slack = coeffs.iter().fold(T::zero(), |acc, c| acc + c.abs());
            f.abs() <= slack * tol.clone() + rounding.clone()
        })
    }
}

fn expand_rows<T: Scalar>(full: &[[T; 9]], reduced: &[[T; 9]]) -> Vec<Vec<T>> {
    let r = reduced.len();
    if r == 0 {
        return full.iter().map(|_| Vec::new()).collect();
    }
    let rows: Vec<Vec<T>> = reduced.iter().map(|x| x.to_vec()).collect();
    let pivots = linalg::rref(&rows).1;
    let square: Vec<Vec<T>> = (0..r)
        .map(|j| (0..r).map(|k| reduced[k][pivots[j]].clone()).collect())
        .collect();
    full.iter()
        .map(|f| {
            let rhs: Vec<T> = pivots.iter().map(|&c| f[c].clone()).collect();
            let c = linalg::solve(&square, &rhs).expect("reduced rows are independent");
            debug_assert!((0..9).all(|s| {
                let v = (0..r).fold(T::zero(), |acc, k| {
                    acc + c[k].clone() * reduced[k][s].clone()
                });
                (v - f[s].clone()).is_negligible()
            }));
            c
        })
        .collect()
}

/// Row values at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrRows<T> {
    pub full: Vec<T>,
    pub reduced: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrReport<T> {
    /// Largest `|row|` over the probes, nine full rows.
    pub full: Vec<T>,
    /// Largest `|row|` over the probes, reduced rows.
    pub reduced: Vec<T>,
    pub max_abs: T,
    pub pass: bool,
    /// On every probe, vanishing reduced rows came with vanishing full rows.
    pub rank_consistent: bool,
    /// Polynomial path only: all rows are the zero polynomial.
    pub symbolic_zero: Option<bool>,
    pub probes: Vec<CrRows<T>>,
}

impl<T: Scalar> CrReport<T> {
    fn assemble(
        system: &CrSystem<T>,
        probes: Vec<CrRows<T>>,
        tol: &T,
        symbolic_zero: Option<bool>,
    ) -> Self {
        let mut full = vec![T::zero(); system.full.len()];
        let mut reduced = vec![T::zero(); system.reduced.len()];
        for rows in &probes {
            for (m, v) in full.iter_mut().zip(&rows.full) {
                let a = v.abs();
                if a > *m || a.to_f64().is_nan() {
                    *m = a;
                }
            }
            for (m, v) in reduced.iter_mut().zip(&rows.reduced) {
                let a = v.abs();
                if a > *m || a.to_f64().is_nan() {
                    *m = a;
                }
            }
        }
        let max_abs = full.iter().chain(&reduced).fold(T::zero(), |m, v| {
            if *v > m || v.to_f64().is_nan() {
                v.clone()
            } else {
                m
            }
        });
        let within = if T::EXACT {
            max_abs.is_zero()
        } else {
            max_abs <= *tol
        };
        let rank_consistent = probes.iter().all(|r| system.implication_holds(r, tol));
        CrReport {
            pass: within && symbolic_zero.unwrap_or(true),
            full,
            reduced,
            max_abs,
            rank_consistent,
            symbolic_zero,
            probes,
        }
    }

    /// Name of the first row above tolerance, reduced rows first.
    pub fn first_failure(&self, tol: &T) -> Option<String> {
        let bad = |v: &T| !(v.abs() <= *tol);
        if let Some(k) = self.reduced.iter().position(bad) {
            return Some(format!("reduced CR row {}", k + 1));
        }
        self.full
            .iter()
            .position(bad)
            .map(|k| format!("CR row {}", k + 1))
    }

    pub fn summary(&self) -> CrSummary {
        CrSummary {
            full: self.full.iter().map(Scalar::to_f64).collect(),
            reduced: self.reduced.iter().map(Scalar::to_f64).collect(),
            max_abs: self.max_abs.to_f64(),
            pass: self.pass,
            rank_consistent: self.rank_consistent,
            symbolic_zero: self.symbolic_zero,
            probes: self.probes.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrSummary {
    pub full: Vec<f64>,
    pub reduced: Vec<f64>,
    pub max_abs: f64,
    pub pass: bool,
    pub rank_consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic_zero: Option<bool>,
    pub probes: usize,
}

/// Exact check of a polynomial field: symbolic rows plus values at `probes`.
pub fn cr_residual_poly<T: Scalar>(
    field: &PolyField<T>,
    system: &CrSystem<T>,
    probes: &[[T; 3]],
) -> CrReport<T> {
    let (full_poly, reduced_poly) = system.symbolic(field);
    let symbolic_zero = full_poly.iter().chain(&reduced_poly).all(TriPoly::is_zero);
    let jac = field.jacobian();
    let rows = probes
        .iter()
        .map(|q| {
            let j: Jacobian<T> =
                std::array::from_fn(|i| std::array::from_fn(|a| jac[i][a].eval(q)));
            system.evaluate(&j)
        })
        .collect();
    CrReport::assemble(system, rows, &T::zero(), Some(symbolic_zero))
}

/// Central-difference Jacobian with step `h`.
pub fn jacobian_fd(
    field: &(dyn Fn([f64; 3]) -> [f64; 3] + Sync),
    q: [f64; 3],
    h: f64,
) -> Jacobian<f64> {
    let mut jac = [[0.0; 3]; 3];
    for a in 0..3 {
        let mut up = q;
        let mut dn = q;
        up[a] += h;
        dn[a] -= h;
        let (fu, fd) = (field(up), field(dn));
        for i in 0..3 {
            jac[i][a] = (fu[i] - fd[i]) / (2.0 * h);
        }
    }
    jac
}

/// Numeric check of an arbitrary field sampler.
pub fn cr_residual_numeric(
    field: &(dyn Fn([f64; 3]) -> [f64; 3] + Sync),
    system: &CrSystem<f64>,
    probes: &[[f64; 3]],
    h: f64,
    tol: f64,
) -> CrReport<f64> {
    let rows = probes
        .par_iter()
        .map(|q| system.evaluate(&jacobian_fd(field, *q, h)))
        .collect();
    CrReport::assemble(system, rows, &tol, None)
}
