//! Multistart Levenberg–Marquardt search for φ-harmonic pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{harmonicity_residual, AffineMap, RowGram};
use crate::algebra::AlgebraParams;
use crate::linalg::{self, Mat3};
use crate::scalar::{rational_from_f64, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: 50,
            max_iterations: 200,
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(SolverError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.restarts == 0 {
            return Err(SolverError::InvalidConfig(
                "restarts must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("the linear part of the map is zero")]
    ZeroMatrix,
    #[error("no certified solution after {restarts} restarts (best residual {best_residual:e})")]
    NoSolutionFound { restarts: usize, best_residual: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamsCandidate {
    pub p: [f64; 6],
    /// Exact residual at the rationalized candidate, rounded to `f64`.
    pub residual: f64,
    pub restart_index: usize,
    pub iterations: usize,
}

impl ParamsCandidate {
    pub fn exact_params(&self) -> AlgebraParams<Rational> {
        AlgebraParams::new(
            self.p
                .map(|x| rational_from_f64(x).expect("finite candidate")),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixCandidate {
    /// Frobenius norm 1.
    #[serde(rename = "A")]
    pub a: [[f64; 3]; 3],
    pub k: [f64; 3],
    pub residual: f64,
    pub restart_index: usize,
    pub iterations: usize,
}

impl MatrixCandidate {
    pub fn exact_map(&self) -> AffineMap<Rational> {
        AffineMap::linear(rationalize_matrix(&self.a))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointCandidate {
    pub p: [f64; 6],
    #[serde(rename = "A")]
    pub a: [[f64; 3]; 3],
    pub residual: f64,
    pub restart_index: usize,
    pub sweeps: usize,
}

struct LmOutcome {
    x: Vec<f64>,
    iterations: usize,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn half_sq(v: &[f64]) -> f64 {
    0.5 * v.iter().map(|x| x * x).sum::<f64>()
}

/// Damped Gauss–Newton on `min ½‖r(x)‖²` with `(JᵀJ + λI)δ = −Jᵀr`.
fn levenberg_marquardt(
    mut x: Vec<f64>,
    residual: impl Fn(&[f64]) -> Vec<f64>,
    jacobian: impl Fn(&[f64]) -> Vec<Vec<f64>>,
    max_iterations: usize,
    target: f64,
) -> LmOutcome {
    let n = x.len();
    let mut lambda = 1e-3;
    let mut r = residual(&x);
    let mut cost = half_sq(&r);
    let mut iterations = 0;
    while iterations < max_iterations && inf_norm(&r) >= target {
        let jac = jacobian(&x);
        let mut jtj = vec![vec![0.0; n]; n];
        let mut jtr = vec![0.0; n];
        for (row, ri) in jac.iter().zip(&r) {
            for a in 0..n {
                jtr[a] += row[a] * ri;
                for b in 0..n {
                    jtj[a][b] += row[a] * row[b];
                }
            }
        }
        let mut accepted = false;
        while lambda < 1e16 {
            let mut damped = jtj.clone();
            for (a, row) in damped.iter_mut().enumerate() {
                row[a] += lambda;
            }
            let rhs: Vec<f64> = jtr.iter().map(|g| -g).collect();
            if let Some(step) = linalg::solve(&damped, &rhs) {
                let trial: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
                let r_trial = residual(&trial);
                let c_trial = half_sq(&r_trial);
                if c_trial.is_finite() && c_trial < cost {
                    x = trial;
                    r = r_trial;
                    cost = c_trial;
                    lambda = (lambda / 10.0).max(1e-15);
                    accepted = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
        iterations += 1;
    }
    LmOutcome { x, iterations }
}

fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn uniform_start<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    std::array::from_fn(|_| rng.random_range(-2.0..=2.0))
}

fn rationalize_matrix(a: &[[f64; 3]; 3]) -> Mat3<Rational> {
    Mat3::from_fn(|i, j| rational_from_f64(a[i][j]).expect("finite candidate"))
}

fn rationalize_params(p: &[f64; 6]) -> Option<AlgebraParams<Rational>> {
    let mut out = Vec::with_capacity(6);
    for x in p {
        out.push(rational_from_f64(*x)?);
    }
    Some(AlgebraParams::new(out.try_into().ok()?))
}

fn exact_residual(phi: &AffineMap<Rational>, p: &AlgebraParams<Rational>) -> f64 {
    let r = harmonicity_residual(phi, p).max_abs();
    crate::scalar::Scalar::to_f64(&r)
}

fn params_residual(gram: &RowGram<f64>, x: &[f64]) -> Vec<f64> {
    let p = AlgebraParams::new([x[0], x[1], x[2], x[3], x[4], x[5]]);
    gram.residual(&p.all()).to_vec()
}

fn params_jacobian(gram: &RowGram<f64>, x: &[f64]) -> Vec<Vec<f64>> {
    let [p1, p2, p3, p4, p5, p6] = [x[0], x[1], x[2], x[3], x[4], x[5]];
    let d7 = [-p4, p3 - p6, p2, -p1 + 2.0 * p4, 0.0, -p2];
    let d8 = [0.0, p5, -p4, -p3, p2, 0.0];
    let d9 = [-p5, 0.0, 2.0 * p3 - p6, p5, -p1 + p4, -p3];
    let (n2, n3, d23) = (gram.n2, gram.n3, gram.d23);
    let e1 = (0..6)
        .map(|i| n2 * d7[i] + n3 * d9[i] + 2.0 * d23 * d8[i])
        .collect();
    let e2 = vec![n2, 0.0, 2.0 * d23, 0.0, n3, 0.0];
    let e3 = vec![0.0, n2, 0.0, 2.0 * d23, 0.0, n3];
    vec![e1, e2, e3]
}

fn matrix_residual(c: &[[[f64; 3]; 3]; 3], x: &[f64]) -> Vec<f64> {
    let a = |m: usize, j: usize| x[3 * m + j];
    let mut r = vec![0.0; 4];
    for (k, rk) in r.iter_mut().take(3).enumerate() {
        for j in 0..3 {
            for l in 0..3 {
                for m in 0..3 {
                    *rk += a(l, j) * a(m, j) * c[l][m][k];
                }
            }
        }
    }
    r[3] = x.iter().map(|v| v * v).sum::<f64>() - 1.0;
    r
}

fn matrix_jacobian(c: &[[[f64; 3]; 3]; 3], x: &[f64]) -> Vec<Vec<f64>> {
    let a = |m: usize, j: usize| x[3 * m + j];
    let mut jac = vec![vec![0.0; 9]; 4];
    for (k, row) in jac.iter_mut().take(3).enumerate() {
        for m in 0..3 {
            for j in 0..3 {
                row[3 * m + j] = 2.0 * (0..3).map(|l| c[m][l][k] * a(l, j)).sum::<f64>();
            }
        }
    }
    jac[3] = x.iter().map(|v| 2.0 * v).collect();
    jac
}

fn target(cfg: &SolverConfig) -> f64 {
    cfg.tolerance.min(1e-14)
}

fn merge<T>(mut found: Vec<(Vec<f64>, T)>, radius: f64) -> Vec<T> {
    let mut kept: Vec<(Vec<f64>, T)> = Vec::new();
    for (key, item) in found.drain(..) {
        let duplicate = kept
            .iter()
            .any(|(k, _)| k.iter().zip(&key).all(|(a, b)| (a - b).abs() <= radius));
        if !duplicate {
            kept.push((key, item));
        }
    }
    kept.into_iter().map(|(_, t)| t).collect()
}

/// Certified `p` with `φ_x² + φ_y² + φ_z² = 0` for the fixed map.
pub fn solve_params(
    phi: &AffineMap<Rational>,
    cfg: &SolverConfig,
) -> Result<Vec<ParamsCandidate>, SolverError> {
    solve_params_with_starts(phi, cfg, &[])
}

/// As [`solve_params`]; restart `i < starts.len()` begins at `starts[i]`.
pub fn solve_params_with_starts(
    phi: &AffineMap<Rational>,
    cfg: &SolverConfig,
    starts: &[[f64; 6]],
) -> Result<Vec<ParamsCandidate>, SolverError> {
    cfg.validate()?;
    if phi.is_zero() {
        return Err(SolverError::ZeroMatrix);
    }
    let gram = RowGram::of(&phi.to_f64().a);
    let total = cfg.restarts.max(starts.len());
    let runs: Vec<(ParamsCandidate, bool)> = (0..total)
        .into_par_iter()
        .map(|i| {
            let x0 = starts
                .get(i)
                .copied()
                .unwrap_or_else(|| uniform_start(&mut restart_rng(cfg.seed, i)));
            let out = levenberg_marquardt(
                x0.to_vec(),
                |x| params_residual(&gram, x),
                |x| params_jacobian(&gram, x),
                cfg.max_iterations,
                target(cfg),
            );
            let p: [f64; 6] = out.x.clone().try_into().expect("six unknowns");
            let float_res = inf_norm(&params_residual(&gram, &p));
            let exact = match rationalize_params(&p) {
                Some(q) => exact_residual(phi, &q),
                None => f64::INFINITY,
            };
            let ok = float_res < cfg.tolerance && exact < cfg.tolerance;
            let cand = ParamsCandidate {
                p,
                residual: exact,
                restart_index: i,
                iterations: out.iterations,
            };
            (cand, ok)
        })
        .collect();
    finish(runs, cfg, |c| (c.p.to_vec(), c.residual))
}

/// Certified linear maps `A` (Frobenius norm 1, every row norm at least 0.1)
/// making the fixed algebra φ-harmonic.
pub fn solve_matrix(
    p: &AlgebraParams<Rational>,
    cfg: &SolverConfig,
) -> Result<Vec<MatrixCandidate>, SolverError> {
    solve_matrix_with_starts(p, cfg, &[])
}

pub const MIN_ROW_NORM: f64 = 0.1;

pub fn solve_matrix_with_starts(
    p: &AlgebraParams<Rational>,
    cfg: &SolverConfig,
    starts: &[[[f64; 3]; 3]],
) -> Result<Vec<MatrixCandidate>, SolverError> {
    cfg.validate()?;
    let c = *p.to_f64().table().constants();
    let total = cfg.restarts.max(starts.len());
    let runs: Vec<(MatrixCandidate, bool)> = (0..total)
        .into_par_iter()
        .map(|i| {
            let x0: [f64; 9] = match starts.get(i) {
                Some(a) => std::array::from_fn(|n| a[n / 3][n % 3]),
                None => uniform_start(&mut restart_rng(cfg.seed, i)),
            };
            let out = levenberg_marquardt(
                x0.to_vec(),
                |x| matrix_residual(&c, x),
                |x| matrix_jacobian(&c, x),
                cfg.max_iterations,
                target(cfg),
            );
            let (cand, ok) = certify_matrix(&out.x, &c, p, cfg.tolerance);
            (
                MatrixCandidate {
                    restart_index: i,
                    iterations: out.iterations,
                    ..cand
                },
                ok,
            )
        })
        .collect();
    finish(runs, cfg, |m| {
        (m.a.iter().flatten().copied().collect(), m.residual)
    })
}

fn certify_matrix(
    x: &[f64],
    c: &[[[f64; 3]; 3]; 3],
    p: &AlgebraParams<Rational>,
    tolerance: f64,
) -> (MatrixCandidate, bool) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let a: [[f64; 3]; 3] = std::array::from_fn(|m| std::array::from_fn(|j| x[3 * m + j] / norm));
    let flat: Vec<f64> = a.iter().flatten().copied().collect();
    let cand = MatrixCandidate {
        a,
        k: [0.0; 3],
        residual: f64::INFINITY,
        restart_index: 0,
        iterations: 0,
    };
    if !norm.is_finite() || norm == 0.0 {
        return (cand, false);
    }
    let float_res = inf_norm(&matrix_residual(c, &flat)[..3]);
    let exact = exact_residual(&AffineMap::linear(rationalize_matrix(&a)), p);
    let rows_ok = a
        .iter()
        .all(|row| row.iter().map(|v| v * v).sum::<f64>().sqrt() >= MIN_ROW_NORM);
    let ok = float_res < tolerance && exact < tolerance && rows_ok;
    (
        MatrixCandidate {
            residual: exact,
            ..cand
        },
        ok,
    )
}

fn finish<T>(
    runs: Vec<(T, bool)>,
    cfg: &SolverConfig,
    key: impl Fn(&T) -> (Vec<f64>, f64),
) -> Result<Vec<T>, SolverError> {
    let best_residual = runs
        .iter()
        .map(|(c, _)| key(c).1)
        .fold(f64::INFINITY, f64::min);
    let certified: Vec<(Vec<f64>, T)> = runs
        .into_iter()
        .filter(|(_, ok)| *ok)
        .map(|(c, _)| (key(&c).0, c))
        .collect();
    if certified.is_empty() {
        return Err(SolverError::NoSolutionFound {
            restarts: cfg.restarts,
            best_residual,
        });
    }
    Ok(merge(certified, 10.0 * cfg.tolerance))
}

/// Searches for `(p, A)` together by alternating the two single-block solves
/// from each random start, for at most `sweeps` rounds per start.
pub fn solve_joint(cfg: &SolverConfig, sweeps: usize) -> Result<Vec<JointCandidate>, SolverError> {
    cfg.validate()?;
    let runs: Vec<(JointCandidate, bool)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(cfg.seed, i);
            let mut p: [f64; 6] = uniform_start(&mut rng);
            let mut x: Vec<f64> = uniform_start::<9>(&mut rng).to_vec();
            let mut best = JointCandidate {
                p,
                a: [[0.0; 3]; 3],
                residual: f64::INFINITY,
                restart_index: i,
                sweeps: 0,
            };
            for sweep in 1..=sweeps.max(1) {
                let a = Mat3::from_fn(|m, j| x[3 * m + j]);
                let gram = RowGram::of(&a);
                let out = levenberg_marquardt(
                    p.to_vec(),
                    |v| params_residual(&gram, v),
                    |v| params_jacobian(&gram, v),
                    cfg.max_iterations,
                    target(cfg),
                );
                p = out.x.try_into().expect("six unknowns");
                let c = *AlgebraParams::new(p).table().constants();
                let out = levenberg_marquardt(
                    x.clone(),
                    |v| matrix_residual(&c, v),
                    |v| matrix_jacobian(&c, v),
                    cfg.max_iterations,
                    target(cfg),
                );
                x = out.x;
                let Some(exact_p) = rationalize_params(&p) else {
                    break;
                };
                let (cand, ok) = certify_matrix(&x, &c, &exact_p, cfg.tolerance);
                best = JointCandidate {
                    p,
                    a: cand.a,
                    residual: cand.residual,
                    restart_index: i,
                    sweeps: sweep,
                };
                if ok {
                    return (best, true);
                }
            }
            (best, false)
        })
        .collect();
    finish(runs, cfg, |j| {
        let mut key = j.p.to_vec();
        key.extend(j.a.iter().flatten());
        (key, j.residual)
    })
}
