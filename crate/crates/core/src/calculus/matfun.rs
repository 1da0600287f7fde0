//! Dense real matrix functions by scaling and squaring.

use crate::linalg::Mat3;

type Dense = Vec<Vec<f64>>;

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn one_norm(a: &Dense) -> f64 {
    let n = a.len();
    (0..n)
        .map(|j| (0..n).map(|i| a[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)`: halve until `‖A‖₁ ≤ 1/2`, sum the Taylor series, square back.
pub fn expm(a: &Dense) -> Dense {
    let n = a.len();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    let scaled: Dense = a
        .iter()
        .map(|row| row.iter().map(|x| x * scale).collect())
        .collect();
    let mut sum = identity(n);
    let mut term = identity(n);
    for k in 1..=20 {
        term = matmul(&term, &scaled);
        let inv = 1.0 / k as f64;
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x *= inv;
            }
        }
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += term[i][j];
            }
        }
        if one_norm(&term) <= f64::EPSILON * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

fn to_dense(m: &Mat3<f64>) -> Dense {
    m.0.iter().map(|r| r.to_vec()).collect()
}

fn from_dense(d: &Dense, row0: usize, col0: usize) -> Mat3<f64> {
    Mat3::from_fn(|i, j| d[row0 + i][col0 + j])
}

pub fn exp3(m: &Mat3<f64>) -> Mat3<f64> {
    from_dense(&expm(&to_dense(m)), 0, 0)
}

/// `(sin M, cos M)` from `exp([[0, M], [−M, 0]]) = [[cos M, sin M], [−sin M, cos M]]`.
pub fn sin_cos3(m: &Mat3<f64>) -> (Mat3<f64>, Mat3<f64>) {
    let mut block = vec![vec![0.0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            block[i][j + 3] = m.0[i][j];
            block[i + 3][j] = -m.0[i][j];
        }
    }
    let e = expm(&block);
    (from_dense(&e, 0, 3), from_dense(&e, 0, 0))
}

/// `(sinh M, cosh M)` from `exp(±M)`.
pub fn sinh_cosh3(m: &Mat3<f64>) -> (Mat3<f64>, Mat3<f64>) {
    let plus = exp3(m);
    let minus = exp3(&m.scale(&-1.0));
    let half = |a: &Mat3<f64>, b: &Mat3<f64>, sign: f64| {
        Mat3::from_fn(|i, j| 0.5 * (a.0[i][j] + sign * b.0[i][j]))
    };
    (half(&plus, &minus, -1.0), half(&plus, &minus, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Mat3<f64>, b: &Mat3<f64>, tol: f64) -> bool {
        (0..3).all(|i| (0..3).all(|j| (a.0[i][j] - b.0[i][j]).abs() <= tol))
    }

    #[test]
    fn diagonal_exponential() {
        let m = Mat3([[1.0, 0.0, 0.0], [0.0, -2.0, 0.0], [0.0, 0.0, 0.5]]);
        let e = exp3(&m);
        let want = Mat3([
            [1f64.exp(), 0.0, 0.0],
            [0.0, (-2f64).exp(), 0.0],
            [0.0, 0.0, 0.5f64.exp()],
        ]);
        assert!(close(&e, &want, 1e-14));
    }

    #[test]
    fn rotation_generator() {
        let t = 2.5f64;
        let m = Mat3([[0.0, -t, 0.0], [t, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        let e = exp3(&m);
        let want = Mat3([
            [t.cos(), -t.sin(), 0.0],
            [t.sin(), t.cos(), 0.0],
            [0.0, 0.0, 1.0],
        ]);
        assert!(close(&e, &want, 1e-13));
    }

    #[test]
    fn trig_and_hyperbolic_identities() {
        let m = Mat3([[0.3, -1.1, 0.4], [0.7, 0.2, -0.5], [-0.6, 0.9, 1.2]]);
        let (s, c) = sin_cos3(&m);
        let id = s.mul(&s).add(&c.mul(&c));
        assert!(close(&id, &Mat3::identity(), 1e-12));
        let (sh, ch) = sinh_cosh3(&m);
        let id = ch.mul(&ch).add(&sh.mul(&sh).scale(&-1.0));
        assert!(close(&id, &Mat3::identity(), 1e-11));
        let d = Mat3([[0.8, 0.0, 0.0], [0.0, -0.3, 0.0], [0.0, 0.0, 2.0]]);
        let (s, c) = sin_cos3(&d);
        assert!((s.0[2][2] - 2f64.sin()).abs() < 1e-14);
        assert!((c.0[1][1] - 0.3f64.cos()).abs() < 1e-14);
    }
}
