//! Small dense linear algebra over any [`Scalar`].
//!
//! Pivoting picks the entry of largest magnitude; over exact fields this is
//! only a tie-break, over `f64` it is ordinary partial pivoting.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

/// 3×3 matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Scalar> Mat3<T> {
    pub fn zero() -> Self {
        Mat3(std::array::from_fn(|_| std::array::from_fn(|_| T::zero())))
    }

    pub fn identity() -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
        }))
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> T) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn row(&self, i: usize) -> [T; 3] {
        self.0[i].clone()
    }

    pub fn column(&self, j: usize) -> [T; 3] {
        std::array::from_fn(|i| self.0[i][j].clone())
    }

    pub fn transpose(&self) -> Self {
        Mat3::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn mul(&self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| {
            (0..3).fold(T::zero(), |acc, k| {
                acc + self.0[i][k].clone() * rhs.0[k][j].clone()
            })
        })
    }

    pub fn apply(&self, v: &[T; 3]) -> [T; 3] {
        std::array::from_fn(|i| {
            (0..3).fold(T::zero(), |acc, k| {
                acc + self.0[i][k].clone() * v[k].clone()
            })
        })
    }

    pub fn add(&self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.0[i][j].clone() + rhs.0[i][j].clone())
    }

    pub fn scale(&self, s: &T) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.0[i][j].clone() * s.clone())
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            m[1][a].clone() * m[2][b].clone() - m[1][c].clone() * m[2][d].clone()
        };
        m[0][0].clone() * minor(1, 2, 2, 1) - m[0][1].clone() * minor(0, 2, 2, 0)
            + m[0][2].clone() * minor(0, 1, 1, 0)
    }

    /// Solves `self · x = b`; `None` when singular.
    pub fn solve(&self, b: &[T; 3]) -> Option<[T; 3]> {
        let rows: Vec<Vec<T>> = self.0.iter().map(|r| r.to_vec()).collect();
        let x = solve(&rows, b)?;
        Some(std::array::from_fn(|i| x[i].clone()))
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat3<U> {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| f(&self.0[i][j]))
        }))
    }

    pub fn frobenius_sq(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
    }
}

impl<T> Index<(usize, usize)> for Mat3<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat3<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

fn pivot_row<T: Scalar>(m: &[Vec<T>], col: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (r, row) in m.iter().enumerate().skip(from) {
        if row[col].is_negligible() {
            continue;
        }
        let mag = row[col].to_f64().abs();
        if best.is_none_or(|(_, b)| mag > b) {
            best = Some((r, mag));
        }
    }
    best.map(|(r, _)| r)
}

/// Solves the square system `a · x = b` by Gaussian elimination.
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = pivot_row(&m, col, col)?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_negligible() {
                continue;
            }
            let f = m[r][col].clone() / pivot.clone();
            for c in col..=n {
                let v = m[col][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = acc - m[i][j].clone() * x[j].clone();
        }
        x[i] = acc / m[i][i].clone();
    }
    Some(x)
}

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref<T: Scalar>(a: &[Vec<T>]) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut m: Vec<Vec<T>> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pivot_row(&m, c, r) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_negligible() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..cols {
                let v = m[r][j].clone() * f.clone();
                m[i][j] = m[i][j].clone() - v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<T: Scalar>(a: &[Vec<T>]) -> usize {
    rref(a).1.len()
}

/// Basis of `{x : a·x = 0}`.
pub fn nullspace<T: Scalar>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = a.first().map_or(0, |r| r.len());
    let (m, pivots) = rref(a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}
