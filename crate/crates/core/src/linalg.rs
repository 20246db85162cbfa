//! Dense real Jacobi routines used by the offline decomposition.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `self * self^T`.
    pub fn gram(&self) -> Matrix {
        let mut g = Matrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let v = dot(self.row(i), self.row(j));
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    /// `self^T * other`.
    pub fn transpose_mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.cols, other.cols);
        for r in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(r, i)];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out.row_mut(i).iter_mut().zip(other.row(r)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    fn rotate_rows(&mut self, p: usize, q: usize, c: f64, s: f64) {
        let (lo, hi) = self.data.split_at_mut(q * self.cols);
        let rp = &mut lo[p * self.cols..(p + 1) * self.cols];
        let rq = &mut hi[..self.cols];
        for (a, b) in rp.iter_mut().zip(rq.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = c * x - s * y;
            *b = s * x + c * y;
        }
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub const EIGEN_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues (unsorted) and a matrix whose columns are the matching
/// orthonormal eigenvectors. Iterates until the off-diagonal Frobenius norm is
/// below `EIGEN_TOLERANCE` times the full norm.
pub fn symmetric_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let total = libm::sqrt(m.data.iter().map(|x| x * x).sum::<f64>());
    for _ in 0..MAX_SWEEPS {
        let off = libm::sqrt(
            (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)] * m[(i, j)])
                .sum::<f64>(),
        );
        if off <= EIGEN_TOLERANCE * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = signum(theta) / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                // A <- J^T A J with J the (p, q) rotation
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[(i, i)]).collect(), v)
}

/// One-sided (Hestenes) Jacobi: rotates pairs of rows of `y` until all rows
/// are mutually orthogonal, applying the same rotations to the rows of `q`.
///
/// Row norms of the result are singular values with absolute accuracy on the
/// order of machine epsilon times the largest one, which the Gram route
/// cannot deliver for values below `sqrt(eps)` relative.
pub fn orthogonalize_rows(y: &mut Matrix, q: &mut Matrix) {
    assert_eq!(y.rows, q.rows);
    let m = y.rows;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m {
            for r in p + 1..m {
                let alpha = dot(y.row(p), y.row(p));
                let beta = dot(y.row(r), y.row(r));
                let gamma = dot(y.row(p), y.row(r));
                if gamma == 0.0 || gamma.abs() <= 1e-15 * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = signum(zeta) / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                y.rotate_rows(p, r, c, s);
                q.rotate_rows(p, r, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
}

fn signum(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_rows(
            rows,
            cols,
            (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
    }

    #[test]
    fn eigen_reconstructs_symmetric_matrix() {
        let g = random(9, 20, 1).gram();
        let (vals, vecs) = symmetric_eigen(&g);
        for i in 0..9 {
            for j in 0..9 {
                let r: f64 = (0..9).map(|k| vecs[(i, k)] * vals[k] * vecs[(j, k)]).sum();
                assert!((r - g[(i, j)]).abs() < 1e-10);
            }
        }
        let vtv = vecs.transpose_mul(&vecs);
        for i in 0..9 {
            for j in 0..9 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((vtv[(i, j)] - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_of_diagonal_is_trivial() {
        let mut d = Matrix::zeros(3, 3);
        d[(0, 0)] = 3.0;
        d[(1, 1)] = -1.0;
        d[(2, 2)] = 2.0;
        let (vals, _) = symmetric_eigen(&d);
        assert_eq!(vals, vec![3.0, -1.0, 2.0]);
    }

    #[test]
    fn one_sided_jacobi_orthogonalizes() {
        let x = random(6, 15, 2);
        let mut y = x.clone();
        let mut q = Matrix::identity(6);
        orthogonalize_rows(&mut y, &mut q);
        for i in 0..6 {
            for j in i + 1..6 {
                let d = dot(y.row(i), y.row(j));
                assert!(d.abs() < 1e-12, "{i},{j}: {d}");
            }
        }
        // y = q x
        for i in 0..6 {
            for c in 0..15 {
                let v: f64 = (0..6).map(|k| q[(i, k)] * x[(k, c)]).sum();
                assert!((v - y[(i, c)]).abs() < 1e-12);
            }
        }
    }
}
