//! Small dense linear algebra: 3×3 helpers and a one-sided Jacobi SVD for the
//! rectangular systems (least squares, numerical rank) used by the engine.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

pub type Mat3 = [[f64; 3]; 3];

pub const IDENTITY3: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    c
}

pub fn mat3_apply(a: &Mat3, v: &[f64; 3]) -> [f64; 3] {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}

pub fn mat3_transpose(a: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn mat3_det(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn mat3_sub(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = *a;
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] -= b[i][j];
        }
    }
    c
}

/// Largest absolute entry.
pub fn mat3_max_abs(a: &Mat3) -> f64 {
    a.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

/// Matrix whose columns are `c0, c1, c2`.
pub fn mat3_from_columns(c0: &[f64; 3], c1: &[f64; 3], c2: &[f64; 3]) -> Mat3 {
    [[c0[0], c1[0], c2[0]], [c0[1], c1[1], c2[1]], [c0[2], c1[2], c2[2]]]
}

pub fn mat3_inverse(a: &Mat3) -> Option<Mat3> {
    let det = mat3_det(a);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
        }
    }
    Some(inv)
}

pub fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm3(a: &[f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Null vector of a (numerically) rank-two 3×3 matrix: the largest of the
/// three pairwise cross products of its rows.
pub fn null_vector3(m: &Mat3) -> [f64; 3] {
    let candidates = [cross(&m[0], &m[1]), cross(&m[1], &m[2]), cross(&m[2], &m[0])];
    let mut best = candidates[0];
    let mut best_norm = norm3(&best);
    for c in &candidates[1..] {
        let n = norm3(c);
        if n > best_norm {
            best = *c;
            best_norm = n;
        }
    }
    best
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &DMatrix) -> DMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows).map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn transpose(&self) -> DMatrix {
        let mut t = DMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Thin singular value decomposition `A = U diag(σ) Vᵀ`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × cols`; column `j` is the left singular vector for `sigma[j]`
    /// (zero when `sigma[j]` vanishes).
    pub u: DMatrix,
    pub sigma: Vec<f64>,
    /// `cols × cols`, orthogonal.
    pub v: DMatrix,
}

impl Svd {
    /// One-sided Jacobi (Hestenes) iteration on the columns of `a`.
    pub fn new(a: &DMatrix) -> Self {
        let (m, n) = (a.rows, a.cols);
        let mut u = a.clone();
        let mut v = DMatrix::zeros(n, n);
        for i in 0..n {
            v.set(i, i, 1.0);
        }
        for _sweep in 0..80 {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                    for i in 0..m {
                        let (up, uq) = (u.get(i, p), u.get(i, q));
                        alpha += up * up;
                        beta += uq * uq;
                        gamma += up * uq;
                    }
                    if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..m {
                        let (up, uq) = (u.get(i, p), u.get(i, q));
                        u.set(i, p, c * up - s * uq);
                        u.set(i, q, s * up + c * uq);
                    }
                    for i in 0..n {
                        let (vp, vq) = (v.get(i, p), v.get(i, q));
                        v.set(i, p, c * vp - s * vq);
                        v.set(i, q, s * vp + c * vq);
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sigma = vec![0.0; n];
        for j in 0..n {
            let norm = (0..m).map(|i| u.get(i, j) * u.get(i, j)).sum::<f64>().sqrt();
            sigma[j] = norm;
            for i in 0..m {
                let x = if norm > 0.0 { u.get(i, j) / norm } else { 0.0 };
                u.set(i, j, x);
            }
        }
        Self { u, sigma, v }
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.iter().fold(0.0, |m, s| m.max(*s))
    }

    /// Number of singular values above `rel_cutoff * σ_max`.
    pub fn rank(&self, rel_cutoff: f64) -> usize {
        let cut = rel_cutoff * self.sigma_max();
        self.sigma.iter().filter(|s| **s > cut).count()
    }

    /// `σ_max / σ_min`, infinite for singular matrices.
    pub fn condition(&self) -> f64 {
        let min = self.sigma.iter().fold(f64::INFINITY, |m, s| m.min(*s));
        if min == 0.0 {
            f64::INFINITY
        } else {
            self.sigma_max() / min
        }
    }

    /// Minimum-norm least-squares solution, discarding singular values below
    /// `rel_cutoff * σ_max`.
    pub fn solve(&self, b: &[f64], rel_cutoff: f64) -> Vec<f64> {
        let (m, n) = (self.u.rows, self.v.rows);
        assert_eq!(b.len(), m);
        let cut = rel_cutoff * self.sigma_max();
        let mut x = vec![0.0; n];
        for j in 0..n {
            if self.sigma[j] <= cut {
                continue;
            }
            let coeff = (0..m).map(|i| self.u.get(i, j) * b[i]).sum::<f64>() / self.sigma[j];
            for i in 0..n {
                x[i] += coeff * self.v.get(i, j);
            }
        }
        x
    }
}

/// Least-squares solve `min ‖a x − b‖₂`; returns `(x, ‖a x − b‖₂)`.
pub fn least_squares(a: &DMatrix, b: &[f64]) -> (Vec<f64>, f64) {
    let svd = Svd::new(a);
    let x = svd.solve(b, 1e-14);
    let r = a.mul_vec(&x);
    let res = r.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    (x, res)
}

/// Solve a square 3×3 system, refusing when the condition number exceeds
/// `max_condition`.
pub fn solve3_guarded(a: &Mat3, b: &[f64; 3], max_condition: f64) -> Result<[f64; 3], f64> {
    let mut d = DMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            d.set(i, j, a[i][j]);
        }
    }
    let svd = Svd::new(&d);
    let cond = svd.condition();
    if !(cond <= max_condition) {
        return Err(cond);
    }
    let x = svd.solve(b, 0.0);
    Ok([x[0], x[1], x[2]])
}
