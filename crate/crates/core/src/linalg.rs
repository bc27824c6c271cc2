//! Small dense complex linear algebra: 4x4 kernels for two-site operators,
//! Gaussian elimination for the matching system, and a cyclic Jacobi
//! eigensolver for Hermitian matrices (dimensions here never exceed 2^6).

use crate::error::Error;
use crate::{Result, C64};

pub type Mat4 = [[C64; 4]; 4];

pub fn mat4_zero() -> Mat4 {
    [[C64::new(0.0, 0.0); 4]; 4]
}

pub fn mat4_identity() -> Mat4 {
    let mut m = mat4_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = mat4_zero();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat4_scale(a: &Mat4, s: C64) -> Mat4 {
    let mut out = *a;
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    out
}

pub fn mat4_sub(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

pub fn mat4_max_abs(a: &Mat4) -> f64 {
    a.iter()
        .flat_map(|r| r.iter())
        .map(|v| v.norm())
        .fold(0.0, f64::max)
}

/// Solves A X = B for 4x4 complex matrices by partial-pivot elimination.
pub fn mat4_solve(a: &Mat4, b: &Mat4) -> Result<Mat4> {
    let mut m = *a;
    let mut x = *b;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| {
                m[i][col]
                    .norm()
                    .partial_cmp(&m[j][col].norm())
                    .expect("finite")
            })
            .expect("nonempty");
        if m[piv][col].norm() < 1e-300 {
            return Err(Error::SingularSystem);
        }
        m.swap(col, piv);
        x.swap(col, piv);
        let d = m[col][col];
        for j in 0..4 {
            m[col][j] /= d;
            x[col][j] /= d;
        }
        for i in 0..4 {
            if i == col {
                continue;
            }
            let f = m[i][col];
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..4 {
                m[i][j] -= f * m[col][j];
                x[i][j] -= f * x[col][j];
            }
        }
    }
    Ok(x)
}

pub fn mat4_inverse(a: &Mat4) -> Result<Mat4> {
    mat4_solve(a, &mat4_identity())
}

/// Dense complex matrix as row-major Vec (used for desk-scale eigenproblems).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns (eigenvalues, eigenvectors) with eigenvectors as columns of a
/// unitary matrix, ordered by ascending eigenvalue.
pub fn hermitian_eigen(a: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = a.dim;
    let mut m = a.clone();
    let mut v = DenseMatrix::identity(n);
    for _sweep in 0..100 {
        let mut off: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(m[(i, j)].norm());
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() < 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns p, q of the rotation: |p'> = c|p> - s conj(phase)|q>,
                // |q'> = s phase |p> + c |q>
                let (cp, cq) = (C64::new(c, 0.0), C64::new(s, 0.0));
                let rpp = cp;
                let rpq = cq * phase;
                let rqp = -cq * phase.conj();
                let rqq = cp;
                // m <- R^dagger m R
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * rpp + mkq * rqp;
                    m[(k, q)] = mkp * rpq + mkq * rqq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = rpp.conj() * mpk + rqp.conj() * mqk;
                    m[(q, k)] = rpq.conj() * mpk + rqq.conj() * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * rpp + vkq * rqp;
                    v[(k, q)] = vkp * rpq + vkq * rqq;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vecs = DenseMatrix::zeros(n);
    for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
        for k in 0..n {
            vecs[(k, new_col)] = v[(k, old_col)];
        }
    }
    (vals, vecs)
}
