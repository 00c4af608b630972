//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with
//! `diag(1, e^{-iφ})` and then applies the classical real Jacobi rotation,
//! so the whole step is the unitary
//!
//! ```text
//! G = [[ c,            s          ],
//!      [ -s·e^{-iφ},   c·e^{-iφ}  ]]    A ← G† A G,   V ← V G
//! ```
//!
//! Sweeps stop once the off-diagonal Frobenius norm falls below
//! `1e-13 · max(1, ‖A‖_F)`, or after 100 sweeps.

use super::{CMatrix, C64, EIG_HERMITIAN_TOL, PSD_TOL};
use crate::{Error, Result};

const OFF_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `V · diag(λ) · V†`
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.dim();
        let v = &self.vectors;
        CMatrix::from_fn(d, |r, c| {
            (0..d)
                .map(|k| v[(r, k)] * v[(c, k)].conj() * self.values[k])
                .sum()
        })
    }

    /// `‖V†V − I‖_F`
    pub fn orthonormality_defect(&self) -> f64 {
        let v = &self.vectors;
        v.adjoint()
            .matmul(v)
            .distance(&CMatrix::identity(self.dim()))
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Eigenvectors inside a degenerate cluster come out in solver order and are
/// not canonicalized.
pub fn hermitian_eig(m: &CMatrix) -> Result<EigDecomposition> {
    let (values, vectors) = jacobi(m, true)?;
    Ok(EigDecomposition {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Ascending eigenvalues only; skips eigenvector accumulation.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(m, false)?.0)
}

/// Number of eigenvalues strictly above `threshold`.
///
/// Rejects matrices with an eigenvalue below `−1e-9`.
pub fn numeric_rank(m: &CMatrix, threshold: f64) -> Result<usize> {
    if !(threshold > 0.0) {
        return Err(Error::Parameter(format!(
            "rank threshold must be positive, got {threshold}"
        )));
    }
    let values = hermitian_eigenvalues(m)?;
    if let Some(&min) = values.first() {
        if min < -PSD_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    Ok(values.iter().filter(|&&v| v > threshold).count())
}

fn jacobi(m: &CMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    let asym = m.max_asymmetry();
    if asym > EIG_HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
        });
    }
    let d = m.dim();
    let mut a = m.hermitian_part();
    for i in 0..d {
        a[(i, i)].im = 0.0;
    }
    let mut v = want_vectors.then(|| CMatrix::identity(d));
    let scale = a.frobenius_norm().max(1.0);
    let target = OFF_TOL * scale;

    let mut converged = false;
    let mut off = off_norm(&a);
    for _ in 0..MAX_SWEEPS {
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, v.as_mut(), p, q, scale);
            }
        }
        off = off_norm(&a);
    }
    if !converged && off > target {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off,
        });
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| CMatrix::from_fn(d, |r, c| v[(r, order[c])]));
    Ok((values, vectors))
}

fn off_norm(a: &CMatrix) -> f64 {
    let d = a.dim();
    let mut s = 0.0;
    for r in 0..d {
        for c in 0..d {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut CMatrix, v: Option<&mut CMatrix>, p: usize, q: usize, scale: f64) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= 1e-300 || mag < 1e-18 * scale {
        if mag != 0.0 {
            a[(p, q)] = C64::new(0.0, 0.0);
            a[(q, p)] = C64::new(0.0, 0.0);
        }
        return;
    }
    let phase = apq / mag; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let d = a.dim();
    // columns: A ← A G
    for k in 0..d {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // rows: A ← G† A
    for k in 0..d {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, p)] = C64::new(app - t * mag, 0.0);
    a[(q, q)] = C64::new(aqq + t * mag, 0.0);
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);

    if let Some(v) = v {
        for k in 0..d {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * g_pp + vkq * g_qp;
            v[(k, q)] = vkp * g_pq + vkq * g_qq;
        }
    }
}
