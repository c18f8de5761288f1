//! Cyclic Jacobi eigendecomposition of complex Hermitian matrices.

use super::complex::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tol;

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition `A = V · diag(values) · V†`.
#[derive(Clone, Debug)]
pub struct HermEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermEigen {
    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.col(i)
    }

    /// Rebuilds `Σ_i f(λ_i) |v_i⟩⟨v_i|`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| f(self.values[k]) * v[(r, k)] * v[(c, k)].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|x| C64::new(x, 0.0))
    }
}

/// Hermitian eigendecomposition with eigenvalues in ascending order.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermEigen> {
    let deviation = a.hermitian_deviation();
    if deviation > tol::HERMITIAN {
        return Err(Error::NotHermitian { deviation });
    }
    jacobi(a)
}

/// Same as [`herm_eig`] but skips the Hermiticity gate; the matrix is
/// symmetrized first. Used for products like `a†a` whose rounding may exceed
/// the strict tolerance at large norm.
pub(crate) fn herm_eig_unchecked(a: &ComplexMatrix) -> Result<HermEigen> {
    let sym = (a + &a.adjoint()).scale_re(0.5);
    jacobi(&sym)
}

fn off_diagonal(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi(a: &ComplexMatrix) -> Result<HermEigen> {
    let n = a.rows();
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let threshold = (f64::EPSILON * scale).powi(2) * 1e-4;

    let mut converged = n <= 1;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = Φ·P with Φ_qq = e^{-iα}; columns then rows.
                let e_minus = phase.conj();
                let e_plus = phase;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c - mkq * e_minus * s;
                    m[(k, q)] = mkp * s + mkq * e_minus * c;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c - mqk * e_plus * s;
                    m[(q, k)] = mpk * s + mqk * e_plus * c;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * e_minus * s;
                    v[(k, q)] = vkp * s + vkq * e_minus * c;
                }
            }
        }
    }
    if !converged && off_diagonal(&m) > threshold {
        return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermEigen { values, vectors })
}
