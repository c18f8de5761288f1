//! Singular value decomposition through the Hermitian kernel.

use super::complex::{inner, norm, ComplexMatrix, C64};
use super::eig::herm_eig_unchecked;
use crate::error::Result;
use crate::tol;

/// `a = u · diag(s) · v†` with `s` descending and nonnegative.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.s.len();
        ComplexMatrix::from_fn(self.u.rows(), self.v.rows(), |i, j| {
            (0..k).map(|c| self.u[(i, c)] * self.s[c] * self.v[(j, c)].conj()).sum()
        })
    }
}

/// Thin SVD: `k = min(rows, cols)` singular triplets. Singular values below
/// `1e-13·s_max` are reported as zero.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let (u, s, v) = raw_svd(a)?;
    let smax = s.first().copied().unwrap_or(0.0);
    let s = s
        .into_iter()
        .map(|x| if x < tol::SVD_TRUNCATION * smax { 0.0 } else { x })
        .collect();
    Ok(Svd { u, s, v })
}

/// Singular values without truncation, descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(raw_svd(a)?.1)
}

fn raw_svd(a: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    if a.rows() < a.cols() {
        let (u, s, v) = raw_svd(&a.adjoint())?;
        return Ok((v, s, u));
    }
    let (m, n) = (a.rows(), a.cols());
    let gram = a.adjoint().matmul(a);
    let eig = herm_eig_unchecked(&gram)?;

    // σ_i = ‖A v_i‖ is more accurate than sqrt(λ_i) for small σ.
    let mut triplets: Vec<(f64, Vec<C64>, Vec<C64>)> = (0..n)
        .map(|i| {
            let vi = eig.vector(i);
            let avi = a.mul_vec(&vi);
            (norm(&avi), avi, vi)
        })
        .collect();
    triplets.sort_by(|x, y| y.0.total_cmp(&x.0));
    let smax = triplets[0].0;

    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (c, (sigma, avi, vi)) in triplets.into_iter().enumerate() {
        v.set_col(c, &vi);
        s.push(sigma);
        let candidate = if sigma > tol::SVD_TRUNCATION * smax && sigma > 0.0 {
            Some(avi.iter().map(|z| z / sigma).collect::<Vec<_>>())
        } else {
            None
        };
        u_cols.push(orthonormal_completion(&u_cols, candidate, m));
    }
    let mut u = ComplexMatrix::zeros(m, n);
    for (c, col) in u_cols.iter().enumerate() {
        u.set_col(c, col);
    }
    Ok((u, s, v))
}

/// Gram–Schmidt `candidate` against `basis`; falls back to canonical vectors
/// when the candidate is absent or numerically dependent.
fn orthonormal_completion(basis: &[Vec<C64>], candidate: Option<Vec<C64>>, dim: usize) -> Vec<C64> {
    let project_out = |mut w: Vec<C64>| {
        for _ in 0..2 {
            for b in basis {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        w
    };
    if let Some(w) = candidate {
        let w = project_out(w);
        let nw = norm(&w);
        if nw > 0.5 {
            return w.into_iter().map(|z| z / nw).collect();
        }
    }
    let mut best: Option<(f64, Vec<C64>)> = None;
    for e in 0..dim {
        let mut w = vec![C64::new(0.0, 0.0); dim];
        w[e] = C64::new(1.0, 0.0);
        let w = project_out(w);
        let nw = norm(&w);
        if best.as_ref().is_none_or(|(bn, _)| nw > *bn) {
            best = Some((nw, w));
        }
    }
    let (nw, w) = best.expect("dim > 0");
    w.into_iter().map(|z| z / nw).collect()
}
