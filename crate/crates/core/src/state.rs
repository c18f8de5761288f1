//! Density matrices, coherence vectors and the Pauli / generalized Gell-Mann
//! operator bases.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, inner, kron, norm, partial_trace, ComplexMatrix, Keep, C64, I, ONE, ZERO};
use crate::tol;

/// Traceless Hermitian basis of `N×N` operators normalized to
/// `tr(T_a T_b) = 2δ_ab`.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// σ_x, σ_y, σ_z (eigenvalues ±1).
pub fn pauli() -> OperatorBasis {
    gell_mann(2)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO]).expect("2x2")
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO]).expect("2x2")
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0])
}

/// Generalized Gell-Mann matrices. Order: all symmetric `|j⟩⟨k|+|k⟩⟨j|`
/// for `j<k` lexicographically, then the antisymmetric
/// `−i|j⟩⟨k|+i|k⟩⟨j|` in the same order, then the `N−1` diagonal ones.
/// For `N = 2` this is exactly (σ_x, σ_y, σ_z).
pub fn gell_mann(n: usize) -> OperatorBasis {
    assert!(n >= 2, "operator basis needs dimension >= 2");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| ((j + 1)..n).map(move |k| (j, k))).collect();
    let mut elements = Vec::with_capacity(n * n - 1);
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(j, k)] = ONE;
        m[(k, j)] = ONE;
        elements.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(j, k)] = -I;
        m[(k, j)] = I;
        elements.push(m);
    }
    for l in 1..n {
        let c = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut d = vec![0.0; n];
        for v in d.iter_mut().take(l) {
            *v = c;
        }
        d[l] = -(l as f64) * c;
        elements.push(ComplexMatrix::diag_real(&d));
    }
    OperatorBasis { dim: n, elements }
}

/// Validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix of shape {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let deviation = mat.hermitian_deviation();
        if deviation > tol::HERMITIAN {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = herm_eig(&mat)?.values[0];
        if min < tol::PSD_FLOOR {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(Self { mat })
    }

    /// Skips validation. The caller guarantees the invariants, e.g. after a
    /// unitary conjugation of a valid state.
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    pub fn pure(ket: &[C64]) -> Result<Self> {
        let n = norm(ket);
        if (n - 1.0).abs() > tol::KET_NORM {
            return Err(Error::InvalidState(format!("ket norm {n} differs from 1")));
        }
        Self::new(ComplexMatrix::outer(ket, ket))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eig(&self.mat)
            .map(|e| e.values)
            .expect("density matrices are Hermitian")
    }

    pub fn partial_trace(&self, dim_s: usize, dim_a: usize, keep: Keep) -> Result<Self> {
        partial_trace(&self.mat, dim_s, dim_a, keep).map(Self::from_trusted)
    }
}

/// Real parameterization `ρ = I/N + ½ Σ_a r_a T_a` in the Gell-Mann basis,
/// so that `r_a = tr(ρ T_a)`. For `N = 2` it is the Bloch vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceVector {
    dim: usize,
    components: Vec<f64>,
}

impl CoherenceVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if dim < 2 || components.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} coherence components for Hilbert dimension {dim}",
                components.len()
            )));
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coherence component".into()));
        }
        Ok(Self { dim, components })
    }

    /// Infers `N` from a component count `N²−1`.
    pub fn from_components(components: Vec<f64>) -> Result<Self> {
        let n = ((components.len() + 1) as f64).sqrt().round() as usize;
        Self::new(n, components)
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            components: vec![0.0; dim * dim - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn length(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Matrix `I/N + ½ Σ r_a T_a` without any positivity check.
pub fn coherence_matrix(v: &CoherenceVector) -> ComplexMatrix {
    let n = v.dim();
    let basis = gell_mann(n);
    let mut m = ComplexMatrix::identity(n).scale_re(1.0 / n as f64);
    for (r, t) in v.components().iter().zip(basis.elements()) {
        if *r != 0.0 {
            m = &m + &t.scale_re(0.5 * r);
        }
    }
    m
}

pub fn density_from_coherence(v: &CoherenceVector) -> Result<DensityMatrix> {
    DensityMatrix::new(coherence_matrix(v))
}

pub fn coherence_from_density(rho: &DensityMatrix) -> CoherenceVector {
    let basis = gell_mann(rho.dim());
    let components = basis.elements().iter().map(|t| rho.mat().trace_product(t).re).collect();
    CoherenceVector {
        dim: rho.dim(),
        components,
    }
}

/// Qubit ancilla `(1 + λ⃗·s⃗)/2`.
pub fn ancilla_state(lambda: [f64; 3]) -> Result<DensityMatrix> {
    let len = lambda.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len > 1.0 + tol::PSD_FLOOR.abs() {
        return Err(Error::NotPositive {
            min_eigenvalue: (1.0 - len) / 2.0,
        });
    }
    density_from_coherence(&CoherenceVector::new(2, lambda.to_vec())?)
}

/// `ρ_S ⊗ ρ_A`.
pub fn product_state(s: &DensityMatrix, a: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_trusted(kron(s.mat(), a.mat()))
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Haar-random normalized ket.
pub fn random_ket(dim: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_ket_from(dim, &mut rng)
}

pub(crate) fn random_ket_from(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| C64::new(normal(rng), normal(rng))).collect();
    let n = norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Random density matrix: a Haar ket when `pure`, otherwise a normalized
/// Ginibre product `G G† / tr`. Deterministic per seed.
pub fn random_state(dim: usize, pure: bool, seed: u64) -> DensityMatrix {
    assert!(dim >= 2, "random_state needs dimension >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if pure {
        let psi = random_ket_from(dim, &mut rng);
        return DensityMatrix::from_trusted(ComplexMatrix::outer(&psi, &psi));
    }
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| C64::new(normal(&mut rng), normal(&mut rng)));
    let w = g.matmul(&g.adjoint());
    let w = (&w + &w.adjoint()).scale_re(0.5);
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.scale_re(1.0 / tr))
}

/// Haar-random unitary (Gram–Schmidt on a Ginibre matrix).
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| C64::new(normal(&mut rng), normal(&mut rng))).collect();
        for _ in 0..2 {
            for c in &cols {
                let p = inner(c, &v);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= p * ci;
                }
            }
        }
        let n = norm(&v);
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_basis_is_exact() {
        let b = pauli();
        assert_eq!(b.elements()[0], sigma_x());
        assert_eq!(b.elements()[1], sigma_y());
        assert_eq!(b.elements()[2], sigma_z());
    }

    #[test]
    fn gell_mann_trace_orthogonality() {
        for n in [2, 3, 4] {
            let b = gell_mann(n);
            assert_eq!(b.len(), n * n - 1);
            for (a, ta) in b.elements().iter().enumerate() {
                assert!(ta.trace().norm() < 1e-12);
                assert!(ta.is_hermitian(1e-12));
                for (c, tc) in b.elements().iter().enumerate() {
                    let want = if a == c { 2.0 } else { 0.0 };
                    assert!((ta.trace_product(tc) - C64::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn coherence_examples() {
        let rho = density_from_coherence(&CoherenceVector::zero(2)).unwrap();
        assert!(rho.mat().max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5)) < 1e-15);
        let rho = density_from_coherence(&CoherenceVector::new(2, vec![0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert!(rho.mat().max_abs_diff(&ComplexMatrix::diag_real(&[1.0, 0.0])) < 1e-15);
        assert_eq!(coherence_from_density(&rho).components(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn parameter_set_i2_coherence() {
        let r = vec![1.0 / 3.0, 0.25, 0.5];
        let rho = density_from_coherence(&CoherenceVector::new(2, r.clone()).unwrap()).unwrap();
        let back = coherence_from_density(&rho);
        for (a, b) in back.components().iter().zip(&r) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn unphysical_coherence_is_rejected() {
        let v = CoherenceVector::new(2, vec![0.0, 0.0, 1.5]).unwrap();
        assert!(matches!(density_from_coherence(&v), Err(Error::NotPositive { .. })));
        assert!(CoherenceVector::new(3, vec![0.0; 3]).is_err());
    }

    #[test]
    fn ancilla_examples() {
        let a = ancilla_state([0.0, 0.0, 1.0]).unwrap();
        assert!((a.purity() - 1.0).abs() < 1e-15);
        let a = ancilla_state([0.0, 0.0, 0.5]).unwrap();
        assert!((coherence_from_density(&a).length() - 0.5).abs() < 1e-15);
        let a = ancilla_state([0.0, 0.25, 0.25]).unwrap();
        let ev = a.eigenvalues();
        let r = 2.0f64.sqrt() / 4.0;
        assert!((ev[0] - (1.0 - r) / 2.0).abs() < 1e-14);
        assert!((ev[1] - (1.0 + r) / 2.0).abs() < 1e-14);
        assert!(ancilla_state([0.0, 0.8, 0.8]).is_err());
    }

    #[test]
    fn product_state_examples() {
        let m = DensityMatrix::maximally_mixed(2);
        let p = product_state(&m, &m);
        assert!(p.mat().max_abs_diff(&ComplexMatrix::identity(4).scale_re(0.25)) < 1e-15);

        let up = ancilla_state([0.0, 0.0, 1.0]).unwrap();
        let p = product_state(&up, &up);
        assert!((p.purity() - 1.0).abs() < 1e-15);
        assert_eq!(p.mat()[(0, 0)], ONE);
    }

    #[test]
    fn product_state_partial_traces_and_purity_seed_9() {
        let s = random_state(2, false, 9);
        let a = random_state(2, false, 10);
        let p = product_state(&s, &a);
        assert!((p.purity() - s.purity() * a.purity()).abs() < 1e-12);
        let back_s = p.partial_trace(2, 2, Keep::S).unwrap();
        let back_a = p.partial_trace(2, 2, Keep::A).unwrap();
        assert!(back_s.mat().max_abs_diff(s.mat()) < 1e-13);
        assert!(back_a.mat().max_abs_diff(a.mat()) < 1e-13);
    }

    #[test]
    fn random_states_are_valid_and_deterministic() {
        for seed in 0..5 {
            let p = random_state(2, true, seed);
            assert!((p.purity() - 1.0).abs() < 1e-12);
            DensityMatrix::new(p.mat().clone()).unwrap();
            let m = random_state(3, false, seed);
            assert!((m.eigenvalues().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            DensityMatrix::new(m.mat().clone()).unwrap();
        }
        assert_eq!(random_state(4, false, 77), random_state(4, false, 77));
        assert_eq!(random_state(4, true, 77), random_state(4, true, 77));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let u = random_unitary(5, 1);
        assert!(u.adjoint().matmul(&u).max_abs_diff(&ComplexMatrix::identity(5)) < 1e-13);
    }
}
