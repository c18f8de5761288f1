//! Entanglement measures: reduced-state entropy of pure bipartite states,
//! Schmidt decomposition, Wootters concurrence and entanglement of formation
//! for two qubits, and the Schmidt-basis observables that make the first two
//! measured expectation values vanish on an entangled state.

use serde::{Deserialize, Serialize};

use crate::dynamics::Observable;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, norm, singular_values, svd, ComplexMatrix, Keep, C64};
use crate::state::{sigma_y, DensityMatrix};
use crate::tol;
use crate::tomography::ObservablePair;

/// `−Σ p log₂ p` over eigenvalues above the entropy floor.
pub fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&p| p > tol::ENTROPY_EIGEN_FLOOR)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn binary_entropy(x: f64) -> f64 {
    entropy_bits(&[x, 1.0 - x])
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_bits(&rho.eigenvalues())
}

fn require_bipartite(rho: &DensityMatrix, dim_s: usize, dim_a: usize) -> Result<()> {
    if rho.dim() != dim_s * dim_a {
        return Err(Error::DimensionMismatch(format!(
            "state of dim {} split as {dim_s}x{dim_a}",
            rho.dim()
        )));
    }
    Ok(())
}

fn require_pure(rho: &DensityMatrix) -> Result<()> {
    let purity = rho.purity();
    if (purity - 1.0).abs() > tol::PURITY {
        return Err(Error::NotPure { purity });
    }
    Ok(())
}

/// Spectrum of the reduced state on the kept side, ascending.
pub fn reduced_spectrum(rho: &DensityMatrix, dim_s: usize, dim_a: usize, keep: Keep) -> Result<Vec<f64>> {
    require_bipartite(rho, dim_s, dim_a)?;
    Ok(rho.partial_trace(dim_s, dim_a, keep)?.eigenvalues())
}

/// Entanglement entropy (bits) of a pure total state, from `Tr_A ρ`.
pub fn entropy_pure(rho: &DensityMatrix, dim_s: usize, dim_a: usize) -> Result<f64> {
    entropy_pure_side(rho, dim_s, dim_a, Keep::S)
}

pub fn entropy_pure_side(rho: &DensityMatrix, dim_s: usize, dim_a: usize, keep: Keep) -> Result<f64> {
    require_bipartite(rho, dim_s, dim_a)?;
    require_pure(rho)?;
    Ok(entropy_bits(&reduced_spectrum(rho, dim_s, dim_a, keep)?))
}

/// `|ψ⟩ = Σ_i √λ_i |e_i⟩⊗|f_i⟩`.
#[derive(Clone, Debug)]
pub struct SchmidtForm {
    /// Squared Schmidt coefficients λ_i, descending, summing to one.
    pub coefficients: Vec<f64>,
    pub basis_s: Vec<Vec<C64>>,
    pub basis_a: Vec<Vec<C64>>,
}

impl SchmidtForm {
    pub fn reassemble(&self) -> Vec<C64> {
        let ds = self.basis_s[0].len();
        let da = self.basis_a[0].len();
        let mut psi = vec![C64::new(0.0, 0.0); ds * da];
        for ((l, e), f) in self.coefficients.iter().zip(&self.basis_s).zip(&self.basis_a) {
            let w = l.sqrt();
            for i in 0..ds {
                for j in 0..da {
                    psi[i * da + j] += e[i] * f[j] * w;
                }
            }
        }
        psi
    }

    pub fn is_entangled(&self) -> bool {
        self.coefficients
            .iter()
            .filter(|&&l| l > tol::SCHMIDT_ENTANGLED)
            .count()
            > 1
    }
}

/// Schmidt decomposition from the SVD of the `dim_s × dim_a` reshape of
/// `ψ`. Each `|e_i⟩` has its first non-negligible entry real and positive.
pub fn schmidt(psi: &[C64], dim_s: usize, dim_a: usize) -> Result<SchmidtForm> {
    if psi.len() != dim_s * dim_a {
        return Err(Error::DimensionMismatch(format!(
            "ket of length {} split as {dim_s}x{dim_a}",
            psi.len()
        )));
    }
    let n = norm(psi);
    if (n - 1.0).abs() > tol::KET_NORM {
        return Err(Error::InvalidState(format!("ket norm {n} differs from 1")));
    }
    let m = ComplexMatrix::from_fn(dim_s, dim_a, |i, j| psi[i * dim_a + j] / n);
    let d = svd(&m)?;
    let k = dim_s.min(dim_a);
    let total: f64 = d.s.iter().map(|s| s * s).sum();
    let mut coefficients = Vec::with_capacity(k);
    let mut basis_s = Vec::with_capacity(k);
    let mut basis_a = Vec::with_capacity(k);
    for c in 0..k {
        let mut e = d.u.col(c);
        // ψ = Σ s_c u_c ⊗ conj(v_c)
        let mut f: Vec<C64> = d.v.col(c).iter().map(|z| z.conj()).collect();
        if let Some(lead) = e.iter().find(|z| z.norm() > 1e-12).copied() {
            let phase = lead / lead.norm();
            e.iter_mut().for_each(|z| *z /= phase);
            f.iter_mut().for_each(|z| *z *= phase);
        }
        coefficients.push(d.s[c] * d.s[c] / total);
        basis_s.push(e);
        basis_a.push(f);
    }
    Ok(SchmidtForm {
        coefficients,
        basis_s,
        basis_a,
    })
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit measure on a state of dim {}",
            rho.dim()
        )));
    }
    Ok(())
}

/// Wootters concurrence `max(0, μ₁−μ₂−μ₃−μ₄)`. The μ_i are the singular
/// values of `√ρ (σ_y⊗σ_y) √ρ*`, i.e. the square roots of the eigenvalues
/// of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let sqrt_rho = herm_eig(rho.mat())?.apply_fn(|x| C64::new(x.max(0.0).sqrt(), 0.0));
    let yy = kron(&sigma_y(), &sigma_y());
    let m = sqrt_rho.matmul(&yy).matmul(&sqrt_rho.conj());
    let mu = singular_values(&m)?;
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// `E_F = h((1 + √(1 − C²))/2)` in bits.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()))
}

pub fn eof(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// Entanglement data of a bipartite state at one instant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub t: f64,
    /// Reduced-state entropy, present only for pure total states.
    pub entropy: Option<f64>,
    pub concurrence: Option<f64>,
    /// Present only for two qubits.
    pub eof: Option<f64>,
    pub purity: f64,
}

pub fn report(rho: &DensityMatrix, dim_s: usize, dim_a: usize, t: f64) -> Result<EntanglementReport> {
    require_bipartite(rho, dim_s, dim_a)?;
    let purity = rho.purity();
    let entropy = match entropy_pure(rho, dim_s, dim_a) {
        Ok(e) => Some(e),
        Err(Error::NotPure { .. }) => None,
        Err(e) => return Err(e),
    };
    let (concurrence, eof) = if dim_s == 2 && dim_a == 2 {
        let c = concurrence(rho)?;
        (Some(c), Some(eof_from_concurrence(c)))
    } else {
        (None, None)
    };
    Ok(EntanglementReport {
        t,
        entropy,
        concurrence,
        eof,
        purity,
    })
}

/// `O_S = ω₁(|e₁⟩⟨e₂| + |e₂⟩⟨e₁|)`, `O_A = ω₂(|f₁⟩⟨f₂| + |f₂⟩⟨f₁|)` from the
/// Schmidt bases of an entangled two-qubit ket. On `ψ` these give
/// `⟨O_S⟩ = ⟨O_A⟩ = 0` and `⟨O_S⊗O_A⟩ = 2√(λ₁(1−λ₁))·ω₁ω₂`.
pub fn counterexample_observables(psi: &[C64], omega1: f64, omega2: f64) -> Result<ObservablePair> {
    let form = schmidt(psi, 2, 2)?;
    let smallest = form.coefficients[1];
    if smallest < tol::SCHMIDT_ENTANGLED {
        return Err(Error::ProductState { coefficient: smallest });
    }
    let flip = |b: &[Vec<C64>], w: f64| {
        let m = &ComplexMatrix::outer(&b[0], &b[1]) + &ComplexMatrix::outer(&b[1], &b[0]);
        Observable::new(m.scale_re(w)).expect("symmetrized outer products are Hermitian")
    };
    Ok(ObservablePair {
        o_s: flip(&form.basis_s, omega1),
        o_a: flip(&form.basis_a, omega2),
    })
}
