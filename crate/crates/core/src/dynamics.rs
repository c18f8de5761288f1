//! Time-independent Hamiltonians, unitary propagation `U(t) = e^{−iHt}` and
//! expectation values `⟨O⟩_t = tr[U ρ U† O]`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, ComplexMatrix, HermEigen, C64};
use crate::state::{sigma_x, sigma_y, sigma_z, DensityMatrix};
use crate::tol;

/// Dense complex matrix as stored on disk: flat row-major real and
/// imaginary parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries_re: Vec<f64>,
    pub entries_im: Vec<f64>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.dim * self.dim;
        if self.entries_re.len() != n || self.entries_im.len() != n {
            return Err(Error::Validation(format!(
                "matrix of dim {} needs {n} entries_re and entries_im, got {} and {}",
                self.dim,
                self.entries_re.len(),
                self.entries_im.len()
            )));
        }
        let data = self
            .entries_re
            .iter()
            .zip(&self.entries_im)
            .map(|(&re, &im)| C64::new(re, im))
            .collect();
        ComplexMatrix::from_vec(self.dim, self.dim, data)
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.rows(),
            entries_re: m.entries().iter().map(|z| z.re).collect(),
            entries_im: m.entries().iter().map(|z| z.im).collect(),
        }
    }
}

/// Hermitian generator of the dynamics (ħ = 1).
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    mat: ComplexMatrix,
    eigen: HermEigen,
}

impl Hamiltonian {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hamiltonian of shape {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let eigen = herm_eig(&mat)?;
        Ok(Self { mat, eigen })
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(ComplexMatrix::zeros(dim, dim)).expect("zero matrix is Hermitian")
    }

    /// Loads `{dim, entries_re, entries_im}` JSON and validates Hermiticity.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let file: MatrixFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            source_name: path.display().to_string(),
            message: format!("line {} column {}: {e}", e.line(), e.column()),
        })?;
        Self::new(file.to_matrix()?)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn eigen(&self) -> &HermEigen {
        &self.eigen
    }
}

/// The two-qubit eigenbasis `|E_1⟩..|E_4⟩` with energies 4, 2, 1, 0, in the
/// `|s a⟩` product basis (index `2s + a`, `|+⟩_z` = 0).
pub fn spectrum_4210_eigenkets() -> [(f64, [C64; 4]); 4] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [
        (4.0, [z, o, z, z]),
        (2.0, [h, z, h, z]),
        (1.0, [z, z, z, o]),
        (0.0, [-h, z, h, z]),
    ]
}

pub fn hamiltonian_spectrum_4210() -> Hamiltonian {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (e, ket) in spectrum_4210_eigenkets() {
        m = &m + &ComplexMatrix::outer(&ket, &ket).scale_re(e);
    }
    Hamiltonian::new(m).expect("spectral sum is Hermitian")
}

/// `(σ₁/√2)⊗(cos φ s₂ + sin φ s₃) + 1⊗½[(s₂ − s₁) sin φ + s₃ cos φ]`.
pub fn hamiltonian_interaction(phi: f64) -> Hamiltonian {
    let (s, c) = phi.sin_cos();
    let (sx, sy, sz) = (sigma_x(), sigma_y(), sigma_z());
    let coupling = kron(&sx.scale_re(FRAC_1_SQRT_2), &(&sy.scale_re(c) + &sz.scale_re(s)));
    let local = &(&sy - &sx).scale_re(s) + &sz.scale_re(c);
    let local = kron(&ComplexMatrix::identity(2), &local.scale_re(0.5));
    Hamiltonian::new(&coupling + &local).expect("interaction is Hermitian")
}

/// Angle with `cos 2φ = 1/√3`, the coupling used for the figure scenarios.
pub fn figure_phi() -> f64 {
    0.5 * (1.0 / 3.0f64.sqrt()).acos()
}

/// Hermitian `H` with `e^{−iHt} = u` for a unitary `u`, taking principal
/// phases in `(−π, π]`. The commuting Hermitian parts of `u` are
/// diagonalized jointly through a generic linear combination.
pub fn hamiltonian_generating(u: &ComplexMatrix, t: f64) -> Result<Hamiltonian> {
    let n = u.rows();
    if !u.is_square() || t == 0.0 {
        return Err(Error::InvalidArgument(
            "generator needs a square unitary and t != 0".into(),
        ));
    }
    let unitarity = u.adjoint().matmul(u).max_abs_diff(&ComplexMatrix::identity(n));
    if unitarity > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "matrix is not unitary (deviation {unitarity:.3e})"
        )));
    }
    let re = (u + &u.adjoint()).scale_re(0.5);
    let im = (u - &u.adjoint()).scale(C64::new(0.0, -0.5));
    let mut best: Option<(f64, Hamiltonian)> = None;
    for mix in [0.618_033_988_749_894_9, 0.414_213_562_373_095, 1.732_050_807_568_877_2] {
        let eig = herm_eig(&(&re + &im.scale_re(mix)))?;
        let phases: Vec<f64> = (0..n)
            .map(|k| {
                let v = eig.vector(k);
                let a = crate::linalg::inner(&v, &re.mul_vec(&v)).re;
                let b = crate::linalg::inner(&v, &im.mul_vec(&v)).re;
                (-b).atan2(a)
            })
            .collect();
        let gen = ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| eig.vectors[(r, k)] * eig.vectors[(c, k)].conj() * (phases[k] / t))
                .sum()
        });
        let gen = (&gen + &gen.adjoint()).scale_re(0.5);
        let h = Hamiltonian::new(gen)?;
        let err = propagator(&h, t).u.max_abs_diff(u);
        if err < 1e-10 {
            return Ok(h);
        }
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, h));
        }
    }
    let (err, _) = best.expect("at least one attempt");
    Err(Error::InvalidArgument(format!(
        "could not resolve the spectrum of the unitary (residual {err:.3e})"
    )))
}

#[derive(Clone, Debug)]
pub struct Propagator {
    pub t: f64,
    pub u: ComplexMatrix,
}

/// `U(t) = V e^{−iΛt} V†`; exactly the identity at `t = 0`.
pub fn propagator(h: &Hamiltonian, t: f64) -> Propagator {
    assert!(t.is_finite(), "propagation time must be finite");
    if t == 0.0 {
        return Propagator {
            t,
            u: ComplexMatrix::identity(h.dim()),
        };
    }
    let u = h.eigen().apply_fn(|e| C64::from_polar(1.0, -e * t));
    Propagator { t, u }
}

pub fn evolve(rho0: &DensityMatrix, h: &Hamiltonian, t: f64) -> Result<DensityMatrix> {
    if rho0.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dim {} under a Hamiltonian of dim {}",
            rho0.dim(),
            h.dim()
        )));
    }
    Ok(evolve_with(rho0, &propagator(h, t)))
}

pub fn evolve_with(rho0: &DensityMatrix, u: &Propagator) -> DensityMatrix {
    let m = u.u.conjugate(rho0.mat());
    DensityMatrix::from_trusted((&m + &m.adjoint()).scale_re(0.5))
}

/// Hermitian operator representing a measured quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    mat: ComplexMatrix,
}

impl Observable {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let deviation = mat.hermitian_deviation();
        if deviation > tol::HERMITIAN {
            return Err(Error::NonHermitianObservable { deviation });
        }
        Ok(Self { mat })
    }

    /// `c₀·1 + c₁σ_x + c₂σ_y + c₃σ_z`.
    pub fn from_pauli(coefficients: [f64; 4]) -> Self {
        let [c0, c1, c2, c3] = coefficients;
        let m = &(&ComplexMatrix::identity(2).scale_re(c0) + &sigma_x().scale_re(c1))
            + &(&sigma_y().scale_re(c2) + &sigma_z().scale_re(c3));
        Self { mat: m }
    }

    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn spectrum(&self) -> HermEigen {
        herm_eig(&self.mat).expect("observables are Hermitian")
    }

    /// `i[H, O]`, the Heisenberg-picture time derivative of `O`.
    pub fn heisenberg_derivative(&self, h: &Hamiltonian) -> Observable {
        let c = h.mat().commutator(&self.mat).scale(C64::new(0.0, 1.0));
        Observable::from_trusted((&c + &c.adjoint()).scale_re(0.5))
    }
}

/// `Re tr(ρ O)`.
pub fn expectation(rho: &DensityMatrix, o: &Observable) -> Result<f64> {
    if rho.dim() != o.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dim {} with an observable of dim {}",
            rho.dim(),
            o.dim()
        )));
    }
    let v = rho.mat().trace_product(o.mat());
    debug_assert!(
        v.im.abs() < 1e-11 * (1.0 + o.mat().max_norm()),
        "imaginary residue {}",
        v.im
    );
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{ancilla_state, product_state, random_state};

    #[test]
    fn spectrum_4210_eigenvalues() {
        let h = hamiltonian_spectrum_4210();
        let ev = herm_eig(h.mat()).unwrap().values;
        for (got, want) in ev.iter().zip([0.0, 1.0, 2.0, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_4210_eigenkets_are_orthonormal_and_resolve_h() {
        let kets = spectrum_4210_eigenkets();
        for (i, (_, a)) in kets.iter().enumerate() {
            for (j, (_, b)) in kets.iter().enumerate() {
                let ip: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip.re - want).abs() < 1e-15 && ip.im.abs() < 1e-15);
            }
        }
        // H|E_i⟩ = E_i|E_i⟩
        let h = hamiltonian_spectrum_4210();
        for (e, ket) in &kets {
            let hk = h.mat().mul_vec(ket);
            for (x, y) in hk.iter().zip(ket) {
                assert!((x - y * e).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn interaction_formula_at_zero_angle() {
        let h = hamiltonian_interaction(0.0);
        let want = &kron(&sigma_x().scale_re(FRAC_1_SQRT_2), &sigma_y())
            + &kron(&ComplexMatrix::identity(2), &sigma_z().scale_re(0.5));
        assert!(h.mat().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn interaction_is_traceless_on_a_grid() {
        for k in 0..50 {
            let phi = -3.0 + 0.13 * k as f64;
            assert!(hamiltonian_interaction(phi).mat().trace().norm() < 1e-14);
        }
        assert!(((2.0 * figure_phi()).cos() - 1.0 / 3.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn propagator_identity_and_recurrence() {
        let h = hamiltonian_spectrum_4210();
        assert_eq!(propagator(&h, 0.0).u, ComplexMatrix::identity(4));
        let u = propagator(&h, 2.0 * std::f64::consts::PI).u;
        assert!(u.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
    }

    #[test]
    fn propagator_group_property_and_unitarity() {
        let h = hamiltonian_interaction(figure_phi());
        for (t1, t2) in [(0.3, 1.7), (-2.0, 5.5), (11.0, 0.01)] {
            let u1 = propagator(&h, t1).u;
            let u2 = propagator(&h, t2).u;
            let u12 = propagator(&h, t1 + t2).u;
            assert!(u1.matmul(&u2).max_abs_diff(&u12) < 1e-11);
            assert!(u1.adjoint().matmul(&u1).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-11);
        }
    }

    #[test]
    fn stationary_eigenstate() {
        let h = hamiltonian_spectrum_4210();
        let (_, e1) = spectrum_4210_eigenkets()[0];
        let rho = DensityMatrix::pure(&e1).unwrap();
        for t in [0.0, 0.7, 3.3] {
            let r = evolve(&rho, &h, t).unwrap();
            assert!(r.mat().max_abs_diff(rho.mat()) < 1e-14);
        }
    }

    #[test]
    fn evolve_preserves_purity() {
        let h = hamiltonian_interaction(figure_phi());
        let rho = product_state(&random_state(2, true, 1), &ancilla_state([0.0, 0.0, 1.0]).unwrap());
        for k in 0..40 {
            let r = evolve(&rho, &h, 0.5 * k as f64).unwrap();
            assert!((r.purity() - 1.0).abs() < 1e-11);
        }
        assert!(evolve(&random_state(3, true, 0), &h, 1.0).is_err());
    }

    #[test]
    fn expectation_examples() {
        let up = ancilla_state([0.0, 0.0, 1.0]).unwrap();
        let z = Observable::new(sigma_z()).unwrap();
        let x = Observable::new(sigma_x()).unwrap();
        assert_eq!(expectation(&up, &z).unwrap(), 1.0);
        assert_eq!(expectation(&DensityMatrix::maximally_mixed(2), &x).unwrap(), 0.0);
        assert!(Observable::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])).is_err());
        assert!(expectation(&random_state(4, false, 1), &z).is_err());
    }

    #[test]
    fn generator_of_random_unitary() {
        for seed in 0..5 {
            let u = crate::state::random_unitary(4, seed);
            let h = hamiltonian_generating(&u, 1.0).unwrap();
            assert!(propagator(&h, 1.0).u.max_abs_diff(&u) < 1e-10);
            let h = hamiltonian_generating(&u, 2.5).unwrap();
            assert!(propagator(&h, 2.5).u.max_abs_diff(&u) < 1e-10);
        }
        assert!(hamiltonian_generating(&ComplexMatrix::diag_real(&[2.0, 1.0]), 1.0).is_err());
    }

    #[test]
    fn matrix_file_validation() {
        let f = MatrixFile {
            dim: 2,
            entries_re: vec![1.0, 0.0, 0.0],
            entries_im: vec![0.0; 4],
        };
        assert!(f.to_matrix().is_err());
        let f = MatrixFile {
            dim: 2,
            entries_re: vec![0.0, 1.0, 0.0, 0.0],
            entries_im: vec![0.0; 4],
        };
        assert!(matches!(
            Hamiltonian::new(f.to_matrix().unwrap()),
            Err(Error::NotHermitian { .. })
        ));
    }
}
