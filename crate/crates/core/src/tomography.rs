//! The affine measurement map `p(t) = Ω(t)·r + k(t)` from the initial
//! coherence vector `r` of the system to the expectation values measured on
//! system + ancilla at time `t`, its determinant Δ(t), the Jacobi-formula
//! derivative dΔ/dt, and inversion of the map.
//!
//! Ω is obtained by probing: `k` is the response to the maximally mixed
//! system state and column `a` is the response to `I/N + (ε/2)T_a`, minus
//! `k`, divided by ε. The map is exactly affine in `r`, so the quotient is
//! the exact partial derivative for every admissible ε.

use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_with, expectation, propagator, Hamiltonian, Observable, Propagator};
use crate::error::{Error, Result};
use crate::linalg::{cond2, det_and_cofactors, herm_eig, kron, solve, ComplexMatrix, RealMatrix};
use crate::state::{
    coherence_matrix, density_from_coherence, gell_mann, product_state, CoherenceVector, DensityMatrix,
};
use crate::tol;

/// Observables measured on the system (`o_s`) and on the ancilla (`o_a`).
#[derive(Clone, Debug, PartialEq)]
pub struct ObservablePair {
    pub o_s: Observable,
    pub o_a: Observable,
}

impl ObservablePair {
    pub fn new(o_s: Observable, o_a: Observable) -> Self {
        Self { o_s, o_a }
    }

    /// Qubit pair from coefficient lists `(O⁰, O¹, O², O³)`.
    pub fn from_pauli(o_s: [f64; 4], o_a: [f64; 4]) -> Self {
        Self {
            o_s: Observable::from_pauli(o_s),
            o_a: Observable::from_pauli(o_a),
        }
    }
}

/// `[O_S⊗1, 1⊗O_A, O_S⊗O_A]`: three mutually commuting observables on the
/// two-qubit space.
pub fn qubit_observable_rows(pair: &ObservablePair) -> Vec<Observable> {
    let i2 = ComplexMatrix::identity(pair.o_a.dim());
    let is = ComplexMatrix::identity(pair.o_s.dim());
    vec![
        Observable::from_trusted(kron(pair.o_s.mat(), &i2)),
        Observable::from_trusted(kron(&is, pair.o_a.mat())),
        Observable::from_trusted(kron(pair.o_s.mat(), pair.o_a.mat())),
    ]
}

/// Spectral projectors of a nondegenerate observable, ordered by ascending
/// eigenvalue.
pub fn spectral_projectors(o: &Observable) -> Result<Vec<ComplexMatrix>> {
    let e = o.spectrum();
    let gap = e.values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if gap <= tol::SPECTRAL_GAP {
        return Err(Error::DegenerateSpectrum { gap });
    }
    Ok((0..e.values.len())
        .map(|i| {
            let v = e.vector(i);
            ComplexMatrix::outer(&v, &v)
        })
        .collect())
}

/// The `N²−1` probability components used for an `N`-level system with an
/// `N`-level ancilla, in fixed order:
/// `ŝ_i⊗1` for `i = 1..N−1`, then `1⊗â_j` for `j = 2..N`, then `ŝ_i⊗â_j`
/// for `i, j ≥ 2` (row-major in `i`, `j`). `ŝ_N⊗1` is left out because
/// `Σ_i ŝ_i = 1` makes it affinely dependent on the others.
pub fn ndim_probability_components(o_s: &Observable, o_a: &Observable) -> Result<Vec<Observable>> {
    let n = o_s.dim();
    if o_a.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "system observable of dim {n} with ancilla observable of dim {}",
            o_a.dim()
        )));
    }
    let s = spectral_projectors(o_s)?;
    let a = spectral_projectors(o_a)?;
    let id = ComplexMatrix::identity(n);
    let mut comps = Vec::with_capacity(n * n - 1);
    for si in s.iter().take(n - 1) {
        comps.push(Observable::from_trusted(kron(si, &id)));
    }
    for aj in a.iter().skip(1) {
        comps.push(Observable::from_trusted(kron(&id, aj)));
    }
    for si in s.iter().skip(1) {
        for aj in a.iter().skip(1) {
            comps.push(Observable::from_trusted(kron(si, aj)));
        }
    }
    Ok(comps)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographyMap {
    pub t: f64,
    pub omega: RealMatrix,
    pub kvec: Vec<f64>,
    /// Probe amplitude used to build Ω.
    pub probe: f64,
}

impl TomographyMap {
    pub fn dim(&self) -> usize {
        self.kvec.len()
    }

    /// `Ω·r + k`.
    pub fn predict(&self, r: &CoherenceVector) -> Vec<f64> {
        self.omega
            .mul_vec(r.components())
            .iter()
            .zip(&self.kvec)
            .map(|(a, b)| a + b)
            .collect()
    }
}

fn check_setup(h: &Hamiltonian, ancilla: &DensityMatrix, comps: &[Observable]) -> Result<usize> {
    let n = ancilla.dim();
    if h.dim() != n * n {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian of dim {} for a {n}x{n} system+ancilla",
            h.dim()
        )));
    }
    if comps.len() != n * n - 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} measured components, expected {}",
            comps.len(),
            n * n - 1
        )));
    }
    if let Some(c) = comps.iter().find(|c| c.dim() != n * n) {
        return Err(Error::DimensionMismatch(format!(
            "component of dim {} on a {}-dim space",
            c.dim(),
            n * n
        )));
    }
    Ok(n)
}

fn measure(rho_s: &ComplexMatrix, ancilla: &DensityMatrix, u: &Propagator, comps: &[Observable]) -> Vec<f64> {
    let total = product_state(&DensityMatrix::from_trusted(rho_s.clone()), ancilla);
    let evolved = evolve_with(&total, u);
    comps
        .iter()
        .map(|c| expectation(&evolved, c).expect("dimensions checked"))
        .collect()
}

/// Largest probe amplitude `0.5/N · 2^{−k}` for which every probe state
/// `I/N + (ε/2)T_a` is positive semidefinite.
pub fn probe_amplitude(n: usize) -> Result<f64> {
    let basis = gell_mann(n);
    let mut eps = 0.5 / n as f64;
    // λ_min(I/N + (ε/2)T) = 1/N + (ε/2)·λ_min(T)
    let worst = basis
        .elements()
        .iter()
        .map(|t| herm_eig(t).expect("Hermitian").values[0])
        .fold(f64::INFINITY, f64::min);
    while 1.0 / n as f64 + 0.5 * eps * worst < 0.0 {
        eps *= 0.5;
        if eps < tol::MIN_PROBE {
            return Err(Error::NotPositive {
                min_eigenvalue: 1.0 / n as f64 + 0.5 * eps * worst,
            });
        }
    }
    Ok(eps)
}

/// Builds `(Ω, k)` at time `t`.
pub fn build_map(h: &Hamiltonian, ancilla: &DensityMatrix, comps: &[Observable], t: f64) -> Result<TomographyMap> {
    let n = check_setup(h, ancilla, comps)?;
    build_map_with_probe(h, ancilla, comps, t, probe_amplitude(n)?)
}

/// [`build_map`] with an explicit probe amplitude. The probe states must be
/// positive semidefinite.
pub fn build_map_with_probe(
    h: &Hamiltonian,
    ancilla: &DensityMatrix,
    comps: &[Observable],
    t: f64,
    eps: f64,
) -> Result<TomographyMap> {
    let n = check_setup(h, ancilla, comps)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("probe amplitude {eps}")));
    }
    let u = propagator(h, t);
    let basis = gell_mann(n);
    let mixed = ComplexMatrix::identity(n).scale_re(1.0 / n as f64);
    let kvec = measure(&mixed, ancilla, &u, comps);
    let mut columns = Vec::with_capacity(basis.len());
    for ta in basis.elements() {
        let probe = &mixed + &ta.scale_re(0.5 * eps);
        let min = herm_eig(&probe)?.values[0];
        if min < tol::PSD_FLOOR {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        let p = measure(&probe, ancilla, &u, comps);
        columns.push(p.iter().zip(&kvec).map(|(pa, k)| (pa - k) / eps).collect());
    }
    Ok(TomographyMap {
        t,
        omega: RealMatrix::from_columns(&columns),
        kvec,
        probe: eps,
    })
}

/// Expectation values obtained by evolving `ρ_S ⊗ ρ_A` directly.
pub fn simulate_measurements(
    h: &Hamiltonian,
    rho_s: &DensityMatrix,
    ancilla: &DensityMatrix,
    comps: &[Observable],
    t: f64,
) -> Result<Vec<f64>> {
    check_setup(h, ancilla, comps)?;
    if rho_s.dim() != ancilla.dim() {
        return Err(Error::DimensionMismatch(format!(
            "system of dim {} with ancilla of dim {}",
            rho_s.dim(),
            ancilla.dim()
        )));
    }
    Ok(measure(rho_s.mat(), ancilla, &propagator(h, t), comps))
}

/// Δ = det Ω.
pub fn determinant(map: &TomographyMap) -> f64 {
    det_and_cofactors(&map.omega).expect("Ω is square").0
}

/// Two estimates of dΔ/dt at one instant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetDerivative {
    /// `Σ_ij cof(Ω)_ij · dΩ_ij/dt`, with dΩ/dt from central differences.
    pub jacobi: f64,
    /// `[Δ(t+h) − Δ(t−h)] / 2h`.
    pub central: f64,
}

pub fn ddet_dt(
    h: &Hamiltonian,
    ancilla: &DensityMatrix,
    comps: &[Observable],
    t: f64,
    step: f64,
) -> Result<DetDerivative> {
    let map = build_map(h, ancilla, comps, t)?;
    ddet_dt_at(&map, h, ancilla, comps, step)
}

/// Same as [`ddet_dt`] reusing an already built map at `map.t`.
pub fn ddet_dt_at(
    map: &TomographyMap,
    h: &Hamiltonian,
    ancilla: &DensityMatrix,
    comps: &[Observable],
    step: f64,
) -> Result<DetDerivative> {
    let (lo, hi) = tol::DERIVATIVE_STEP_RANGE;
    if !(lo..=hi).contains(&step) {
        return Err(Error::InvalidArgument(format!(
            "derivative step {step} outside [{lo:e}, {hi:e}]"
        )));
    }
    let plus = build_map_with_probe(h, ancilla, comps, map.t + step, map.probe)?;
    let minus = build_map_with_probe(h, ancilla, comps, map.t - step, map.probe)?;
    let (_, cof) = det_and_cofactors(&map.omega)?;
    let domega = plus.omega.sub(&minus.omega).scale(0.5 / step);
    let jacobi = cof.entries().iter().zip(domega.entries()).map(|(c, d)| c * d).sum();
    let central = (determinant(&plus) - determinant(&minus)) / (2.0 * step);
    Ok(DetDerivative { jacobi, central })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub rho0: CoherenceVector,
    /// `‖Ω·rho0 + k − p‖₂`.
    pub residual: f64,
    pub condition: f64,
    pub delta: f64,
    /// Whether `rho0` is a valid density matrix.
    pub physical: bool,
}

/// Inverts the map: solves `Ω·r = p − k`.
pub fn reconstruct(map: &TomographyMap, p: &[f64]) -> Result<ReconstructionResult> {
    let m = map.dim();
    if p.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} measured values for a map of size {m}",
            p.len()
        )));
    }
    let delta = determinant(map);
    let scale = map.omega.frobenius_norm();
    if delta.abs() < tol::SINGULAR_DET * scale || scale == 0.0 {
        return Err(Error::SingularMatrix(format!(
            "|Δ(t={})| = {:.3e} below {:.0e}·‖Ω‖_F",
            map.t,
            delta.abs(),
            tol::SINGULAR_DET
        )));
    }
    let rhs: Vec<f64> = p.iter().zip(&map.kvec).map(|(a, b)| a - b).collect();
    let x = solve(&map.omega, &rhs)?;
    let n = ((m + 1) as f64).sqrt().round() as usize;
    let rho0 = CoherenceVector::new(n, x)?;
    let residual = map
        .predict(&rho0)
        .iter()
        .zip(p)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let physical = density_from_coherence(&rho0).is_ok();
    Ok(ReconstructionResult {
        rho0,
        residual,
        condition: cond2(&map.omega)?,
        delta,
        physical,
    })
}

/// A complete measurement protocol: dynamics, ancilla preparation and the
/// measured components.
#[derive(Clone, Debug)]
pub struct Protocol {
    pub hamiltonian: Hamiltonian,
    pub ancilla: DensityMatrix,
    pub components: Vec<Observable>,
}

impl Protocol {
    pub fn new(hamiltonian: Hamiltonian, ancilla: DensityMatrix, components: Vec<Observable>) -> Result<Self> {
        check_setup(&hamiltonian, &ancilla, &components)?;
        Ok(Self {
            hamiltonian,
            ancilla,
            components,
        })
    }

    pub fn qubit(hamiltonian: Hamiltonian, ancilla: DensityMatrix, pair: &ObservablePair) -> Result<Self> {
        Self::new(hamiltonian, ancilla, qubit_observable_rows(pair))
    }

    pub fn system_dim(&self) -> usize {
        self.ancilla.dim()
    }

    pub fn map_at(&self, t: f64) -> Result<TomographyMap> {
        build_map(&self.hamiltonian, &self.ancilla, &self.components, t)
    }

    pub fn ddet_dt(&self, map: &TomographyMap, step: f64) -> Result<DetDerivative> {
        ddet_dt_at(map, &self.hamiltonian, &self.ancilla, &self.components, step)
    }

    pub fn measurements(&self, rho_s: &DensityMatrix, t: f64) -> Result<Vec<f64>> {
        simulate_measurements(&self.hamiltonian, rho_s, &self.ancilla, &self.components, t)
    }

    /// Initial total state `ρ_S ⊗ ρ_A` for a system coherence vector.
    pub fn initial_state(&self, r: &CoherenceVector) -> Result<DensityMatrix> {
        Ok(product_state(&density_from_coherence(r)?, &self.ancilla))
    }
}

/// Measurements for `I/N + ½Σ r_a T_a` without a positivity check, so the
/// affine response can be probed outside the set of physical states.
pub fn unchecked_measurements(protocol: &Protocol, r: &CoherenceVector, t: f64) -> Vec<f64> {
    measure(
        &coherence_matrix(r),
        &protocol.ancilla,
        &propagator(&protocol.hamiltonian, t),
        &protocol.components,
    )
}
