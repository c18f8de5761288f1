use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_with, expectation, hamiltonian_generating, hamiltonian_spectrum_4210, propagator};
use crate::entanglement::{counterexample_observables, eof, schmidt};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, C64};
use crate::state::{ancilla_state, density_from_coherence, product_state, CoherenceVector, DensityMatrix};
use crate::tomography::{determinant, ObservablePair, Protocol};

use super::config::{HamiltonianSpec, ObservableSpec, Scenario, ScenarioConfig, TimeGrid};
use super::zeros::{find_entanglement_zeros, ZeroSet};

pub const THEOREM_DELTA: f64 = 1e-8;
pub const THEOREM_DDELTA: f64 = 1e-6;
pub const MIXED_EOF: f64 = 1e-10;
pub const MIXED_DELTA: f64 = 1e-9;
pub const INVERSE_EXPECTATION: f64 = 1e-12;
pub const INVERSE_DELTA: f64 = 1e-10;
pub const INVERSE_DDELTA: f64 = 1e-7;

/// `O_S = σx + σy + σz`, shared by both mixed-state parameter sets.
pub const MIXED_O_S: [f64; 4] = [0.0, 1.0, 1.0, 1.0];
/// `O_A` with `|O¹| > |O²|`.
pub const MIXED_O_A: [f64; 4] = [0.0, 1.0, 0.5, 0.0];
pub const MIXED_ANCILLA: [f64; 3] = [0.0, 0.25, 0.25];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimVerdict {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub measured: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimsReport {
    pub passed: bool,
    pub claims: Vec<ClaimVerdict>,
}

impl ClaimsReport {
    pub fn new(claims: Vec<ClaimVerdict>) -> Self {
        Self {
            passed: claims.iter().all(|c| c.passed),
            claims,
        }
    }
}

/// At every located zero of a pure trajectory, Δ and dΔ/dt vanish.
pub fn pure_state_theorem(id: &str, scenario: &Scenario) -> Result<ClaimVerdict> {
    let zeros = find_entanglement_zeros(scenario, None)?;
    let mut measured = BTreeMap::new();
    let mut notes = Vec::new();
    let (mut max_delta, mut max_ddelta, mut max_central) = (0.0f64, 0.0f64, 0.0f64);
    let times = zeros.sample_times();
    if let ZeroSet::Everywhere { start, end } = zeros {
        notes.push(format!("entanglement vanishes on all of [{start}, {end}]"));
    }
    if times.is_empty() {
        notes.push("no entanglement zeros located".into());
    }
    for (i, &t) in times.iter().enumerate() {
        let map = scenario.protocol.map_at(t)?;
        let d = scenario.protocol.ddet_dt(&map, scenario.tolerances.derivative_step)?;
        max_delta = max_delta.max(determinant(&map).abs());
        max_ddelta = max_ddelta.max(d.jacobi.abs());
        max_central = max_central.max(d.central.abs());
        measured.insert(format!("zero_{i}"), t);
    }
    measured.insert("zeros".into(), times.len() as f64);
    measured.insert("max_abs_delta".into(), max_delta);
    measured.insert("max_abs_ddelta".into(), max_ddelta);
    measured.insert("max_abs_ddelta_central".into(), max_central);
    Ok(ClaimVerdict {
        id: id.into(),
        description: "zero entanglement of a pure state implies Δ = dΔ/dt = 0".into(),
        passed: max_delta < THEOREM_DELTA && max_ddelta < THEOREM_DDELTA,
        measured,
        notes,
    })
}

/// Mixed-state parameter sets: `(1/√2, 1/√2, 0)` (pure system) and
/// `(1/3, 1/4, 1/2)` (mixed system).
pub fn mixed_parameter_set(name: &str) -> Result<[f64; 3]> {
    match name {
        "i1" => Ok([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]),
        "i2" => Ok([1.0 / 3.0, 0.25, 0.5]),
        other => Err(Error::InvalidArgument(format!("unknown parameter set `{other}`"))),
    }
}

/// `3 |(O²_A)² − (O¹_A)²| / 128`.
pub fn mixed_expected_abs_delta(o_a: [f64; 4]) -> f64 {
    3.0 * (o_a[2] * o_a[2] - o_a[1] * o_a[1]).abs() / 128.0
}

/// The 4210 Hamiltonian with a mixed ancilla: at `π/2` the state is
/// separable while Δ stays finite.
pub fn mixed_counterexample(set: &str) -> Result<ClaimVerdict> {
    let r = mixed_parameter_set(set)?;
    let h = hamiltonian_spectrum_4210();
    let ancilla = ancilla_state(MIXED_ANCILLA)?;
    let rho_s = density_from_coherence(&CoherenceVector::new(2, r.to_vec())?)?;
    let protocol = Protocol::qubit(h, ancilla, &ObservablePair::from_pauli(MIXED_O_S, MIXED_O_A))?;
    let t = FRAC_PI_2;
    let total = product_state(&rho_s, &protocol.ancilla);
    let ef = eof(&evolve_with(&total, &propagator(&protocol.hamiltonian, t)))?;
    let delta = determinant(&protocol.map_at(t)?);
    let expected = mixed_expected_abs_delta(MIXED_O_A);
    let mut measured = BTreeMap::new();
    measured.insert("t".into(), t);
    measured.insert("eof".into(), ef);
    measured.insert("delta".into(), delta);
    measured.insert("expected_abs_delta".into(), expected);
    measured.insert("abs_delta_error".into(), (delta.abs() - expected).abs());
    Ok(ClaimVerdict {
        id: format!("b.{set}"),
        description: format!("mixed start ({set}): E_F(π/2) = 0 while |Δ(π/2)| = 3|O²² − O¹²|/128"),
        passed: ef < MIXED_EOF && (delta.abs() - expected).abs() < MIXED_DELTA,
        measured,
        notes: vec![
            format!("O_S = {MIXED_O_S:?}, O_A = {MIXED_O_A:?}, ancilla = {MIXED_ANCILLA:?}"),
            format!("sign of Δ(π/2): {}", if delta < 0.0 { "negative" } else { "positive" }),
        ],
    })
}

/// Dynamics that drive `|0⟩|0⟩` to an entangled `ψ` at `t* = 1`, measured
/// with the Schmidt-flip observables of `ψ`.
#[derive(Clone, Debug)]
pub struct InverseImplication {
    pub psi: Vec<C64>,
    pub pair: ObservablePair,
    pub protocol: Protocol,
    pub rho_s: DensityMatrix,
    pub t_star: f64,
    /// `λ₁ ≥ λ₂`, the Schmidt weights of `ψ`.
    pub weights: [f64; 2],
}

/// The unitary sends `|0,0⟩ → ψ = Σ√λᵢ|eᵢfᵢ⟩` and
/// `|1,0⟩ → √λ₂|e₁f₁⟩ − √λ₁|e₂f₂⟩`, both annihilated in expectation and in
/// coherence by `O_S ⊗ 1` and `1 ⊗ O_A`.
pub fn inverse_implication(psi: &[C64], omega1: f64, omega2: f64) -> Result<InverseImplication> {
    let pair = counterexample_observables(psi, omega1, omega2)?;
    let form = schmidt(psi, 2, 2)?;
    let (l1, l2) = (form.coefficients[0], form.coefficients[1]);
    let e1f1 = kron_ket(&form.basis_s[0], &form.basis_a[0]);
    let e2f2 = kron_ket(&form.basis_s[1], &form.basis_a[1]);
    let phi: Vec<C64> = e1f1
        .iter()
        .zip(&e2f2)
        .map(|(a, b)| a * l2.sqrt() - b * l1.sqrt())
        .collect();
    let norm = crate::linalg::norm(psi);
    let psi_n: Vec<C64> = psi.iter().map(|z| z / norm).collect();
    let w = unitary_with_columns(&[(0, psi_n.clone()), (2, phi)]);
    let t_star = 1.0;
    let h = hamiltonian_generating(&w, t_star)?;
    let protocol = Protocol::qubit(h, ancilla_state([0.0, 0.0, 1.0])?, &pair)?;
    let rho_s = density_from_coherence(&CoherenceVector::new(2, vec![0.0, 0.0, 1.0])?)?;
    Ok(InverseImplication {
        psi: psi_n,
        pair,
        protocol,
        rho_s,
        t_star,
        weights: [l1, l2],
    })
}

fn kron_ket(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Unitary with the given orthonormal columns, the rest completed by
/// Gram–Schmidt over the standard basis.
fn unitary_with_columns(fixed: &[(usize, Vec<C64>)]) -> ComplexMatrix {
    let n = fixed[0].1.len();
    let mut cols: Vec<Option<Vec<C64>>> = vec![None; n];
    for (i, v) in fixed {
        cols[*i] = Some(v.clone());
    }
    let mut basis: Vec<Vec<C64>> = fixed.iter().map(|(_, v)| v.clone()).collect();
    let mut candidates = (0..n).map(|k| {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[k] = C64::new(1.0, 0.0);
        e
    });
    for slot in cols.iter_mut().filter(|c| c.is_none()) {
        loop {
            let mut v = candidates.next().expect("standard basis spans the space");
            for b in &basis {
                let c = crate::linalg::inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
            let nv = crate::linalg::norm(&v);
            if nv > 1e-6 {
                let v: Vec<C64> = v.iter().map(|z| z / nv).collect();
                basis.push(v.clone());
                *slot = Some(v);
                break;
            }
        }
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c].as_ref().expect("filled")[r])
}

/// Measured numbers of the inverse-implication construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseMeasurement {
    pub exp_o_s: f64,
    pub exp_o_a: f64,
    pub exp_o_sa: f64,
    pub expected_o_sa: f64,
    pub delta: f64,
    pub ddelta: f64,
    pub ddelta_central: f64,
    pub state_error: f64,
}

pub fn measure_inverse_implication(
    setup: &InverseImplication,
    omega1: f64,
    omega2: f64,
    step: f64,
) -> Result<InverseMeasurement> {
    let psi = DensityMatrix::pure(&setup.psi)?;
    let o_s = kron(setup.pair.o_s.mat(), &ComplexMatrix::identity(2));
    let o_a = kron(&ComplexMatrix::identity(2), setup.pair.o_a.mat());
    let o_sa = kron(setup.pair.o_s.mat(), setup.pair.o_a.mat());
    let ex = |m: ComplexMatrix| expectation(&psi, &crate::dynamics::Observable::new(m)?);
    let reached = evolve_with(
        &product_state(&setup.rho_s, &setup.protocol.ancilla),
        &propagator(&setup.protocol.hamiltonian, setup.t_star),
    );
    let map = setup.protocol.map_at(setup.t_star)?;
    let d = setup.protocol.ddet_dt(&map, step)?;
    let l1 = setup.weights[0];
    Ok(InverseMeasurement {
        exp_o_s: ex(o_s)?,
        exp_o_a: ex(o_a)?,
        exp_o_sa: ex(o_sa)?,
        expected_o_sa: 2.0 * (l1 * (1.0 - l1)).sqrt() * omega1 * omega2,
        delta: determinant(&map),
        ddelta: d.jacobi,
        ddelta_central: d.central,
        state_error: reached.mat().max_abs_diff(psi.mat()),
    })
}

impl InverseMeasurement {
    pub fn passed(&self) -> bool {
        self.exp_o_s.abs() < INVERSE_EXPECTATION
            && self.exp_o_a.abs() < INVERSE_EXPECTATION
            && (self.exp_o_sa - self.expected_o_sa).abs() < INVERSE_EXPECTATION
            && self.delta.abs() < INVERSE_DELTA
            && self.ddelta.abs() < INVERSE_DDELTA
    }
}

/// Entangled targets: the fig1 trajectory at `t = 1` and a Bell state.
pub fn inverse_implication_claim(id: &str, psi: &[C64], omega1: f64, omega2: f64, step: f64) -> Result<ClaimVerdict> {
    let setup = inverse_implication(psi, omega1, omega2)?;
    let m = measure_inverse_implication(&setup, omega1, omega2, step)?;
    let mut measured = BTreeMap::new();
    measured.insert("lambda1".into(), setup.weights[0]);
    measured.insert("exp_o_s".into(), m.exp_o_s);
    measured.insert("exp_o_a".into(), m.exp_o_a);
    measured.insert("exp_o_sa".into(), m.exp_o_sa);
    measured.insert("expected_o_sa".into(), m.expected_o_sa);
    measured.insert("delta".into(), m.delta);
    measured.insert("ddelta".into(), m.ddelta);
    measured.insert("ddelta_central".into(), m.ddelta_central);
    measured.insert("state_error".into(), m.state_error);
    Ok(ClaimVerdict {
        id: id.into(),
        description: "entangled state with vanishing Δ and dΔ/dt".into(),
        passed: m.passed(),
        measured,
        notes: vec![format!("ω₁ = {omega1}, ω₂ = {omega2}, t* = {}", setup.t_star)],
    })
}

/// Pure qubit pair under the 4210 Hamiltonian, which recurs at 2π. The
/// Bloch vectors are generic enough that entanglement and Δ are both
/// nontrivial between recurrences.
pub fn recurrence_scenario() -> Result<Scenario> {
    Scenario::from_config(
        ScenarioConfig {
            hamiltonian: HamiltonianSpec::Builtin4210,
            rho_s: vec![0.6, 0.0, 0.8],
            ancilla: vec![0.0, 0.6, 0.8],
            observables: ObservableSpec::Pauli {
                o_s: MIXED_O_S,
                o_a: MIXED_O_A,
            },
            tgrid: TimeGrid {
                t_min: 0.0,
                t_max: 4.0 * PI + 1.0,
                steps: 1401,
            },
            seed: 0,
            tolerances: BTreeMap::new(),
        },
        std::path::Path::new("."),
    )
}

/// `Q Λ Q†` with Haar `Q` and integer levels in `0..=max_level`, so
/// `U(2π) = 1`.
pub fn integer_spectrum_hamiltonian(dim: usize, max_level: u32, seed: u64) -> Result<crate::dynamics::Hamiltonian> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1e7e);
    let levels: Vec<f64> = (0..dim).map(|_| f64::from(rng.gen_range(0..=max_level))).collect();
    let q = crate::state::random_unitary(dim, seed);
    let h = q.conjugate(&ComplexMatrix::diag_real(&levels));
    crate::dynamics::Hamiltonian::new((&h + &h.adjoint()).scale_re(0.5))
}

/// Qutrit pair with an integer-spectrum Hamiltonian, random pure product
/// start and random nondegenerate observables. Deterministic per seed.
pub fn qutrit_recurrence_scenario(seed: u64) -> Result<Scenario> {
    use crate::dynamics::MatrixFile;
    use crate::state::{coherence_from_density, random_ket};
    let h = integer_spectrum_hamiltonian(9, 4, seed)?;
    let ket_s = random_ket(3, 2 * seed + 101);
    let ket_a = random_ket(3, 2 * seed + 102);
    let coh =
        |k: &[C64]| -> Result<Vec<f64>> { Ok(coherence_from_density(&DensityMatrix::pure(k)?).components().to_vec()) };
    let observable = |s: u64| {
        let u = crate::state::random_unitary(3, s);
        let o = u.conjugate(&ComplexMatrix::diag_real(&[-1.0, 0.25, 1.0]));
        MatrixFile::from_matrix(&(&o + &o.adjoint()).scale_re(0.5))
    };
    let hf = MatrixFile::from_matrix(h.mat());
    Scenario::from_config(
        ScenarioConfig {
            hamiltonian: HamiltonianSpec::Inline {
                dim: hf.dim,
                entries_re: hf.entries_re,
                entries_im: hf.entries_im,
            },
            rho_s: coh(&ket_s)?,
            ancilla: coh(&ket_a)?,
            observables: ObservableSpec::Spectral {
                o_s: observable(3 * seed + 1),
                o_a: observable(3 * seed + 2),
            },
            tgrid: TimeGrid {
                t_min: 0.0,
                t_max: 2.0 * PI,
                steps: 201,
            },
            seed,
            tolerances: BTreeMap::new(),
        },
        std::path::Path::new("."),
    )
}

pub const QUTRIT_ENTROPY: f64 = 1e-10;
pub const QUTRIT_DELTA: f64 = 1e-7;
pub const QUTRIT_DDELTA: f64 = 1e-5;

/// At the recurrence `t = 2π` the qutrit pair is a product again and the
/// 8×8 determinant vanishes with its derivative.
pub fn qutrit_recurrence_claim(seed: u64) -> Result<ClaimVerdict> {
    let s = qutrit_recurrence_scenario(seed)?;
    let t = 2.0 * PI;
    let at = super::scan::evaluate_point(&s, t)?;
    let generic = super::scan::evaluate_point(&s, 1.0)?;
    let entropy = at.entropy.expect("pure start");
    let mut measured = BTreeMap::new();
    measured.insert("entropy".into(), entropy);
    measured.insert("delta".into(), at.delta);
    measured.insert("ddelta".into(), at.ddelta);
    measured.insert("delta_at_t1".into(), generic.delta);
    measured.insert("cond_at_t1".into(), generic.cond.unwrap_or(f64::INFINITY));
    measured.insert("entropy_at_t1".into(), generic.entropy.expect("pure start"));
    Ok(ClaimVerdict {
        id: format!("a.qutrit_{seed}"),
        description: "qutrit pair at the 2π recurrence: E = 0, Δ = dΔ/dt = 0".into(),
        passed: entropy < QUTRIT_ENTROPY && at.delta.abs() < QUTRIT_DELTA && at.ddelta.abs() < QUTRIT_DDELTA,
        measured,
        notes: Vec::new(),
    })
}

/// Everything checkable without input files.
pub fn builtin_claims() -> Result<ClaimsReport> {
    let fig1 = super::config::builtin_scenario("fig1")?;
    let step = fig1.tolerances.derivative_step;
    let psi = {
        let rho = evolve_with(&fig1.initial_total(), &propagator(&fig1.protocol.hamiltonian, 1.0));
        dominant_ket(&rho)?
    };
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    let bell = [h, z, z, h];
    Ok(ClaimsReport::new(vec![
        pure_state_theorem("a.fig1", &fig1)?,
        pure_state_theorem("a.recurrence_4210", &recurrence_scenario()?)?,
        mixed_counterexample("i1")?,
        mixed_counterexample("i2")?,
        inverse_implication_claim("c.fig1_t1", &psi, 1.0, 1.0, step)?,
        inverse_implication_claim("c.bell", &bell, 1.0, 0.5, step)?,
        qutrit_recurrence_claim(0)?,
    ]))
}

pub const BREAKDOWN_EOF: f64 = 1e-10;
pub const BREAKDOWN_DELTA: f64 = 1e-3;

/// A mixed trajectory loses the implication: some grid point is separable
/// (E_F below threshold) with Δ bounded away from zero.
pub fn mixed_breakdown(id: &str, scenario: &Scenario) -> Result<ClaimVerdict> {
    let records = super::scan::scan(scenario)?;
    let mut measured = BTreeMap::new();
    let mut witnesses = 0usize;
    let mut best_delta = 0.0f64;
    let mut eofs = Vec::with_capacity(records.len());
    for r in &records {
        let Some(ef) = r.eof else {
            return Err(Error::DimensionMismatch(
                "entanglement of formation needs two qubits".into(),
            ));
        };
        eofs.push(ef);
        if ef < BREAKDOWN_EOF {
            best_delta = best_delta.max(r.delta.abs());
            if r.delta.abs() > BREAKDOWN_DELTA {
                witnesses += 1;
            }
        }
    }
    // Deepest interior dip of E_F on the grid.
    let (argmin, min_dip) = (1..eofs.len().saturating_sub(1))
        .filter(|&i| eofs[i] <= eofs[i - 1] && eofs[i] <= eofs[i + 1])
        .map(|i| (records[i].t, eofs[i]))
        .fold((f64::NAN, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    measured.insert("witnesses".into(), witnesses as f64);
    measured.insert("max_abs_delta_where_separable".into(), best_delta);
    measured.insert("deepest_interior_eof_dip".into(), min_dip);
    measured.insert("t_deepest_interior_eof_dip".into(), argmin);
    Ok(ClaimVerdict {
        id: id.into(),
        description: format!("some grid point has E_F < {BREAKDOWN_EOF:e} and |Δ| > {BREAKDOWN_DELTA:e}"),
        passed: witnesses > 0,
        measured,
        notes: Vec::new(),
    })
}

/// Claims for a user scenario: the theorem when the start is pure, the
/// mixed-state breakdown search otherwise.
pub fn scenario_claims(scenario: &Scenario) -> Result<ClaimsReport> {
    let verdict = if super::scan::total_is_pure(scenario) {
        pure_state_theorem("a.scenario", scenario)?
    } else {
        mixed_breakdown("b.scenario", scenario)?
    };
    Ok(ClaimsReport::new(vec![verdict]))
}

/// Eigenvector of the largest eigenvalue of a pure state.
fn dominant_ket(rho: &DensityMatrix) -> Result<Vec<C64>> {
    let eig = crate::linalg::herm_eig(rho.mat())?;
    Ok(eig.vector(rho.dim() - 1))
}
