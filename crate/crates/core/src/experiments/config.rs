use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    figure_phi, hamiltonian_interaction, hamiltonian_spectrum_4210, Hamiltonian, MatrixFile, Observable,
};
use crate::error::{Error, Result};
use crate::state::{ancilla_state, density_from_coherence, CoherenceVector, DensityMatrix};
use crate::tol;
use crate::tomography::{ndim_probability_components, ObservablePair, Protocol};

const FIG1_JSON: &str = include_str!("../../scenarios/fig1.json");
const FIG2_JSON: &str = include_str!("../../scenarios/fig2.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianSpec {
    #[serde(rename = "builtin_4210")]
    Builtin4210,
    /// The `ŝ·Ŝ`-type interaction; give either `phi` or `cos_2phi`.
    BuiltinInteraction {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cos_2phi: Option<f64>,
    },
    /// Matrix file, path relative to the scenario file.
    File {
        path: String,
    },
    Inline {
        dim: usize,
        entries_re: Vec<f64>,
        entries_im: Vec<f64>,
    },
    Zero {
        dim: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    /// Coefficients `(O⁰, O¹, O², O³)` on `(1, σx, σy, σz)`.
    Pauli {
        #[serde(rename = "oS")]
        o_s: [f64; 4],
        #[serde(rename = "oA")]
        o_a: [f64; 4],
    },
    /// Nondegenerate Hermitian matrices for `N > 2`.
    Spectral {
        #[serde(rename = "oS")]
        o_s: MatrixFile,
        #[serde(rename = "oA")]
        o_a: MatrixFile,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn spacing(&self) -> f64 {
        (self.t_max - self.t_min) / (self.steps - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.t_max
                } else {
                    self.t_min + i as f64 * self.spacing()
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub hamiltonian: HamiltonianSpec,
    #[serde(rename = "rhoS")]
    pub rho_s: Vec<f64>,
    pub ancilla: Vec<f64>,
    pub observables: ObservableSpec,
    pub tgrid: TimeGrid,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

/// Numerical thresholds used by the harness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero_candidate: f64,
    pub zero_confirmed: f64,
    pub zero_bracket: f64,
    pub derivative_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_candidate: tol::ZERO_CANDIDATE,
            zero_confirmed: tol::ZERO_CONFIRMED,
            zero_bracket: tol::ZERO_BRACKET,
            derivative_step: tol::DERIVATIVE_STEP,
        }
    }
}

impl Tolerances {
    pub fn with_overrides(overrides: &BTreeMap<String, f64>) -> Result<Self> {
        let mut t = Self::default();
        for (key, &value) in overrides {
            let slot = match key.as_str() {
                "zero_candidate" => &mut t.zero_candidate,
                "zero_confirmed" => &mut t.zero_confirmed,
                "zero_bracket" => &mut t.zero_bracket,
                "derivative_step" => &mut t.derivative_step,
                other => return Err(Error::Validation(format!("tolerances: unknown key `{other}`"))),
            };
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Validation(format!(
                    "tolerances.{key} must be positive, got {value}"
                )));
            }
            *slot = value;
        }
        let (lo, hi) = tol::DERIVATIVE_STEP_RANGE;
        if !(lo..=hi).contains(&t.derivative_step) {
            return Err(Error::Validation(format!(
                "tolerances.derivative_step {} outside [{lo:e}, {hi:e}]",
                t.derivative_step
            )));
        }
        if t.zero_confirmed > t.zero_candidate {
            return Err(Error::Validation(
                "tolerances.zero_confirmed must not exceed zero_candidate".into(),
            ));
        }
        Ok(t)
    }
}

/// A validated scenario with its runtime objects resolved.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub protocol: Protocol,
    pub rho_s: DensityMatrix,
    pub truth: CoherenceVector,
    pub tolerances: Tolerances,
}

impl Scenario {
    pub fn from_config(config: ScenarioConfig, base_dir: &Path) -> Result<Self> {
        let tg = config.tgrid;
        if tg.steps < 2 {
            return Err(Error::Validation(format!("tgrid.steps must be >= 2, got {}", tg.steps)));
        }
        if !(tg.t_min.is_finite() && tg.t_max.is_finite() && tg.t_min < tg.t_max) {
            return Err(Error::Validation(format!(
                "tgrid needs finite t_min < t_max, got [{}, {}]",
                tg.t_min, tg.t_max
            )));
        }
        let tolerances = Tolerances::with_overrides(&config.tolerances)?;
        let hamiltonian = resolve_hamiltonian(&config.hamiltonian, base_dir)?;

        let truth = CoherenceVector::from_components(config.rho_s.clone())
            .map_err(|e| Error::Validation(format!("rhoS: {e}")))?;
        let rho_s = density_from_coherence(&truth).map_err(|e| Error::Validation(format!("rhoS: {e}")))?;
        let n = truth.dim();

        let ancilla = match config.ancilla.as_slice() {
            &[a, b, c] if n == 2 => ancilla_state([a, b, c]),
            comps => CoherenceVector::from_components(comps.to_vec()).and_then(|v| {
                if v.dim() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "ancilla of dim {} with system of dim {n}",
                        v.dim()
                    )));
                }
                density_from_coherence(&v)
            }),
        }
        .map_err(|e| Error::Validation(format!("ancilla: {e}")))?;

        let components = match &config.observables {
            ObservableSpec::Pauli { o_s, o_a } => {
                if n != 2 {
                    return Err(Error::Validation(format!(
                        "observables: pauli coefficients need a qubit system, got dim {n}"
                    )));
                }
                crate::tomography::qubit_observable_rows(&ObservablePair::from_pauli(*o_s, *o_a))
            }
            ObservableSpec::Spectral { o_s, o_a } => {
                let load = |m: &MatrixFile, side: &str| {
                    m.to_matrix()
                        .and_then(Observable::new)
                        .map_err(|e| Error::Validation(format!("observables.{side}: {e}")))
                };
                let (o_s, o_a) = (load(o_s, "oS")?, load(o_a, "oA")?);
                if o_s.dim() != n || o_a.dim() != n {
                    return Err(Error::Validation(format!(
                        "observables: dims {} and {} for a system of dim {n}",
                        o_s.dim(),
                        o_a.dim()
                    )));
                }
                ndim_probability_components(&o_s, &o_a).map_err(|e| Error::Validation(format!("observables: {e}")))?
            }
        };

        let protocol =
            Protocol::new(hamiltonian, ancilla, components).map_err(|e| Error::Validation(format!("scenario: {e}")))?;
        Ok(Self {
            config,
            protocol,
            rho_s,
            truth,
            tolerances,
        })
    }

    pub fn from_json(text: &str, source_name: &str, base_dir: &Path) -> Result<Self> {
        let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
            source_name: source_name.to_string(),
            message: format!("line {} column {}: {e}", e.line(), e.column()),
        })?;
        Self::from_config(config, base_dir)
    }

    pub fn system_dim(&self) -> usize {
        self.protocol.system_dim()
    }

    /// `ρ_S ⊗ ρ_A`.
    pub fn initial_total(&self) -> DensityMatrix {
        crate::state::product_state(&self.rho_s, &self.protocol.ancilla)
    }

    /// Same scenario with another true system state.
    pub fn with_truth(&self, r: CoherenceVector) -> Result<Self> {
        let mut config = self.config.clone();
        config.rho_s = r.components().to_vec();
        let rho_s = density_from_coherence(&r)?;
        Ok(Self {
            config,
            protocol: self.protocol.clone(),
            rho_s,
            truth: r,
            tolerances: self.tolerances,
        })
    }
}

fn resolve_hamiltonian(spec: &HamiltonianSpec, base_dir: &Path) -> Result<Hamiltonian> {
    let wrap = |e: Error| match e {
        Error::Parse { .. } | Error::Io(_) => e,
        other => Error::Validation(format!("hamiltonian: {other}")),
    };
    match spec {
        HamiltonianSpec::Builtin4210 => Ok(hamiltonian_spectrum_4210()),
        HamiltonianSpec::BuiltinInteraction { phi, cos_2phi } => {
            let phi = match (phi, cos_2phi) {
                (Some(_), Some(_)) => {
                    return Err(Error::Validation("hamiltonian: give phi or cos_2phi, not both".into()))
                }
                (Some(p), None) => *p,
                (None, Some(c)) if (-1.0..=1.0).contains(c) => 0.5 * c.acos(),
                (None, Some(c)) => {
                    return Err(Error::Validation(format!(
                        "hamiltonian: cos_2phi = {c} outside [-1, 1]"
                    )))
                }
                (None, None) => figure_phi(),
            };
            if !phi.is_finite() {
                return Err(Error::Validation("hamiltonian: phi must be finite".into()));
            }
            Ok(hamiltonian_interaction(phi))
        }
        HamiltonianSpec::File { path } => {
            let p = PathBuf::from(path);
            let full = if p.is_absolute() { p } else { base_dir.join(p) };
            Hamiltonian::from_file(&full).map_err(wrap)
        }
        HamiltonianSpec::Inline {
            dim,
            entries_re,
            entries_im,
        } => MatrixFile {
            dim: *dim,
            entries_re: entries_re.clone(),
            entries_im: entries_im.clone(),
        }
        .to_matrix()
        .and_then(Hamiltonian::new)
        .map_err(wrap),
        HamiltonianSpec::Zero { dim } => {
            if *dim == 0 {
                return Err(Error::Validation("hamiltonian: zero of dim 0".into()));
            }
            Ok(Hamiltonian::zero(*dim))
        }
    }
}

/// Reads, parses and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Scenario::from_json(&text, &path.display().to_string(), base)
}

/// Bundled scenarios: `fig1` (λ = 1) and `fig2` (λ = 0.5).
pub fn builtin_scenario(name: &str) -> Result<Scenario> {
    let text = match name {
        "fig1" => FIG1_JSON,
        "fig2" => FIG2_JSON,
        other => return Err(Error::InvalidArgument(format!("no builtin scenario `{other}`"))),
    };
    Scenario::from_json(text, name, Path::new("."))
}
