//! wasm-bindgen entry points for the browser demo. Every export takes plain
//! numbers and returns a JSON string; failures come back as `{"failure": ...}`.

use std::collections::BTreeMap;
use std::path::Path;

use ancilla_tomography::experiments::claims::mixed_counterexample;
use ancilla_tomography::experiments::config::{HamiltonianSpec, ObservableSpec};
use ancilla_tomography::experiments::{reconstruct_at, scan, Scenario, ScenarioConfig, TimeGrid};
use ancilla_tomography::Result;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_STEPS: usize = 4001;

fn interaction_scenario(cos_2phi: f64, rho: [f64; 3], lambda: [f64; 3], t_max: f64, steps: usize) -> Result<Scenario> {
    Scenario::from_config(
        ScenarioConfig {
            hamiltonian: HamiltonianSpec::BuiltinInteraction {
                phi: None,
                cos_2phi: Some(cos_2phi),
            },
            rho_s: rho.to_vec(),
            ancilla: lambda.to_vec(),
            observables: ObservableSpec::Pauli {
                o_s: [0.0, 0.0, 0.0, 1.0],
                o_a: [0.0, 0.0, 0.0, 1.0],
            },
            tgrid: TimeGrid {
                t_min: 0.0,
                t_max,
                steps: steps.clamp(2, MAX_STEPS),
            },
            seed: 0,
            tolerances: BTreeMap::new(),
        },
        Path::new("."),
    )
}

fn to_json(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "failure": e.to_string() }).to_string(),
    }
}

/// Curves `t`, `entanglement` (entropy for pure starts, else EoF) and
/// `abs_delta` for the interaction Hamiltonian with `σz`, `σz` measured.
pub fn curves(cos_2phi: f64, rho: [f64; 3], lambda: [f64; 3], t_max: f64, steps: usize) -> Result<Value> {
    let s = interaction_scenario(cos_2phi, rho, lambda, t_max, steps)?;
    let records = scan(&s)?;
    let ent: Vec<f64> = records
        .iter()
        .map(|r| r.entropy.or(r.eof).unwrap_or(f64::NAN))
        .collect();
    Ok(json!({
        "t": records.iter().map(|r| r.t).collect::<Vec<_>>(),
        "entanglement": ent,
        "measure": if records[0].entropy.is_some() { "entropy" } else { "eof" },
        "abs_delta": records.iter().map(|r| r.delta.abs()).collect::<Vec<_>>(),
    }))
}

pub fn counterexample(set: &str) -> Result<Value> {
    Ok(serde_json::to_value(mixed_counterexample(set)?).expect("serializable"))
}

pub fn recover(cos_2phi: f64, rho: [f64; 3], lambda: [f64; 3], t: f64) -> Result<Value> {
    let s = interaction_scenario(cos_2phi, rho, lambda, t.abs().max(1.0), 2)?;
    Ok(serde_json::to_value(reconstruct_at(&s, t)?).expect("serializable"))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn scan_curves(
    cos_2phi: f64,
    r1: f64,
    r2: f64,
    r3: f64,
    l1: f64,
    l2: f64,
    l3: f64,
    t_max: f64,
    steps: u32,
) -> String {
    to_json(curves(cos_2phi, [r1, r2, r3], [l1, l2, l3], t_max, steps as usize))
}

#[wasm_bindgen]
pub fn pi_half_counterexample(set: &str) -> String {
    to_json(counterexample(set))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn reconstruct(cos_2phi: f64, r1: f64, r2: f64, r3: f64, l1: f64, l2: f64, l3: f64, t: f64) -> String {
    to_json(recover(cos_2phi, [r1, r2, r3], [l1, l2, l3], t))
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: f64 = 0.5773502691896258;

    #[test]
    fn curves_have_grid_length() {
        let v: Value = serde_json::from_str(&scan_curves(C, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 5.0, 51)).unwrap();
        assert_eq!(v["t"].as_array().unwrap().len(), 51);
        assert_eq!(v["measure"], "entropy");
        assert_eq!(v["abs_delta"][0].as_f64(), Some(0.0));
        let v: Value = serde_json::from_str(&scan_curves(C, 0.0, 0.0, 1.0, 0.0, 0.0, 0.5, 5.0, 11)).unwrap();
        assert_eq!(v["measure"], "eof");
    }

    #[test]
    fn counterexample_magnitude() {
        let v: Value = serde_json::from_str(&pi_half_counterexample("i2")).unwrap();
        assert_eq!(v["passed"], true);
        let d = v["measured"]["delta"].as_f64().unwrap();
        assert!((d.abs() - 9.0 / 512.0).abs() < 1e-9);
    }

    #[test]
    fn reconstruction_and_errors() {
        let v: Value = serde_json::from_str(&reconstruct(C, 0.3, -0.2, 0.5, 0.0, 0.0, 1.0, 3.0)).unwrap();
        assert!(v["error"].as_f64().unwrap() < 1e-8);
        let v: Value = serde_json::from_str(&reconstruct(C, 0.3, -0.2, 0.5, 0.0, 0.0, 1.0, 0.0)).unwrap();
        assert!(v["failure"].as_str().unwrap().contains("singular"));
        let v: Value = serde_json::from_str(&scan_curves(C, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 5.0, 11)).unwrap();
        assert!(v["failure"].is_string());
        let v: Value = serde_json::from_str(&pi_half_counterexample("i3")).unwrap();
        assert!(v["failure"].is_string());
    }
}
