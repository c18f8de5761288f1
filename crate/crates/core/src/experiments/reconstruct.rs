use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::state::CoherenceVector;
use crate::tomography::{reconstruct, ReconstructionResult};

use super::config::Scenario;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub t: f64,
    pub result: ReconstructionResult,
    pub truth: CoherenceVector,
    /// Euclidean distance between recovered and true coherence vectors.
    pub error: f64,
}

/// Simulates the measured values at `t` from the scenario's true state and
/// inverts them with a map built independently of that state.
pub fn reconstruct_at(scenario: &Scenario, t: f64) -> Result<ReconstructionReport> {
    let p = scenario.protocol.measurements(&scenario.rho_s, t)?;
    let map = scenario.protocol.map_at(t)?;
    let result = reconstruct(&map, &p)?;
    let error = result
        .rho0
        .components()
        .iter()
        .zip(scenario.truth.components())
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(ReconstructionReport {
        t,
        result,
        truth: scenario.truth.clone(),
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::experiments::config::builtin_scenario;

    #[test]
    fn fig1_round_trip() {
        let s = builtin_scenario("fig1").unwrap();
        let r = reconstruct_at(&s, 3.0).unwrap();
        assert!(r.result.condition < 1e4);
        assert!(r.error < 1e-8, "{r:?}");
    }

    #[test]
    fn start_is_singular() {
        let s = builtin_scenario("fig1").unwrap();
        assert!(matches!(reconstruct_at(&s, 0.0), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn maximally_mixed_truth() {
        let s = builtin_scenario("fig1")
            .unwrap()
            .with_truth(CoherenceVector::zero(2))
            .unwrap();
        let r = reconstruct_at(&s, 3.0).unwrap();
        assert!(r.result.rho0.length() < 1e-9);
    }
}
