use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_with, propagator};
use crate::entanglement::{entropy_pure, eof};
use crate::error::Result;
use crate::linalg::cond2;
use crate::tol;
use crate::tomography::determinant;

use super::config::Scenario;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub t: f64,
    /// Reduced-state entropy in bits, when the total state is pure.
    pub entropy: Option<f64>,
    /// Entanglement of formation, for two qubits.
    pub eof: Option<f64>,
    pub delta: f64,
    /// dΔ/dt from the cofactor expansion.
    pub ddelta: f64,
    /// `cond₂(Ω)`, absent when Ω is numerically singular.
    pub cond: Option<f64>,
}

/// Whether the initial `ρ_S ⊗ ρ_A` is pure. Purity is conserved, so this
/// decides for the whole trajectory.
pub fn total_is_pure(scenario: &Scenario) -> bool {
    (scenario.initial_total().purity() - 1.0).abs() < tol::PURITY
}

pub fn evaluate_point(scenario: &Scenario, t: f64) -> Result<ScanRecord> {
    let n = scenario.system_dim();
    let pure = total_is_pure(scenario);
    let rho = evolve_with(
        &scenario.initial_total(),
        &propagator(&scenario.protocol.hamiltonian, t),
    );
    let entropy = if pure { Some(entropy_pure(&rho, n, n)?) } else { None };
    let eof = if n == 2 { Some(eof(&rho)?) } else { None };
    let map = scenario.protocol.map_at(t)?;
    let delta = determinant(&map);
    let ddelta = scenario
        .protocol
        .ddet_dt(&map, scenario.tolerances.derivative_step)?
        .jacobi;
    let c = cond2(&map.omega)?;
    Ok(ScanRecord {
        t,
        entropy,
        eof,
        delta,
        ddelta,
        cond: c.is_finite().then_some(c),
    })
}

/// One record per grid point, in grid order.
pub fn scan(scenario: &Scenario) -> Result<Vec<ScanRecord>> {
    scan_points(scenario, &scenario.config.tgrid.points())
}

pub fn scan_points(scenario: &Scenario, times: &[f64]) -> Result<Vec<ScanRecord>> {
    times.par_iter().map(|&t| evaluate_point(scenario, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::builtin_scenario;

    #[test]
    fn fig1_start_is_product_and_singular() {
        let s = builtin_scenario("fig1").unwrap();
        let r = evaluate_point(&s, 0.0).unwrap();
        assert!(r.entropy.unwrap().abs() < 1e-12);
        assert!(r.delta.abs() < 1e-14);
        assert!(r.eof.unwrap().abs() < 1e-12);
    }

    #[test]
    fn fig2_total_state_is_mixed() {
        let s = builtin_scenario("fig2").unwrap();
        assert!(!total_is_pure(&s));
        let r = evaluate_point(&s, 1.0).unwrap();
        assert!(r.entropy.is_none());
        assert!(r.eof.is_some());
    }

    #[test]
    fn ordered_and_deterministic() {
        let s = builtin_scenario("fig1").unwrap();
        let times: Vec<f64> = (0..40).map(|i| i as f64 * 0.25).collect();
        let a = scan_points(&s, &times).unwrap();
        let b = scan_points(&s, &times).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().zip(&times).all(|(r, t)| r.t == *t));
    }
}
