use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_with, propagator};
use crate::entanglement::{entropy_bits, reduced_spectrum};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, Keep, C64};
use crate::state::DensityMatrix;

use super::config::Scenario;
use super::scan::total_is_pure;

/// Located entanglement zeros of a pure trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroSet {
    Points {
        times: Vec<f64>,
    },
    /// Every grid point of `[start, end]` is a zero.
    Everywhere {
        start: f64,
        end: f64,
    },
}

impl ZeroSet {
    /// Points to check: the zeros, or both ends of an everywhere-zero interval.
    pub fn sample_times(&self) -> Vec<f64> {
        match self {
            ZeroSet::Points { times } => times.clone(),
            ZeroSet::Everywhere { start, end } => vec![*start, *end],
        }
    }
}

struct Trajectory<'a> {
    scenario: &'a Scenario,
    ket0: Vec<C64>,
}

impl<'a> Trajectory<'a> {
    fn new(scenario: &'a Scenario) -> Result<Self> {
        let top = |rho: &DensityMatrix| -> Result<Vec<C64>> {
            let eig = herm_eig(rho.mat())?;
            Ok(eig.vector(rho.dim() - 1))
        };
        let s = top(&scenario.rho_s)?;
        let a = top(&scenario.protocol.ancilla)?;
        let ket0 = s.iter().flat_map(|x| a.iter().map(move |y| x * y)).collect();
        Ok(Self { scenario, ket0 })
    }

    fn entropy(&self, t: f64) -> f64 {
        let s = self.scenario;
        let n = s.system_dim();
        let rho = evolve_with(&s.initial_total(), &propagator(&s.protocol.hamiltonian, t));
        entropy_bits(&reduced_spectrum(&rho, n, n, Keep::S).expect("dimensions fixed by the scenario"))
    }

    /// Norm of all 2×2 minors of the `N × N` reshape of `ψ(t)`. It vanishes
    /// exactly on product states and grows linearly away from them, so it
    /// locates zeros far more sharply than the entropy does.
    fn minors(&self, t: f64) -> f64 {
        let n = self.scenario.system_dim();
        let psi = propagator(&self.scenario.protocol.hamiltonian, t).u.mul_vec(&self.ket0);
        let m = |i: usize, j: usize| psi[i * n + j];
        let mut sum = 0.0;
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    for l in j + 1..n {
                        sum += (m(i, j) * m(k, l) - m(i, l) * m(k, j)).norm_sqr();
                    }
                }
            }
        }
        sum.sqrt()
    }
}

/// Grid scan of the reduced entropy, then golden-section refinement of
/// every local minimum. A zero lying between grid points can leave the grid
/// values well above the candidate threshold, so that threshold only
/// decides the everywhere-zero case; refined points are accepted below the
/// confirmation threshold.
pub fn find_entanglement_zeros(scenario: &Scenario, interval: Option<(f64, f64)>) -> Result<ZeroSet> {
    if !total_is_pure(scenario) {
        return Err(Error::NotPure {
            purity: scenario.initial_total().purity(),
        });
    }
    let grid = scenario.config.tgrid;
    let (a, b) = interval.unwrap_or((grid.t_min, grid.t_max));
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument(format!("interval [{a}, {b}]")));
    }
    let spacing = grid.spacing();
    let steps = (((b - a) / spacing).round() as usize).max(1) + 1;
    let times: Vec<f64> = (0..steps)
        .map(|i| {
            if i + 1 == steps {
                b
            } else {
                a + (b - a) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();

    let tol = scenario.tolerances;
    let traj = Trajectory::new(scenario)?;
    let entropy: Vec<f64> = {
        use rayon::prelude::*;
        times.par_iter().map(|&t| traj.entropy(t)).collect()
    };
    if entropy.iter().all(|&e| e < tol.zero_candidate) {
        return Ok(ZeroSet::Everywhere { start: a, end: b });
    }

    let mut zeros: Vec<f64> = Vec::new();
    for i in 0..steps {
        let e = entropy[i];
        let left = i == 0 || entropy[i - 1] >= e;
        let right = i + 1 == steps || entropy[i + 1] > e;
        if !(left && right) {
            continue;
        }
        let lo = times[i.saturating_sub(1)];
        let hi = times[(i + 1).min(steps - 1)];
        let refined = golden_minimum(|t| traj.minors(t), lo, hi, tol.zero_bracket);
        let (t_star, e_star) = {
            let er = traj.entropy(refined);
            if er <= e {
                (refined, er)
            } else {
                (times[i], e)
            }
        };
        if e_star < tol.zero_confirmed && zeros.last().is_none_or(|&z| (t_star - z).abs() > spacing) {
            zeros.push(t_star);
        }
    }
    Ok(ZeroSet::Points { times: zeros })
}

/// Minimizer of a unimodal `f` on `[lo, hi]` to bracket width `width`.
fn golden_minimum(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let (f_lo, f_hi) = (f(lo), f(hi));
    while hi - lo > width {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    // An endpoint minimum is never strictly inside the shrinking bracket.
    [(mid, f(mid)), (lo, f_lo.min(f(lo))), (hi, f_hi.min(f(hi)))]
        .into_iter()
        .fold(
            (mid, f64::INFINITY),
            |best, (t, v)| if v < best.1 { (t, v) } else { best },
        )
        .0
}
