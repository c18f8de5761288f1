//! Ancilla-assisted determination of an unknown quantum state with a single
//! measurement apparatus.
//!
//! A system `S` prepared in an unknown state is coupled to an ancilla `A` in
//! a known state. After evolving for a time `t`, commuting observables on
//! `S + A` are measured. Their expectation values depend affinely on the
//! initial coherence vector of `S`, `p(t) = Ω(t)·r + k(t)`, and the initial
//! state can be recovered whenever `Δ(t) = det Ω(t) ≠ 0`.
//!
//! The crate builds that map, tracks Δ and dΔ/dt over time, and relates
//! them to the entanglement generated between `S` and `A`.

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod state;
pub mod tol;
pub mod tomography;

#[cfg(test)]
mod test_util;

pub use error::{Error, Result};
