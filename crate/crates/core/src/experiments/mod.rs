//! Scenario files, time scans, zero location, claim checks and output.

pub mod claims;
pub mod config;
pub mod emit;
pub mod reconstruct;
pub mod scan;
pub mod zeros;

pub use claims::{builtin_claims, scenario_claims, ClaimVerdict, ClaimsReport};
pub use config::{builtin_scenario, load_scenario, Scenario, ScenarioConfig, TimeGrid, Tolerances};
pub use emit::{emit, Format};
pub use reconstruct::{reconstruct_at, ReconstructionReport};
pub use scan::{scan, ScanRecord};
pub use zeros::{find_entanglement_zeros, ZeroSet};
