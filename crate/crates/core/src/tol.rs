//! Numerical tolerances shared by every module.

/// Max-norm deviation `‖a − a†‖` accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-12;
/// Allowed deviation of the trace of a density matrix from one.
pub const TRACE: f64 = 1e-12;
/// Floor below which a negative eigenvalue makes a state unphysical.
pub const PSD_FLOOR: f64 = -1e-10;
/// Eigenvalues below this contribute nothing to an entropy (0·log 0 = 0).
pub const ENTROPY_EIGEN_FLOOR: f64 = 1e-14;
/// Purity deviation accepted as a pure total state.
pub const PURITY: f64 = 1e-8;
/// Singular values below `SVD_TRUNCATION · s_max` are set to zero.
pub const SVD_TRUNCATION: f64 = 1e-13;
/// Smallest singular value treated as exactly zero by `cond2`.
pub const COND_ZERO: f64 = 1e-300;
/// Minimum spacing between eigenvalues of a measured observable.
pub const SPECTRAL_GAP: f64 = 1e-8;
/// Smallest Schmidt coefficient for a state to count as entangled.
pub const SCHMIDT_ENTANGLED: f64 = 1e-10;
/// Ket normalization tolerance.
pub const KET_NORM: f64 = 1e-10;
/// Smallest probe amplitude tried when building a tomography map.
pub const MIN_PROBE: f64 = 1e-3;
/// `|Δ| < SINGULAR_DET · ‖Ω‖_F` declares the map non-invertible.
pub const SINGULAR_DET: f64 = 1e-12;
/// Default time step for central differences of Ω(t).
pub const DERIVATIVE_STEP: f64 = 1e-5;
/// Admissible range for that step.
pub const DERIVATIVE_STEP_RANGE: (f64, f64) = (1e-7, 1e-2);
/// Entropy threshold for a grid minimum to be refined.
pub const ZERO_CANDIDATE: f64 = 1e-6;
/// Entropy threshold for a refined minimum to be reported as a zero.
pub const ZERO_CONFIRMED: f64 = 1e-10;
/// Width of the bracket at which refinement of a minimum stops.
pub const ZERO_BRACKET: f64 = 1e-9;
