//! Numerical tolerances used across the crate.

/// Unit norm of a pure state and of Bloch vectors.
pub const NORM: f64 = 1e-12;
/// Hermiticity of a density matrix, entrywise.
pub const HERMITIAN: f64 = 1e-12;
/// Unit trace of a density matrix.
pub const TRACE: f64 = 1e-10;
/// Smallest eigenvalue allowed for a density matrix.
pub const PSD: f64 = -1e-10;
/// Imaginary part tolerated in a Pauli expectation.
pub const IMAG: f64 = 1e-10;
/// Orthonormality of local frames.
pub const FRAME: f64 = 1e-12;
/// Slack on `|T_ijk| <= 1`.
pub const TENSOR_BOUND: f64 = 1e-9;
/// Equality checks between two evaluations of the same quantity.
pub const EQUALITY: f64 = 1e-9;
/// See-saw stopping threshold on the per-sweep gain.
pub const SEESAW_CONVERGENCE: f64 = 1e-10;
/// See-saw sweep cap.
pub const SEESAW_MAX_SWEEPS: usize = 500;
/// Default number of see-saw restarts.
pub const SEESAW_RESTARTS: usize = 32;
/// Simplex spread for the frame optimizer.
pub const FRAME_OPT_SD: f64 = 1e-13;
/// Margin used by acceptance-level comparisons.
pub const MARGIN: f64 = 1e-6;
