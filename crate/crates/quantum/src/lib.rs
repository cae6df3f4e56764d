//! Three-qubit correlation tensors, Bell values, see-saw violation search and
//! sufficient state conditions for the three-setting inequalities.

pub mod bell;
pub mod conditions;
pub mod correlation;
pub mod error;
pub mod grid;
pub mod seesaw;
pub mod settings;
pub mod state;
pub mod tol;

pub use bell::{bell_value, mabk_settings};
pub use conditions::{
    condition_ineq3, condition_ineq3_at, condition_ineq3_max, condition_three_setting,
    condition_max, condition_three_setting_max, fivevector_lhs, fivevector_settings, frame_grid_search, ineq3_lhs,
    ineq3_settings, Condition, FrameOptimum,
};
pub use correlation::CorrelationTensor;
pub use error::{QuantumError, Result};
pub use grid::{grid_oracle, GridResult};
pub use seesaw::{seesaw_maximize, seesaw_run, seesaw_with, SeesawOptions, SeesawResult, SeesawRun};
pub use settings::{settings_from_angle, LocalFrames, MeasurementSettings};
pub use state::{correlation_tensor, ThreeQubitState, C64};
