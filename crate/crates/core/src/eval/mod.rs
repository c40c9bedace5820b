//! Scoring of estimated subspaces and the synthetic experiment grid.

mod grid;
mod signal;

pub use grid::{
    min_angle_deg, outlier_count, run_grid, run_method, GridConfig, GridRecord, Method, MethodOutcome, RansacBudget,
};
pub use signal::{distance_signal, perfect_separation, roc, RocResult, Signal};
