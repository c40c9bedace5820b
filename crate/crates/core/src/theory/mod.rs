//! Population-level analysis: the continuous objective and its recursion,
//! uniformity estimators, and the recovery conditions built from them.

mod check;
mod conditions;
mod continuous;
mod estimators;

pub use check::{run_theory_check, TheoryCheckConfig, TheoryRecord};
pub use conditions::{brute_force_maximal_hyperplane, recovery_conditions, required_splits, RecoveryConditions};
pub use continuous::{
    c_coefficient, continuous_objective, kstar_bound, simulate_continuous_recursion, ContinuousModel,
    ContinuousRecursion,
};
pub use estimators::{average_error_over, estimate_average_error, estimate_circumradius, probe_directions};
