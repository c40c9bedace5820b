//! Standard-form linear programming and the LP form of one recursion step.

mod dpcp_step;
mod simplex;

pub use dpcp_step::{dpcp_lp_step, LpStep};
pub use simplex::{solve_standard_form, solve_with, LpProblem, LpSolution, LpStatus, SimplexOptions};
