use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Result};

const LOG_SPACE_ABOVE: usize = 150;
const MAX_RECURSION_STEPS: usize = 10_000_000;

/// Mean of `|z₁|` for `z` uniform on the unit sphere of `R^dim`:
/// `(dim−2)!!/(dim−1)!!`, times `2/π` when `dim` is even.
pub fn c_coefficient(dim: usize) -> Result<f64> {
    if dim == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let ratio = if dim <= LOG_SPACE_ABOVE {
        double_factorial(dim as i64 - 2) / double_factorial(dim as i64 - 1)
    } else {
        (log_double_factorial(dim as i64 - 2) - log_double_factorial(dim as i64 - 1)).exp()
    };
    Ok(if dim.is_multiple_of(2) { ratio * 2.0 / PI } else { ratio })
}

fn double_factorial(k: i64) -> f64 {
    let mut acc = 1.0;
    let mut i = k;
    while i > 1 {
        acc *= i as f64;
        i -= 2;
    }
    acc
}

fn log_double_factorial(k: i64) -> f64 {
    let mut acc = 0.0;
    let mut i = k;
    while i > 1 {
        acc += (i as f64).ln();
        i -= 2;
    }
    acc
}

/// Population-level quantities of `M` uniform outliers in `R^D` and `N`
/// uniform inliers on a `d`-dimensional subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousModel {
    pub m: usize,
    pub n: usize,
    pub dim: usize,
    pub d: usize,
    pub c_dim: f64,
    pub c_d: f64,
    /// `N c_d / (M c_D)`.
    pub alpha: f64,
}

impl ContinuousModel {
    pub fn new(m: usize, n: usize, dim: usize, d: usize) -> Result<Self> {
        if d == 0 || d >= dim {
            return Err(invalid(format!("need 1 <= d < D, got d={d}, D={dim}")));
        }
        if m == 0 || n == 0 {
            return Err(invalid("need at least one inlier and one outlier"));
        }
        let c_dim = c_coefficient(dim)?;
        let c_d = c_coefficient(d)?;
        let alpha = n as f64 * c_d / (m as f64 * c_dim);
        Ok(Self { m, n, dim, d, c_dim, c_d, alpha })
    }

    /// `M/N`.
    pub fn gamma(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

/// `‖b‖ (M c_D + N c_d cos φ)` with `φ` the angle between `b` and the subspace.
pub fn continuous_objective(norm_b: f64, phi: f64, m: &ContinuousModel) -> Result<f64> {
    if !(norm_b >= 0.0) {
        return Err(invalid(format!("norm must be nonnegative, got {norm_b}")));
    }
    if !(0.0..=FRAC_PI_2).contains(&phi) {
        return Err(invalid(format!("angle must lie in [0, π/2], got {phi}")));
    }
    Ok(norm_b * (m.m as f64 * m.c_dim + m.n as f64 * m.c_d * phi.cos()))
}

#[derive(Debug, Clone)]
pub struct ContinuousRecursion {
    /// `φ_0, …, φ_{k*}` in radians; the last entry is `π/2`.
    pub angles: Vec<f64>,
    pub k_star: usize,
}

fn check_recursion_args(alpha: f64, phi0: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    if !(phi0 > 0.0 && phi0 <= FRAC_PI_2) {
        return Err(invalid(format!("initial angle must lie in (0, π/2], got {phi0}")));
    }
    Ok(())
}

/// Angle sequence of the LP recursion on the continuous objective:
/// `φ_{k+1} = φ_k + asin(α sin φ_k)` while `tan φ_k < 1/α`, then `π/2`.
pub fn simulate_continuous_recursion(alpha: f64, phi0: f64) -> Result<ContinuousRecursion> {
    check_recursion_args(alpha, phi0)?;
    let mut angles = vec![phi0];
    let mut phi = phi0;
    while phi < FRAC_PI_2 {
        if angles.len() > MAX_RECURSION_STEPS {
            return Err(invalid("continuous recursion exceeded its step cap"));
        }
        phi = if alpha * phi.tan() >= 1.0 { FRAC_PI_2 } else { phi + (alpha * phi.sin()).asin() };
        angles.push(phi);
    }
    let k_star = angles.len() - 1;
    Ok(ContinuousRecursion { angles, k_star })
}

/// Upper bound on the number of continuous recursion steps needed to reach
/// `π/2`.
pub fn kstar_bound(alpha: f64, phi0: f64) -> Result<usize> {
    check_recursion_args(alpha, phi0)?;
    if phi0 >= FRAC_PI_2 {
        return Ok(0);
    }
    if alpha * phi0.tan() >= 1.0 {
        return Ok(1);
    }
    let steps = ((1.0 / alpha).atan() - phi0) / (alpha * phi0.sin()).asin();
    Ok(steps.ceil() as usize + 1)
}
