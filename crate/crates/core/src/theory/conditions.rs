use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use super::continuous::ContinuousModel;
use crate::error::{invalid, Error, Result};
use crate::numerics::{canonical_sign, smallest_right_singular_vectors, Matrix, UnitVector};

#[derive(Debug, Clone)]
pub struct RecoveryConditions {
    /// `M/N`.
    pub gamma: f64,
    pub eps_o: f64,
    pub eps_x: f64,
    pub circum_o: BTreeMap<usize, f64>,
    pub circum_x: BTreeMap<usize, f64>,
    /// Smallest right-hand side over all splits; the condition is `γ < bound`.
    pub gamma_bound: f64,
    pub condition_holds: bool,
    /// Radians, in `[0, π/2]`.
    pub phi0_star: f64,
}

/// Splits `(K1, K2)` with `K1 + K2 = D − 1`, `K1 ≥ 1` and `0 ≤ K2 ≤ d − 1`.
pub fn required_splits(dim: usize, d: usize) -> Vec<(usize, usize)> {
    let lo = (dim - d).max(1);
    (lo..dim).map(|k1| (k1, dim - 1 - k1)).collect()
}

/// `num / den` with the sign of `num` carried to ±∞ when `den = 0`.
fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

/// Checks `γ < min over splits of min{(c_d − ε_X)/(2ε_O), (c_d − ε_X −
/// (R_{O,K1} + R_{X,K2})/N)/ε_O}` and computes
/// `φ0* = acos((c_d − ε_X − 2γε_O)/(c_d + ε_X))`, clamped to `[0, π/2]`.
/// `circum_x` may omit `K = 0`, which is taken as zero.
pub fn recovery_conditions(
    m: &ContinuousModel,
    eps_o: f64,
    eps_x: f64,
    circum_o: &BTreeMap<usize, f64>,
    circum_x: &BTreeMap<usize, f64>,
) -> Result<RecoveryConditions> {
    if !(eps_o >= 0.0 && eps_x >= 0.0) {
        return Err(invalid("uniformity errors must be nonnegative"));
    }
    let gamma = m.gamma();
    let c_d = m.c_d;
    let n = m.n as f64;
    let mut bound = ratio(c_d - eps_x, 2.0 * eps_o);
    for (k1, k2) in required_splits(m.dim, m.d) {
        let r_o = *circum_o.get(&k1).ok_or_else(|| invalid(format!("missing outlier circumradius for K={k1}")))?;
        let r_x = if k2 == 0 {
            circum_x.get(&0).copied().unwrap_or(0.0)
        } else {
            *circum_x.get(&k2).ok_or_else(|| invalid(format!("missing inlier circumradius for K={k2}")))?
        };
        bound = bound.min(ratio(c_d - eps_x - (r_o + r_x) / n, eps_o));
    }
    let condition_holds = gamma < bound;
    let arg = (c_d - eps_x - 2.0 * gamma * eps_o) / (c_d + eps_x);
    if condition_holds && !(-1.0..=1.0).contains(&arg) {
        return Err(Error::Inconsistent(format!("initial-angle argument {arg} outside [-1, 1]")));
    }
    let phi0_star = arg.clamp(-1.0, 1.0).acos().clamp(0.0, FRAC_PI_2);
    Ok(RecoveryConditions {
        gamma,
        eps_o,
        eps_x,
        circum_o: circum_o.clone(),
        circum_x: circum_x.clone(),
        gamma_bound: bound,
        condition_holds,
        phi0_star,
    })
}

/// Hyperplane through the origin containing the most columns of `data`, found
/// by trying the span of every `(D−1)`-subset of full rank. Columns with
/// `|xᵀb| ≤ tol` count as contained; ties keep the first subset in
/// lexicographic order.
pub fn brute_force_maximal_hyperplane(data: &Matrix, tol: f64) -> Result<(UnitVector, usize)> {
    let (dim, l) = data.shape();
    if dim < 2 {
        return Err(invalid("need D >= 2"));
    }
    let k = dim - 1;
    if l < k {
        return Err(invalid(format!("need at least D-1={k} columns, got {l}")));
    }
    let mut best: Option<(UnitVector, usize)> = None;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let cols: Vec<_> = subset.iter().map(|&j| data.column(j).into_owned()).collect();
        let sub = Matrix::from_columns(&cols);
        if sub.rank(1e-10) == k {
            let mut b = smallest_right_singular_vectors(&sub.transpose(), 1)?.column(0).into_owned();
            canonical_sign(&mut b);
            let count = data.tr_mul(&b).iter().filter(|v| v.abs() <= tol).count();
            if best.as_ref().is_none_or(|(_, c)| count > *c) {
                best = Some((UnitVector::normalize(b)?, count));
            }
        }
        let mut i = k;
        loop {
            if i == 0 {
                return best.ok_or_else(|| Error::DegenerateData("every (D-1)-subset is rank deficient".into()));
            }
            i -= 1;
            if subset[i] < l - k + i {
                subset[i] += 1;
                for t in i + 1..k {
                    subset[t] = subset[t - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Vector;

    fn model(dim: usize, d: usize, n: usize, m: usize) -> ContinuousModel {
        ContinuousModel::new(m, n, dim, d).unwrap()
    }

    #[test]
    fn perfect_uniformity_always_holds() {
        let m = model(5, 3, 100, 400);
        let zero: BTreeMap<usize, f64> = (0..5).map(|k| (k, 0.0)).collect();
        let t = recovery_conditions(&m, 0.0, 0.0, &zero, &zero).unwrap();
        assert!(t.condition_holds);
        assert_eq!(t.phi0_star, 0.0);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn single_split_arithmetic() {
        // D = 2, d = 1 has the single split (1, 0)
        let mut m = model(2, 1, 100, 100);
        m.c_d = 0.63662;
        let ro = BTreeMap::from([(1, 10.0)]);
        let t = recovery_conditions(&m, 0.05, 0.1, &ro, &BTreeMap::new()).unwrap();
        assert!((t.gamma_bound - 5.3662).abs() < 1e-9);
        assert!(t.condition_holds);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn initial_angle_arithmetic() {
        let mut m = model(2, 1, 100, 100);
        m.c_d = 0.63662;
        let ro = BTreeMap::from([(1, 0.0)]);
        let t = recovery_conditions(&m, 0.05, 0.05, &ro, &BTreeMap::new()).unwrap();
        assert!((t.phi0_star.to_degrees() - (0.48662f64 / 0.68662).acos().to_degrees()).abs() < 1e-12);
        assert!((t.phi0_star.to_degrees() - 44.86).abs() < 0.01);
    }

    #[test]
    fn splits_cover_k2_zero() {
        assert_eq!(required_splits(10, 3), vec![(7, 2), (8, 1), (9, 0)]);
        assert_eq!(required_splits(4, 3), vec![(1, 2), (2, 1), (3, 0)]);
        let m = model(4, 3, 10, 10);
        let ro = BTreeMap::from([(1, 1.0), (2, 1.5)]);
        assert!(recovery_conditions(&m, 0.1, 0.1, &ro, &BTreeMap::new()).is_err());
    }

    #[test]
    fn large_error_fails_with_right_angle() {
        let m = model(3, 2, 10, 30);
        let ro = BTreeMap::from([(1, 1.0), (2, 2.0)]);
        let rx = BTreeMap::from([(1, 1.0)]);
        let t = recovery_conditions(&m, 0.4, 0.1, &ro, &rx).unwrap();
        assert!(!t.condition_holds);
        assert_eq!(t.phi0_star, FRAC_PI_2);
    }

    #[test]
    fn maximal_hyperplane_examples() {
        let data = Matrix::from_column_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let (b, count) = brute_force_maximal_hyperplane(&data, 1e-12).unwrap();
        assert_eq!(count, 2);
        assert!((b.as_vector() - Vector::from_row_slice(&[0.0, 1.0])).amax() < 1e-12);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let data = Matrix::from_column_slice(2, 3, &[1.0, 0.0, -1.0, 0.0, s, s]);
        let (b, count) = brute_force_maximal_hyperplane(&data, 1e-12).unwrap();
        assert_eq!(count, 2);
        assert!(b.as_vector()[0].abs() < 1e-12);

        let single = Matrix::from_column_slice(2, 3, &[1.0, 0.0, -1.0, 0.0, 2.0, 0.0]);
        assert_eq!(brute_force_maximal_hyperplane(&single, 1e-12).unwrap().1, 3);

        let line = Matrix::from_column_slice(3, 4, &[1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.5, 0.0, 0.0]);
        assert!(brute_force_maximal_hyperplane(&line, 1e-12).is_err());
        let plane = Matrix::from_column_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(brute_force_maximal_hyperplane(&plane, 1e-12).unwrap().1, 3);
    }
}
