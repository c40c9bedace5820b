use std::collections::BTreeMap;

use dpcp_core::datagen::{synthesize, Label};
use dpcp_core::dpcp::{dpcp_lp, SolverConfig};
use dpcp_core::numerics::{angle_to_subspace, normalize_columns, smallest_right_singular_vectors};
use dpcp_core::rng::mix;
use dpcp_core::theory::{
    estimate_average_error, estimate_circumradius, recovery_conditions, required_splits, ContinuousModel,
};

/// When the estimated recovery condition holds and the spectral
/// initialization is farther than `phi0_star` from the subspace, the LP
/// recursion ends on a normal of the subspace.
#[test]
fn certified_instances_recover_a_normal() {
    let (dim, d, n, m) = (4, 3, 400, 40);
    let mut certified = 0;
    for trial in 0..12u64 {
        let ds = synthesize(dim, d, n, m, 0.0, mix(77, trial)).unwrap();
        let outliers = ds.columns_with(Label::Outlier);
        let inliers = ds.columns_with(Label::Inlier);
        let model = ContinuousModel::new(m, n, dim, d).unwrap();
        let eps_o = estimate_average_error(&outliers, None, 4000, mix(trial, 1)).unwrap();
        let eps_x = estimate_average_error(&inliers, Some(&ds.true_basis), 4000, mix(trial, 2)).unwrap();
        let mut circum_o = BTreeMap::new();
        let mut circum_x = BTreeMap::new();
        for (k1, k2) in required_splits(dim, d) {
            circum_o.insert(k1, estimate_circumradius(&outliers, k1, 5000, mix(trial, 3)).unwrap());
            circum_x.insert(k2, estimate_circumradius(&inliers, k2, 5000, mix(trial, 4)).unwrap());
        }
        let t = recovery_conditions(&model, eps_o, eps_x, &circum_o, &circum_x).unwrap();

        let x = normalize_columns(&ds.data);
        let init = smallest_right_singular_vectors(&x.transpose(), 1).unwrap().column(0).into_owned();
        let phi0 = angle_to_subspace(&init, &ds.true_basis);
        if !(t.condition_holds && phi0 > t.phi0_star) {
            continue;
        }
        certified += 1;
        let b = dpcp_lp(&ds.data, 1, &SolverConfig::lp()).unwrap().complement_basis.column(0).into_owned();
        let inside = ds.true_basis.tr_mul(&b).norm();
        assert!(inside <= 1e-6, "trial {trial}: component in the subspace {inside:e}");
    }
    assert!(certified >= 3, "only {certified} certified instances");
}
