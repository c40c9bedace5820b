use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conditions::{recovery_conditions, required_splits};
use super::continuous::ContinuousModel;
use super::estimators::{estimate_average_error, estimate_circumradius};
use crate::datagen::{synthesize, Label};
use crate::error::{invalid, Result};
use crate::eval::outlier_count;
use crate::rng::{mix, trial_seed};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TheoryCheckConfig {
    #[serde(rename = "D")]
    pub dim: usize,
    pub d_list: Vec<usize>,
    #[serde(rename = "N")]
    pub n: usize,
    pub ratio_list: Vec<f64>,
    pub trials: usize,
    pub probes: usize,
    pub circum_budget: usize,
    pub seed: u64,
}

impl Default for TheoryCheckConfig {
    fn default() -> Self {
        Self {
            dim: 10,
            d_list: vec![2, 5, 8, 9],
            n: 200,
            ratio_list: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7],
            trials: 10,
            probes: 10_000,
            circum_budget: 20_000,
            seed: 0,
        }
    }
}

impl TheoryCheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d_list.iter().any(|&d| d == 0 || d >= self.dim) {
            return Err(invalid("every d must satisfy 1 <= d < D"));
        }
        if self.ratio_list.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(invalid("ratios must lie in (0, 1)"));
        }
        if self.trials == 0 || self.probes == 0 {
            return Err(invalid("trials and probes must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryRecord {
    #[serde(rename = "D")]
    pub dim: usize,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub trial: usize,
    #[serde(rename = "eps_O")]
    pub eps_o: f64,
    #[serde(rename = "eps_X")]
    pub eps_x: f64,
    pub gamma: f64,
    pub condition_holds: bool,
    /// Degrees.
    pub phi0_star: f64,
}

/// One record per `(d, ratio, trial)`, in that nesting order. Trial `t` of
/// cell `i` uses seed `mix(seed, i) ^ t`; within a trial the outlier error,
/// inlier error and each circumradius draw from further mixed streams.
pub fn run_theory_check(cfg: &TheoryCheckConfig) -> Result<Vec<TheoryRecord>> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for (di, &d) in cfg.d_list.iter().enumerate() {
        for (ri, &ratio) in cfg.ratio_list.iter().enumerate() {
            let cell = (di * cfg.ratio_list.len() + ri) as u64;
            for trial in 0..cfg.trials {
                jobs.push((d, ratio, trial, trial_seed(mix(cfg.seed, cell), trial as u64)));
            }
        }
    }
    jobs.into_par_iter().map(|(d, ratio, trial, seed)| check_one(cfg, d, ratio, trial, seed)).collect()
}

fn check_one(cfg: &TheoryCheckConfig, d: usize, ratio: f64, trial: usize, seed: u64) -> Result<TheoryRecord> {
    let m = outlier_count(cfg.n, ratio);
    let ds = synthesize(cfg.dim, d, cfg.n, m, 0.0, seed)?;
    let outliers = ds.columns_with(Label::Outlier);
    let inliers = ds.columns_with(Label::Inlier);
    if m == 0 {
        return Err(invalid(format!("ratio {ratio} gives no outliers at N={}", cfg.n)));
    }
    let model = ContinuousModel::new(m, cfg.n, cfg.dim, d)?;
    let eps_o = estimate_average_error(&outliers, None, cfg.probes, mix(seed, 1))?;
    let eps_x = estimate_average_error(&inliers, Some(&ds.true_basis), cfg.probes, mix(seed, 2))?;
    let mut circum_o = BTreeMap::new();
    let mut circum_x = BTreeMap::new();
    for (k1, k2) in required_splits(cfg.dim, d) {
        let r = estimate_circumradius(&outliers, k1.min(m), cfg.circum_budget, mix(seed, 10 + k1 as u64))?;
        circum_o.insert(k1, r);
        if k2 > 0 {
            circum_x.insert(k2, estimate_circumradius(&inliers, k2, cfg.circum_budget, mix(seed, 100 + k2 as u64))?);
        }
    }
    let t = recovery_conditions(&model, eps_o, eps_x, &circum_o, &circum_x)?;
    Ok(TheoryRecord {
        dim: cfg.dim,
        d,
        n: cfg.n,
        m,
        trial,
        eps_o,
        eps_x,
        gamma: m as f64 / cfg.n as f64,
        condition_holds: t.condition_holds,
        phi0_star: t.phi0_star.to_degrees(),
    })
}
