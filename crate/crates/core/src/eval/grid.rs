use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::signal::{distance_signal, perfect_separation, roc};
use crate::baselines::{ransac, RansacConfig};
use crate::datagen::{synthesize, Dataset};
use crate::dpcp::{dpcp_d_subspace, dpcp_irls, dpcp_lp, SolverConfig, SubspaceEstimate};
use crate::error::{invalid, Error, Result};
use crate::numerics::Matrix;
use crate::rng::{mix, trial_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "dpcp-lp")]
    DpcpLp,
    #[serde(rename = "dpcp-irls")]
    DpcpIrls,
    #[serde(rename = "dpcp-d")]
    DpcpD,
    #[serde(rename = "ransac")]
    Ransac,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::DpcpLp, Method::DpcpIrls, Method::DpcpD, Method::Ransac];

    pub fn name(self) -> &'static str {
        match self {
            Method::DpcpLp => "dpcp-lp",
            Method::DpcpIrls => "dpcp-irls",
            Method::DpcpD => "dpcp-d",
            Method::Ransac => "ransac",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| invalid(format!("unknown method '{s}'")))
    }
}

/// Minimum RANSAC effort in the grid, beyond the trial count implied by the
/// true outlier ratio.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RansacBudget {
    /// Required trials only; deterministic.
    #[default]
    Required,
    /// Also run at least as long as dpcp-lp took on the same dataset.
    MatchLpTime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(rename = "D")]
    pub dim: usize,
    pub d_list: Vec<usize>,
    #[serde(rename = "N")]
    pub n: usize,
    pub ratio_list: Vec<f64>,
    #[serde(default = "default_sigmas")]
    pub sigma_list: Vec<f64>,
    pub trials: usize,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out_csv: Option<PathBuf>,
    #[serde(default)]
    pub ransac_budget: RansacBudget,
    #[serde(default)]
    pub ransac_min_trials: usize,
}

fn default_sigmas() -> Vec<f64> {
    vec![0.0]
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d_list.is_empty() || self.ratio_list.is_empty() || self.sigma_list.is_empty() || self.methods.is_empty()
        {
            return Err(invalid("grid lists must be nonempty"));
        }
        if self.d_list.iter().any(|&d| d == 0 || d >= self.dim) {
            return Err(invalid("every d must satisfy 1 <= d < D"));
        }
        if self.d_list.iter().any(|&d| self.n < d + 1) {
            return Err(invalid("N must exceed every d"));
        }
        if self.ratio_list.iter().any(|r| !(0.0..1.0).contains(r)) {
            return Err(invalid("ratios must lie in [0, 1)"));
        }
        if self.sigma_list.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(invalid("sigmas must be finite and nonnegative"));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be positive"));
        }
        Ok(())
    }

    pub fn record_count(&self) -> usize {
        self.d_list.len() * self.ratio_list.len() * self.sigma_list.len() * self.trials * self.methods.len()
    }
}

/// `round(R·N/(1 − R))`, the outlier count giving ratio `R = M/(N + M)`.
pub fn outlier_count(n: usize, ratio: f64) -> usize {
    (ratio * n as f64 / (1.0 - ratio)).round() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    #[serde(rename = "D")]
    pub dim: usize,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub ratio: f64,
    pub sigma: f64,
    pub trial: usize,
    pub seed: u64,
    pub method: Method,
    pub separation: bool,
    pub area_above: Option<f64>,
    /// Smallest principal angle in degrees between the estimated complement
    /// and the true subspace; 90 means the complement is exactly orthogonal.
    pub angle_deg: Option<f64>,
    pub iterations: usize,
    pub wall_ms: f64,
    pub status: String,
}

/// Smallest principal angle, in degrees, between `span(a)` and `span(b)`.
pub fn min_angle_deg(a: &Matrix, b: &Matrix) -> f64 {
    crate::numerics::min_principal_angle(a, b).to_degrees()
}

pub struct MethodOutcome {
    pub estimate: SubspaceEstimate,
    pub elapsed: Duration,
}

/// Runs `method` with its default settings on `ds`, estimating the
/// `D − d`-dimensional complement.
pub fn run_method(method: Method, ds: &Dataset, ransac_cfg: Option<RansacConfig>) -> Result<MethodOutcome> {
    let c = ds.ambient_dim() - ds.subspace_dim();
    let start = Instant::now();
    let estimate = match method {
        Method::DpcpLp => dpcp_lp(&ds.data, c, &SolverConfig::lp())?,
        Method::DpcpIrls => dpcp_irls(&ds.data, c, &SolverConfig::irls())?,
        Method::DpcpD => {
            let cfg = if ds.sigma > 0.0 {
                SolverConfig::denoised_with_noise(ds.sigma, ds.data.ncols())
            } else {
                SolverConfig::denoised()
            };
            dpcp_d_subspace(&ds.data, c, &cfg)?
        }
        Method::Ransac => {
            let cfg = ransac_cfg.ok_or_else(|| invalid("RANSAC needs a configuration"))?;
            ransac(&ds.data, &cfg)?.estimate
        }
    };
    Ok(MethodOutcome { estimate, elapsed: start.elapsed() })
}

struct Job {
    d: usize,
    ratio: f64,
    sigma: f64,
    trial: usize,
    seed: u64,
}

/// Every `(d, ratio, sigma)` cell and trial, each method in configured order.
/// Trial `t` of cell `i` uses dataset seed `mix(seed, i) ^ t`. Solver errors
/// become records with `status` set to the message. The result does not
/// depend on scheduling, apart from `wall_ms`.
pub fn run_grid(cfg: &GridConfig) -> Result<Vec<GridRecord>> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    let mut cell = 0u64;
    for &d in &cfg.d_list {
        for &ratio in &cfg.ratio_list {
            for &sigma in &cfg.sigma_list {
                for trial in 0..cfg.trials {
                    jobs.push(Job { d, ratio, sigma, trial, seed: trial_seed(mix(cfg.seed, cell), trial as u64) });
                }
                cell += 1;
            }
        }
    }
    let nested: Vec<Vec<GridRecord>> = jobs.par_iter().map(|job| run_job(cfg, job)).collect();
    Ok(nested.into_iter().flatten().collect())
}

fn run_job(cfg: &GridConfig, job: &Job) -> Vec<GridRecord> {
    let m = outlier_count(cfg.n, job.ratio);
    let base = GridRecord {
        dim: cfg.dim,
        d: job.d,
        n: cfg.n,
        m,
        ratio: job.ratio,
        sigma: job.sigma,
        trial: job.trial,
        seed: job.seed,
        method: cfg.methods[0],
        separation: false,
        area_above: None,
        angle_deg: None,
        iterations: 0,
        wall_ms: 0.0,
        status: String::new(),
    };
    let ds = match synthesize(cfg.dim, job.d, cfg.n, m, job.sigma, job.seed) {
        Ok(ds) => ds,
        Err(e) => {
            return cfg
                .methods
                .iter()
                .map(|&method| GridRecord { method, status: format!("error: {e}"), ..base.clone() })
                .collect()
        }
    };
    let mut lp_time: Option<Duration> = None;
    let mut out = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let ransac_cfg = RansacConfig {
            min_trials: cfg.ransac_min_trials,
            min_time: match cfg.ransac_budget {
                RansacBudget::Required => None,
                RansacBudget::MatchLpTime => lp_time,
            },
            ..RansacConfig::new(job.d, job.ratio, mix(job.seed, 7))
        };
        let mut rec = GridRecord { method, ..base.clone() };
        match run_method(method, &ds, Some(ransac_cfg)).and_then(|o| score(&ds, &o.estimate).map(|s| (o, s))) {
            Ok((outcome, (sep, area, angle))) => {
                if method == Method::DpcpLp {
                    lp_time = Some(outcome.elapsed);
                }
                rec.separation = sep;
                rec.area_above = Some(area);
                rec.angle_deg = Some(angle);
                rec.iterations = outcome.estimate.total_iterations();
                rec.wall_ms = outcome.elapsed.as_secs_f64() * 1e3;
                rec.status = "ok".into();
            }
            Err(e) => rec.status = format!("error: {e}"),
        }
        out.push(rec);
    }
    out
}

fn score(ds: &Dataset, est: &SubspaceEstimate) -> Result<(bool, f64, f64)> {
    let sig = distance_signal(&ds.data, &est.complement_basis, &ds.labels)?;
    let sep = perfect_separation(&sig)?;
    let area = roc(&sig)?.area_above;
    Ok((sep, area, min_angle_deg(&est.complement_basis, &ds.true_basis)))
}
