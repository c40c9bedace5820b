use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use dpcp_core::baselines::{ransac, RansacConfig};
use dpcp_core::datagen::synthesize;
use dpcp_core::dpcp::{dpcp_d_subspace, dpcp_irls, dpcp_lp, SolverConfig, SubspaceEstimate};
use dpcp_core::eval::{distance_signal, perfect_separation, roc as roc_curve, run_grid, GridRecord, Method};
use dpcp_core::io;
use dpcp_core::theory::{run_theory_check, TheoryCheckConfig};

use crate::output::{basis_sibling, open, write_atomic, write_to};
use crate::CliError;

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Ambient dimension.
    #[arg(long = "D")]
    pub dim: usize,
    /// Subspace dimension.
    #[arg(long = "d")]
    pub d: usize,
    /// Number of inliers.
    #[arg(long = "N")]
    pub n: usize,
    /// Number of outliers.
    #[arg(long = "M")]
    pub m: usize,
    /// Standard deviation of Gaussian noise added orthogonally to the subspace.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Dataset CSV; the basis goes to the sibling `<stem>.basis.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    #[value(name = "dpcp-lp")]
    DpcpLp,
    #[value(name = "dpcp-irls")]
    DpcpIrls,
    #[value(name = "dpcp-d")]
    DpcpD,
    Ransac,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::DpcpLp => Method::DpcpLp,
            MethodArg::DpcpIrls => Method::DpcpIrls,
            MethodArg::DpcpD => Method::DpcpD,
            MethodArg::Ransac => Method::Ransac,
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Number of complement directions to estimate, `D - d`.
    #[arg(long, default_value_t = 1)]
    pub codim: usize,
    /// Relative objective decrease below which iteration stops.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Iteration cap per component [default: 10 for dpcp-lp, 100 for dpcp-irls, 1000 for dpcp-d].
    #[arg(long)]
    pub tmax: Option<usize>,
    /// IRLS weight floor and dpcp-d ridge term.
    #[arg(long, default_value_t = 1e-6)]
    pub delta: f64,
    /// dpcp-d soft threshold [default: max(sigma, 1/sqrt(L)) for L points].
    #[arg(long)]
    pub tau: Option<f64>,
    /// Known noise level, used for the default dpcp-d threshold.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// RANSAC subspace dimension [default: D - codim].
    #[arg(long = "d")]
    pub d: Option<usize>,
    /// RANSAC inlier distance threshold.
    #[arg(long, default_value_t = 1e-3)]
    pub thresh: f64,
    /// RANSAC minimum number of trials.
    #[arg(long)]
    pub trials: Option<usize>,
    /// RANSAC success probability used to derive the trial count.
    #[arg(long = "success-prob", default_value_t = 0.99)]
    pub success_prob: f64,
    /// RANSAC assumed outlier ratio used to derive the trial count.
    #[arg(long = "ratio-hint", default_value_t = 0.5)]
    pub ratio_hint: f64,
    /// RANSAC sampling seed; the other methods are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Dataset CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Complement basis, one column per line.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// JSON config with keys D, d_list, N, ratio_list, sigma_list, trials,
    /// methods, seed, out_csv.
    #[arg(long)]
    pub config: PathBuf,
    /// Worker threads [default: available parallelism].
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides `out_csv`; without either, results go to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[arg(long = "D", default_value_t = 10)]
    pub dim: usize,
    /// Comma-separated subspace dimensions.
    #[arg(long = "d-list", value_delimiter = ',', default_values_t = [2usize, 5, 8, 9])]
    pub d_list: Vec<usize>,
    #[arg(long = "N", default_value_t = 200)]
    pub n: usize,
    /// Comma-separated outlier ratios M/(N+M), each in (0, 1).
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7])]
    pub ratios: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Random probe directions per uniformity estimate.
    #[arg(long, default_value_t = 10_000)]
    pub probes: usize,
    /// Vertex evaluations per circumradius estimate.
    #[arg(long = "circum-budget", default_value_t = 20_000)]
    pub circum_budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads [default: available parallelism].
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output CSV [default: standard output].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    /// Labelled dataset CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Complement basis from `fit`.
    #[arg(long)]
    pub estimate: PathBuf,
    /// Curve name written in the method column.
    #[arg(long, default_value = "estimate")]
    pub label: String,
    /// Accepted for uniformity; the ROC is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV [default: standard output].
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn gen(a: GenArgs) -> Result<(), CliError> {
    let ds = synthesize(a.dim, a.d, a.n, a.m, a.sigma, a.seed)?;
    write_atomic(&a.out, |w| io::write_dataset(w, &ds.data, &ds.labels))?;
    write_atomic(&basis_sibling(&a.out), |w| io::write_basis(w, &ds.true_basis))?;
    Ok(())
}

pub fn fit(a: FitArgs) -> Result<(), CliError> {
    let (data, _) = io::read_dataset(open(&a.input)?)?;
    let method = Method::from(a.method);
    let base = match method {
        Method::DpcpLp => SolverConfig::lp(),
        Method::DpcpIrls => SolverConfig::irls(),
        _ => SolverConfig::denoised(),
    };
    let tau = a.tau.or_else(|| a.sigma.map(|s| SolverConfig::denoised_with_noise(s, data.ncols()).tau_for(0)));
    let cfg = SolverConfig { epsilon: a.eps, t_max: a.tmax.unwrap_or(base.t_max), delta: a.delta, tau };
    let est: SubspaceEstimate = match method {
        Method::DpcpLp => dpcp_lp(&data, a.codim, &cfg)?,
        Method::DpcpIrls => dpcp_irls(&data, a.codim, &cfg)?,
        Method::DpcpD => dpcp_d_subspace(&data, a.codim, &cfg)?,
        Method::Ransac => {
            let dim = data.nrows();
            if a.codim == 0 || a.codim >= dim {
                return Err(CliError::Usage(format!("codim must lie in [1, {}]", dim.saturating_sub(1))));
            }
            let rc = RansacConfig {
                threshold: a.thresh,
                success_prob: a.success_prob,
                min_trials: a.trials.unwrap_or(0),
                ..RansacConfig::new(a.d.unwrap_or(dim - a.codim), a.ratio_hint, a.seed)
            };
            ransac(&data, &rc)?.estimate
        }
    };
    write_atomic(&a.output, |w| io::write_basis(w, &est.complement_basis))?;
    let summary = serde_json::json!({
        "method": method.name(),
        "codim": est.complement_basis.ncols(),
        "iterations": est.iterations_per_component,
        "converged": est.converged,
        "objective": est.objective_trace.last(),
    });
    println!("{summary}");
    Ok(())
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(pool.install(f))
}

pub fn grid(a: GridArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.config).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::Usage(format!("config not found: {}", a.config.display())),
        _ => CliError::Runtime(format!("cannot read {}: {e}", a.config.display())),
    })?;
    let mut cfg = io::parse_grid_config(&text).map_err(|e| CliError::Usage(format!("{}: {e}", a.config.display())))?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let records = with_jobs(a.jobs, || run_grid(&cfg))??;
    log_cells(&records);
    let out = a.out.or_else(|| cfg.out_csv.clone());
    write_to(out.as_deref(), |w| io::write_grid_csv(w, &records))
}

/// `(d, ratio bits, sigma bits, method)`.
type CellKey<'a> = (usize, u64, u64, &'a str);

fn log_cells(records: &[GridRecord]) {
    let mut cells: BTreeMap<CellKey, (usize, usize, usize)> = BTreeMap::new();
    for r in records {
        let key = (r.d, r.ratio.to_bits(), r.sigma.to_bits(), r.method.name());
        let e = cells.entry(key).or_default();
        e.0 += r.separation as usize;
        e.1 += r.status.starts_with("error") as usize;
        e.2 += 1;
    }
    for ((d, ratio, sigma, method), (sep, err, total)) in cells {
        eprintln!(
            "d={d} ratio={} sigma={} {method}: separated {sep}/{total}, errors {err}",
            f64::from_bits(ratio),
            f64::from_bits(sigma)
        );
    }
}

pub fn theory_check(a: TheoryArgs) -> Result<(), CliError> {
    let cfg = TheoryCheckConfig {
        dim: a.dim,
        d_list: a.d_list,
        n: a.n,
        ratio_list: a.ratios,
        trials: a.trials,
        probes: a.probes,
        circum_budget: a.circum_budget,
        seed: a.seed,
    };
    let records = with_jobs(a.jobs, || run_theory_check(&cfg))??;
    write_to(a.out.as_deref(), |w| io::write_theory_csv(w, &records))
}

pub fn roc(a: RocArgs) -> Result<(), CliError> {
    let (data, labels) = io::read_dataset(open(&a.input)?)?;
    let basis = io::read_basis(open(&a.estimate)?)?;
    let sig = distance_signal(&data, &basis, &labels)?;
    let curve = roc_curve(&sig)?;
    eprintln!("area_above={} separation={}", curve.area_above, perfect_separation(&sig)?);
    write_to(a.output.as_deref(), |w| io::write_roc_csv(w, &[(a.label.as_str(), &curve)]))
}
