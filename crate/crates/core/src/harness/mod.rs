//! Seeded property checks for every structural and spectral result the
//! library relies on, plus fixed regression instances.
//!
//! Each check runs `trials` independent instances. Trial `i` uses seed
//! `cfg.seed + i`, so any failing instance can be regenerated on its own
//! with [`run_trial`]. Trials run in parallel; reports list them in seed
//! order regardless of scheduling.

pub mod checks;
pub mod crossval;
pub mod gen;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::HarnessError;
use crate::io::write_tensor;
use crate::spectra::SolverOptions;
use crate::tensor::Tensor;

pub use checks::{regression_suite, regression_tensors};
pub use crossval::{cross_validate_power, CrossCase, CrossValidation};
pub use gen::{gen_general_tensor, gen_nonnegative_weakly_irreducible, gen_z_tensor, random_proper_subset, GenSpec, Parity};

/// Registered check ids.
pub const THEOREM_IDS: [&str; 13] = [
    "L-dual",
    "T-oddbip-irred",
    "T-evenbip-red",
    "C-weakirred",
    "T-eq-odd",
    "T-eq-weak",
    "T-iff",
    "T-odd-suff",
    "C-odd-even",
    "T-sign-sim",
    "C-spec-eq",
    "T-rho-iff",
    "P-shift",
];

/// Which side of the equality characterization `T-iff` samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IffBranch {
    /// Each trial picks a side with probability 1/2.
    Both,
    /// `C` weakly odd-bipartite: equality expected.
    Forward,
    /// `C` with no weak odd bipartition: strict gap expected.
    Reverse,
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub trials: usize,
    pub seed: u64,
    /// Orders to sample from; `None` uses the check's default.
    pub orders: Option<Vec<usize>>,
    /// Dimensions to sample from; `None` uses the check's default.
    pub dims: Option<Vec<usize>>,
    /// Support density for sparse families; `None` uses 0.3.
    pub density: Option<f64>,
    pub solver: SolverOptions,
    /// `|λ(A) - λ(|A|)|` allowed by the equality checks.
    pub equality_tol: f64,
    /// Minimum gap `ρ(|A|) - λ(A)` asserted by the strict side of `T-iff`.
    pub gap_margin: f64,
    pub iff_branch: IffBranch,
    /// Failing tensors are written here as `<id>-seed-<seed>.json`.
    pub report_dir: Option<PathBuf>,
}

impl CheckConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            orders: None,
            dims: None,
            density: None,
            solver: SolverOptions::default(),
            equality_tol: 1e-6,
            gap_margin: 1e-8,
            iff_branch: IffBranch::Both,
            report_dir: None,
        }
    }

    pub fn with_sizes(mut self, orders: &[usize], dims: &[usize]) -> Self {
        self.orders = Some(orders.to_vec());
        self.dims = Some(dims.to_vec());
        self
    }
}

/// Result of one trial.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    /// The check could not decide, e.g. the oracle found nothing.
    Inconclusive(String),
    /// `residuals` lists the solver residuals behind the verdict, so that a
    /// solver miss can be told apart from a violated statement.
    Fail { reason: String, residuals: Vec<f64> },
}

#[derive(Clone, Debug)]
pub struct Trial {
    pub seed: u64,
    pub order: usize,
    pub dim: usize,
    pub tensor: Tensor<f64>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureRecord {
    pub seed: u64,
    pub order: usize,
    pub dim: usize,
    pub reason: String,
    pub residuals: Vec<f64>,
    pub tensor_file: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InconclusiveRecord {
    pub seed: u64,
    pub reason: String,
}

/// Summary of one check; `passes + inconclusive + failures.len() == trials`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem_id: String,
    pub trials: usize,
    pub passes: usize,
    pub inconclusive: usize,
    pub failures: Vec<FailureRecord>,
    pub inconclusive_cases: Vec<InconclusiveRecord>,
    pub wall_time_secs: f64,
}

impl TheoremReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn inconclusive_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.inconclusive as f64 / self.trials as f64
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

pub fn is_registered(id: &str) -> bool {
    THEOREM_IDS.contains(&id)
}

/// Regenerates and re-evaluates the single trial with `seed`.
pub fn run_trial(id: &str, seed: u64, cfg: &CheckConfig) -> Result<Trial, HarnessError> {
    if !is_registered(id) {
        return Err(HarnessError::UnknownTheorem(id.to_string()));
    }
    checks::run(id, seed, cfg)
}

/// Runs `cfg.trials` seeded trials of check `id`.
pub fn check_theorem(id: &str, cfg: &CheckConfig) -> Result<TheoremReport, HarnessError> {
    if !is_registered(id) {
        return Err(HarnessError::UnknownTheorem(id.to_string()));
    }
    let start = Instant::now();
    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| checks::run(id, cfg.seed.wrapping_add(i as u64), cfg))
        .collect::<Result<_, _>>()?;

    let mut report = TheoremReport {
        theorem_id: id.to_string(),
        trials: cfg.trials,
        passes: 0,
        inconclusive: 0,
        failures: Vec::new(),
        inconclusive_cases: Vec::new(),
        wall_time_secs: 0.0,
    };
    for trial in trials {
        match trial.outcome {
            Outcome::Pass => report.passes += 1,
            Outcome::Inconclusive(reason) => {
                report.inconclusive += 1;
                report.inconclusive_cases.push(InconclusiveRecord { seed: trial.seed, reason });
            }
            Outcome::Fail { reason, residuals } => {
                let tensor_file = match &cfg.report_dir {
                    Some(dir) => Some(save_counterexample(dir, id, trial.seed, &trial.tensor)?),
                    None => None,
                };
                report.failures.push(FailureRecord {
                    seed: trial.seed,
                    order: trial.order,
                    dim: trial.dim,
                    reason,
                    residuals,
                    tensor_file,
                });
            }
        }
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

fn save_counterexample(dir: &Path, id: &str, seed: u64, t: &Tensor<f64>) -> Result<String, HarnessError> {
    let path = dir.join(format!("{id}-seed-{seed}.json"));
    write_tensor(&path, t)?;
    Ok(path.display().to_string())
}
