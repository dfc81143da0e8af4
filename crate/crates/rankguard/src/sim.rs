//! Monte-Carlo estimation of rejection rates for the robust tests and the
//! conventional missing-data strategies.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rankguard_core::{
    robust_test_distinct, robust_test_general, strategy_test, wmw_test, Alternative, Decision, Sample,
    Strategy, Support,
};
use rayon::prelude::*;

use crate::dist::DistSpec;
use crate::error::InputError;
use crate::missing::{apply, MissingnessSpec};
use crate::rng::{stream, Role};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Robust test with open support and the untied variance.
    Proposed,
    /// Robust test with ties and the distributions' closed support ends.
    ProposedTies,
    Ignore,
    MeanImpute,
    HotDeck,
    /// Classical test on the complete data.
    Oracle,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Proposed,
        Method::ProposedTies,
        Method::Ignore,
        Method::MeanImpute,
        Method::HotDeck,
        Method::Oracle,
    ];
    pub const NAMES: &'static str = "proposed, proposed_ties, ignore, mean_impute, hot_deck, oracle";

    pub fn name(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::ProposedTies => "proposed_ties",
            Method::Ignore => "ignore",
            Method::MeanImpute => "mean_impute",
            Method::HotDeck => "hot_deck",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = InputError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL.into_iter().find(|m| m.name() == s.trim()).ok_or_else(|| {
            InputError::new("methods", format!("unknown method {s:?}; valid: {}", Method::NAMES))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub dist_x: DistSpec,
    pub dist_y: DistSpec,
    pub n: usize,
    pub m: usize,
    pub missingness: MissingnessSpec,
    pub methods: Vec<Method>,
    pub alpha: f64,
    pub alternative: Alternative,
    pub trials: u64,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), InputError> {
        if self.n == 0 || self.m == 0 {
            return Err(InputError::new("n", "sample sizes must be positive"));
        }
        if self.trials == 0 {
            return Err(InputError::new("trials", "need at least one trial"));
        }
        if self.methods.is_empty() {
            return Err(InputError::new("methods", format!("need at least one of {}", Method::NAMES)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(InputError::new("alpha", format!("must lie in (0, 1), got {}", self.alpha)));
        }
        if !(0.0..1.0).contains(&self.missingness.s) {
            return Err(InputError::new("s", format!("must lie in [0, 1), got {}", self.missingness.s)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Reject,
    Retain,
    /// The method could not be applied (e.g. an empty or fully tied arm).
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    pub trials: u64,
    pub rejections: u64,
    pub degenerate: u64,
}

impl MethodResult {
    pub fn reject_rate(&self) -> f64 {
        self.rejections as f64 / self.trials as f64
    }

    /// `sqrt(rate (1 − rate) / trials)`.
    pub fn stderr(&self) -> f64 {
        let r = self.reject_rate();
        (r * (1.0 - r) / self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub spec: ScenarioSpec,
    pub methods: Vec<MethodResult>,
    pub elapsed: Duration,
}

impl ScenarioResult {
    pub fn get(&self, method: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|r| r.method == method)
    }
}

fn decide(decision: Decision) -> Outcome {
    if decision == Decision::Significant {
        Outcome::Reject
    } else {
        Outcome::Retain
    }
}

fn classical(p: f64, alpha: f64) -> Outcome {
    if p < alpha {
        Outcome::Reject
    } else {
        Outcome::Retain
    }
}

/// Draws one trial's data and runs every method on it.
pub fn run_trial(spec: &ScenarioSpec, support: &Support, trial: u64) -> Vec<Outcome> {
    let seed = spec.seed;
    let x_full = spec.dist_x.sample(spec.n, &mut stream(seed, trial, Role::SampleX));
    let y_full = spec.dist_y.sample(spec.m, &mut stream(seed, trial, Role::SampleY));
    let s = spec.missingness.s;
    let make = |mech, values: &[f64], role| -> Option<Sample> {
        apply(mech, values, s, &mut stream(seed, trial, role)).ok()
    };
    let x = make(spec.missingness.x, &x_full, Role::MissingX);
    let y = make(spec.missingness.y, &y_full, Role::MissingY);
    let mut imputation = stream(seed, trial, Role::Imputation);
    let (alpha, alt) = (spec.alpha, spec.alternative);

    spec.methods
        .iter()
        .map(|&method| {
            let (Some(x), Some(y)) = (&x, &y) else {
                return Outcome::Degenerate;
            };
            let result = match method {
                Method::Proposed => robust_test_distinct(x, y, alpha, alt).map(|r| decide(r.decision)),
                Method::ProposedTies => {
                    robust_test_general(x, y, support, alpha, alt).map(|r| decide(r.decision))
                }
                Method::Ignore => {
                    strategy_test(x, y, Strategy::Ignore, alt, &mut imputation).map(|o| classical(o.p, alpha))
                }
                Method::MeanImpute => strategy_test(x, y, Strategy::MeanImpute, alt, &mut imputation)
                    .map(|o| classical(o.p, alpha)),
                Method::HotDeck => strategy_test(x, y, Strategy::HotDeck, alt, &mut imputation)
                    .map(|o| classical(o.p, alpha)),
                Method::Oracle => wmw_test(&x_full, &y_full, alt, true).map(|o| classical(o.p, alpha)),
            };
            result.unwrap_or(Outcome::Degenerate)
        })
        .collect()
}

/// Runs every trial of `spec` on `pool`; results are reduced in trial order.
pub fn run_scenario(spec: &ScenarioSpec, pool: &rayon::ThreadPool) -> Result<ScenarioResult, InputError> {
    spec.validate()?;
    let start = Instant::now();
    let support = DistSpec::joint_support(&spec.dist_x, &spec.dist_y);
    let outcomes: Vec<Vec<Outcome>> =
        pool.install(|| (0..spec.trials).into_par_iter().map(|t| run_trial(spec, &support, t)).collect());
    let mut methods: Vec<MethodResult> = spec
        .methods
        .iter()
        .map(|&method| MethodResult { method, trials: spec.trials, rejections: 0, degenerate: 0 })
        .collect();
    for trial in &outcomes {
        for (res, outcome) in methods.iter_mut().zip(trial) {
            match outcome {
                Outcome::Reject => res.rejections += 1,
                Outcome::Degenerate => res.degenerate += 1,
                Outcome::Retain => {}
            }
        }
    }
    Ok(ScenarioResult { spec: spec.clone(), methods, elapsed: start.elapsed() })
}

/// A worker pool of `workers` threads (`0` = available parallelism).
pub fn thread_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool")
}

/// Cells of a sweep: every `n` (which sets `m = n`) crossed with every `s`.
/// An empty list yields no cells.
pub fn grid_cells(base: &ScenarioSpec, n_values: &[usize], s_values: &[f64]) -> Vec<ScenarioSpec> {
    let mut cells = Vec::with_capacity(n_values.len() * s_values.len());
    for &n in n_values {
        for &s in s_values {
            let mut cell = base.clone();
            cell.n = n;
            cell.m = n;
            cell.missingness.s = s;
            cells.push(cell);
        }
    }
    cells
}

pub fn sweep(cells: &[ScenarioSpec], pool: &rayon::ThreadPool) -> Result<Vec<ScenarioResult>, InputError> {
    cells.iter().map(|c| run_scenario(c, pool)).collect()
}

pub const CSV_HEADER: [&str; 12] = [
    "mechanism",
    "s",
    "n",
    "m",
    "dist_x",
    "dist_y",
    "alpha",
    "method",
    "trials",
    "reject_rate",
    "stderr",
    "degenerate",
];

/// Long-format rows, one per (scenario, method).
pub fn write_csv<W: std::io::Write>(results: &[ScenarioResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in results {
        let spec = &r.spec;
        for m in &r.methods {
            w.write_record([
                spec.missingness.label(),
                spec.missingness.s.to_string(),
                spec.n.to_string(),
                spec.m.to_string(),
                spec.dist_x.to_string(),
                spec.dist_y.to_string(),
                spec.alpha.to_string(),
                m.method.to_string(),
                m.trials.to_string(),
                m.reject_rate().to_string(),
                m.stderr().to_string(),
                m.degenerate.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
