//! Command-line interface. Exit codes: 0 when the command ran (whatever the
//! decision), 2 for malformed input, 3 for degenerate data.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use rankguard_core::{
    asymptotic_class, feasibility, mcar_power_from_probs, pair_probs, AsymptoticClass, Error as CoreError,
    PowerInputs, Sample, Support,
};

use crate::analyze::{analyze, run_test, AnalysisOptions, TieMode};
use crate::dataset::{parse_value, DatasetTable};
use crate::dist::DistSpec;
use crate::error::{AppError, InputError};
use crate::report::{parse_alternative, FeasibilityDto, PowerDto, TestReportDto};
use crate::scenario::Scenario;
use crate::sim::{sweep, thread_pool, write_csv};

#[derive(Debug, Parser)]
#[command(
    name = "rankguard",
    version,
    about = "Wilcoxon-Mann-Whitney tests that stay valid under arbitrary missingness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Robust two-sample test on one pair of samples.
    Test(TestArgs),
    /// Whether significance is reachable at all for given sample sizes.
    Feasibility(FeasibilityArgs),
    /// Approximate MCAR power of the robust test.
    Power(PowerArgs),
    /// Monte-Carlo sweep described by a scenario file.
    Simulate(SimulateArgs),
    /// Compare each group in a CSV with a control group.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Inline x values, comma separated; NA marks a missing value.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "x_file", required_unless_present = "x_file")]
    pub x: Option<String>,
    /// File of x values separated by commas, spaces or newlines.
    #[arg(long)]
    pub x_file: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "y_file", required_unless_present = "y_file")]
    pub y: Option<String>,
    #[arg(long)]
    pub y_file: Option<PathBuf>,
    /// Total size of x including missing values (default: number of entries).
    #[arg(long)]
    pub n_total: Option<usize>,
    #[arg(long)]
    pub m_total: Option<usize>,
    /// `lo,hi` ends of the value support (`-inf`/`inf` allowed) or `none`.
    #[arg(long, default_value = "none", allow_hyphen_values = true)]
    pub support: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// two_sided, greater or less (x relative to y).
    #[arg(long, default_value = "two_sided")]
    pub alternative: String,
    /// auto, on or off.
    #[arg(long, default_value = "auto")]
    pub ties: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FeasibilityArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n_obs: usize,
    #[arg(long)]
    pub m_obs: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// e.g. `normal(0,1)`, `uniform(0,1)`, `exponential(2)`.
    #[arg(long)]
    pub dist_x: String,
    #[arg(long)]
    pub dist_y: String,
    #[arg(long)]
    pub n: usize,
    /// Defaults to n.
    #[arg(long)]
    pub m: Option<usize>,
    /// Expected missing proportion in each arm.
    #[arg(long, default_value_t = 0.0)]
    pub s: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Also report whether power tends to 0 or 1 as n, m grow.
    #[arg(long)]
    pub limit: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long, env = "RANKGUARD_SEED")]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses the available parallelism.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Output CSV (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// CSV with `group,value` or `group,baseline,completion` columns.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub control: String,
    #[arg(long, default_value = "greater")]
    pub alternative: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Holm-adjust p_max across the comparisons.
    #[arg(long)]
    pub holm: bool,
    #[arg(long, default_value = "auto")]
    pub ties: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Output of `test`: the report plus the sample-size feasibility check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutput {
    #[serde(flatten)]
    pub report: TestReportDto,
    pub feasibility: FeasibilityDto,
}

fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> AppError + '_ {
    move |source| AppError::Io { path: path.display().to_string(), source }
}

/// Parses values separated by commas and/or whitespace; `NA` or an empty
/// comma-delimited field is missing.
pub fn parse_values(text: &str, field: &str) -> Result<Vec<Option<f64>>, InputError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        for chunk in line.split(',') {
            let words: Vec<&str> = chunk.split_whitespace().collect();
            if words.is_empty() {
                out.push(None);
            }
            for w in words {
                out.push(parse_value(w).map_err(|m| InputError::new(field, m))?);
            }
        }
    }
    Ok(out)
}

fn load_sample(
    inline: Option<&str>,
    file: Option<&PathBuf>,
    total: Option<usize>,
    field: &str,
) -> Result<Sample, AppError> {
    let text = match (inline, file) {
        (Some(t), _) => t.to_string(),
        (None, Some(p)) => std::fs::read_to_string(p).map_err(io_err(p))?,
        (None, None) => return Err(InputError::new(field, "no values given").into()),
    };
    let values = parse_values(&text, field)?;
    let observed: Vec<f64> = values.iter().flatten().copied().collect();
    let listed = values.len();
    let total = total.unwrap_or(listed);
    if total < listed {
        return Err(InputError::new(
            format!("{field} total"),
            format!("total {total} is smaller than the {listed} values given"),
        )
        .into());
    }
    Sample::with_total(observed, total).map_err(|e| InputError::new(field, e.to_string()).into())
}

pub fn parse_support(text: &str) -> Result<Support, InputError> {
    let t = text.trim();
    if t == "none" {
        return Ok(Support::unbounded());
    }
    let err = |m: String| InputError::new("support", m);
    let (lo, hi) = t.split_once(',').ok_or_else(|| err(format!("expected `lo,hi` or `none`, got {t:?}")))?;
    let end = |s: &str, inf: &str| -> Result<Option<f64>, InputError> {
        let s = s.trim();
        if s == inf {
            return Ok(None);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(err(format!("cannot parse support end {s:?}"))),
        }
    };
    Support::new(end(lo, "-inf")?, end(hi, "inf")?).map_err(|e| err(e.to_string()))
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), AppError> {
    let text = serde_json::to_string_pretty(value).expect("serializable report");
    writeln!(out, "{text}").map_err(io_err(std::path::Path::new("stdout")))
}

fn write_text(text: &str, out: &mut dyn Write) -> Result<(), AppError> {
    out.write_all(text.as_bytes()).map_err(io_err(std::path::Path::new("stdout")))
}

fn run_test_cmd(a: &TestArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let x = load_sample(a.x.as_deref(), a.x_file.as_ref(), a.n_total, "x")?;
    let y = load_sample(a.y.as_deref(), a.y_file.as_ref(), a.m_total, "y")?;
    let support = parse_support(&a.support)?;
    let alternative = parse_alternative(&a.alternative)?;
    let ties: TieMode = a.ties.parse()?;
    let report =
        run_test(&x, &y, &support, ties, a.alpha, alternative).map_err(|e| AppError::core("test", e))?;
    let feas = feasibility(x.total(), y.total(), x.n_observed(), y.n_observed(), a.alpha)
        .map_err(|e| AppError::core("feasibility", e))?;
    let output = TestOutput {
        report: TestReportDto::from(&report),
        feasibility: FeasibilityDto::new(
            x.total(),
            y.total(),
            x.n_observed(),
            y.n_observed(),
            a.alpha,
            &feas,
        ),
    };
    match a.format {
        Format::Json => write_json(&output, out),
        Format::Text => write_text(&(output.report.to_text() + &output.feasibility.to_text()), out),
        Format::Csv => {
            let r = &output.report;
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |source| AppError::Csv { path: "stdout".into(), source };
            w.write_record([
                "decision",
                "p_min",
                "p_max",
                "w_min",
                "w_max",
                "mu",
                "n",
                "m",
                "n_obs_x",
                "n_obs_y",
                "same_sign",
                "alpha",
                "alternative",
                "feasible",
            ])
            .map_err(csv_err)?;
            w.write_record([
                r.decision.as_str().to_string(),
                r.p_min.to_string(),
                r.p_max.to_string(),
                r.w_min.clone(),
                r.w_max.clone(),
                r.mu.clone(),
                r.n.to_string(),
                r.m.to_string(),
                r.n_obs_x.to_string(),
                r.n_obs_y.to_string(),
                r.condition_same_sign.to_string(),
                r.alpha.to_string(),
                r.alternative.clone(),
                output.feasibility.feasible.to_string(),
            ])
            .map_err(csv_err)?;
            w.flush().map_err(io_err(std::path::Path::new("stdout")))
        }
    }
}

fn run_feasibility(a: &FeasibilityArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let r = feasibility(a.n, a.m, a.n_obs, a.m_obs, a.alpha).map_err(|e| AppError::core("feasibility", e))?;
    let dto = FeasibilityDto::new(a.n, a.m, a.n_obs, a.m_obs, a.alpha, &r);
    match a.format {
        Format::Text => write_text(&dto.to_text(), out),
        _ => write_json(&dto, out),
    }
}

fn limit_name(class: rankguard_core::Result<AsymptoticClass>) -> Result<String, AppError> {
    match class {
        Ok(AsymptoticClass::PowerToZero) => Ok("power_to_zero".into()),
        Ok(AsymptoticClass::PowerToOne) => Ok("power_to_one".into()),
        Err(CoreError::Boundary(_)) => Ok("boundary".into()),
        Err(e) => Err(AppError::core("limit", e)),
    }
}

fn run_power(a: &PowerArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let parse = |text: &str, field: &str| -> Result<DistSpec, InputError> {
        text.parse::<DistSpec>().map_err(|e| InputError::new(field, e.message))
    };
    let (dx, dy) = (parse(&a.dist_x, "dist_x")?, parse(&a.dist_y, "dist_y")?);
    let continuous = |d: &DistSpec, field: &str| {
        d.continuous()
            .ok_or_else(|| InputError::new(field, format!("{d}: power needs a continuous distribution")))
    };
    let (f, g) = (continuous(&dx, "dist_x")?, continuous(&dy, "dist_y")?);
    let m = a.m.unwrap_or(a.n);
    let inputs =
        PowerInputs::from_missing_fraction(a.n, m, a.s, a.alpha).map_err(|e| AppError::core("power", e))?;
    let probs = pair_probs(f.as_ref(), g.as_ref()).map_err(|e| AppError::core("pair probabilities", e))?;
    let power = mcar_power_from_probs(&probs, &inputs).map_err(|e| AppError::core("power", e))?;
    let limit =
        if a.limit { Some(limit_name(asymptotic_class(1.0 - a.s, 1.0 - a.s, probs.p1))?) } else { None };
    let dto = PowerDto {
        dist_x: dx.to_string(),
        dist_y: dy.to_string(),
        n: a.n,
        m,
        s: a.s,
        alpha: a.alpha,
        p1: probs.p1,
        p2: probs.p2,
        p3: probs.p3,
        power,
        limit,
    };
    match a.format {
        Format::Text => write_text(&dto.to_text(), out),
        _ => write_json(&dto, out),
    }
}

fn run_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let text = std::fs::read_to_string(&a.scenario).map_err(io_err(&a.scenario))?;
    let mut scenario = Scenario::parse(&text)?;
    if let Some(seed) = a.seed {
        scenario = scenario.with_seed(seed);
    }
    let pool = thread_pool(a.workers);
    let results = sweep(&scenario.cells(), &pool)?;
    match &a.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(io_err(path))?;
            write_csv(&results, std::io::BufWriter::new(file))
                .map_err(|source| AppError::Csv { path: path.display().to_string(), source })
        }
        None => write_csv(&results, out).map_err(|source| AppError::Csv { path: "stdout".into(), source }),
    }
}

fn run_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let table = DatasetTable::from_path(&a.data.display().to_string())?;
    let opts = AnalysisOptions {
        control: a.control.clone(),
        alternative: parse_alternative(&a.alternative)?,
        alpha: a.alpha,
        holm: a.holm,
        ties: a.ties.parse()?,
    };
    let report = analyze(&table, &opts)?;
    match a.format {
        Format::Text => write_text(&report.to_text(), out),
        _ => write_json(&report, out),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), AppError> {
    match &cli.command {
        Command::Test(a) => run_test_cmd(a, out),
        Command::Feasibility(a) => run_feasibility(a, out),
        Command::Power(a) => run_power(a, out),
        Command::Simulate(a) => run_simulate(a, out),
        Command::Analyze(a) => run_analyze(a, out),
    }
}
