//! Control-versus-each-group analysis with a Holm correction across the
//! family of comparisons.

use rankguard_core::{
    feasibility, holm_adjust, robust_test_distinct, robust_test_general, strategy_test, tie_profile,
    Alternative, Sample, Strategy, Support, TestReport,
};

use crate::dataset::DatasetTable;
use crate::error::{AppError, InputError};
use crate::report::{alternative_name, AnalysisReport, ComparisonDto, FeasibilityDto, TestReportDto};
use crate::rng::{stream, Role};

/// How ties among observed values are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieMode {
    /// Tie-aware test when the observed pool has ties or a finite support
    /// is given, otherwise the untied one.
    #[default]
    Auto,
    On,
    Off,
}

impl std::str::FromStr for TieMode {
    type Err = InputError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "auto" => Ok(TieMode::Auto),
            "on" => Ok(TieMode::On),
            "off" => Ok(TieMode::Off),
            other => Err(InputError::new("ties", format!("unknown value {other:?}; valid: auto, on, off"))),
        }
    }
}

/// Runs the robust test on `x` against `y`, picking the tie-aware variant per
/// `ties`.
pub fn run_test(
    x: &Sample,
    y: &Sample,
    support: &Support,
    ties: TieMode,
    alpha: f64,
    alternative: Alternative,
) -> rankguard_core::Result<TestReport> {
    let general = match ties {
        TieMode::On => true,
        TieMode::Off => false,
        TieMode::Auto => {
            let mut pool = x.observed().to_vec();
            pool.extend_from_slice(y.observed());
            support.lower().is_some() || support.upper().is_some() || tie_profile(&pool).has_ties()
        }
    };
    if general {
        robust_test_general(x, y, support, alpha, alternative)
    } else {
        robust_test_distinct(x, y, alpha, alternative)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    pub control: String,
    pub alternative: Alternative,
    pub alpha: f64,
    pub holm: bool,
    pub ties: TieMode,
}

/// Each non-control group is the `x` arm and the control the `y` arm, so
/// `greater` asks whether the group exceeds the control.
pub fn analyze(table: &DatasetTable, opts: &AnalysisOptions) -> Result<AnalysisReport, AppError> {
    if table.groups.len() < 2 {
        return Err(
            InputError::new("data", format!("need at least 2 groups, found {}", table.groups.len())).into()
        );
    }
    let control = table.group(&opts.control).ok_or_else(|| {
        let names: Vec<&str> = table.groups.iter().map(|g| g.name.as_str()).collect();
        InputError::new("control", format!("no group {:?}; groups are {}", opts.control, names.join(", ")))
    })?;
    let y = control.to_sample()?;
    let mut comparisons = Vec::new();
    for g in table.groups.iter().filter(|g| g.name != opts.control) {
        let x = g.to_sample()?;
        let context = format!("group {}", g.name);
        let report = run_test(&x, &y, &Support::unbounded(), opts.ties, opts.alpha, opts.alternative)
            .map_err(|e| AppError::core(&context, e))?;
        // case deletion uses no randomness; the stream is only a formality
        let ignore =
            strategy_test(&x, &y, Strategy::Ignore, opts.alternative, &mut stream(0, 0, Role::Imputation))
                .map_err(|e| AppError::core(&context, e))?;
        let feas = feasibility(x.total(), y.total(), x.n_observed(), y.n_observed(), opts.alpha)
            .map_err(|e| AppError::core(&context, e))?;
        comparisons.push(ComparisonDto {
            group: g.name.clone(),
            n_total: x.total(),
            n_missing: x.n_missing(),
            control_total: y.total(),
            control_missing: y.n_missing(),
            test: TestReportDto::from(&report),
            p_ignore: ignore.p,
            feasibility: FeasibilityDto::new(
                x.total(),
                y.total(),
                x.n_observed(),
                y.n_observed(),
                opts.alpha,
                &feas,
            ),
            p_max_holm: None,
        });
    }
    if opts.holm {
        let raw: Vec<f64> = comparisons.iter().map(|c| c.test.p_max).collect();
        let adjusted = holm_adjust(&raw).map_err(|e| AppError::core("holm", e))?;
        for (c, a) in comparisons.iter_mut().zip(adjusted) {
            c.p_max_holm = Some(a);
        }
    }
    Ok(AnalysisReport {
        control: opts.control.clone(),
        alternative: alternative_name(opts.alternative).to_string(),
        alpha: opts.alpha,
        comparisons,
    })
}
