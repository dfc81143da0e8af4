//! Serializable views of test, feasibility, power and analysis results.
//!
//! Exact quantities (statistic bounds, variances) are written as strings:
//! half-integers as decimals (`"12.5"`) and rationals as `"num/den"`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use rankguard_core::{Alternative, Decision, FeasibilityReport, HalfInt, Rational, TestReport, VarianceUsed};

use crate::error::InputError;

pub const ALTERNATIVE_NAMES: &str = "two_sided, greater, less";

pub fn parse_alternative(text: &str) -> Result<Alternative, InputError> {
    match text.trim() {
        "two_sided" | "two-sided" => Ok(Alternative::TwoSided),
        "greater" | "x_greater" => Ok(Alternative::XGreater),
        "less" | "x_less" => Ok(Alternative::XLess),
        other => Err(InputError::new(
            "alternative",
            format!("unknown alternative {other:?}; valid: {ALTERNATIVE_NAMES}"),
        )),
    }
}

pub fn alternative_name(a: Alternative) -> &'static str {
    match a {
        Alternative::TwoSided => "two_sided",
        Alternative::XGreater => "greater",
        Alternative::XLess => "less",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionName {
    Significant,
    NotSignificant,
    InconclusiveDataDependent,
}

impl From<Decision> for DecisionName {
    fn from(d: Decision) -> Self {
        match d {
            Decision::Significant => DecisionName::Significant,
            Decision::NotSignificant => DecisionName::NotSignificant,
            Decision::InconclusiveDataDependent => DecisionName::InconclusiveDataDependent,
        }
    }
}

impl DecisionName {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionName::Significant => "significant",
            DecisionName::NotSignificant => "not_significant",
            DecisionName::InconclusiveDataDependent => "inconclusive_data_dependent",
        }
    }
}

pub fn fraction(r: Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn half_int(h: HalfInt) -> String {
    h.to_f64().to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarianceDto {
    Untied { sigma2: String },
    Bounds { sigma2_min: String, sigma2_max: String, d_max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReportDto {
    pub decision: DecisionName,
    pub p_min: f64,
    pub p_max: f64,
    pub w_min: String,
    pub w_max: String,
    pub mu: String,
    pub n: usize,
    pub m: usize,
    pub n_obs_x: usize,
    pub n_obs_y: usize,
    pub condition_same_sign: bool,
    pub alpha: f64,
    pub alternative: String,
    pub variance: VarianceDto,
}

impl From<&TestReport> for TestReportDto {
    fn from(r: &TestReport) -> Self {
        let b = &r.w_bounds;
        TestReportDto {
            decision: r.decision.into(),
            p_min: r.p_min,
            p_max: r.p_max,
            w_min: half_int(b.w_min),
            w_max: half_int(b.w_max),
            mu: half_int(b.mu()),
            n: b.n,
            m: b.m,
            n_obs_x: b.n_obs_x,
            n_obs_y: b.n_obs_y,
            condition_same_sign: r.condition_same_sign,
            alpha: r.alpha,
            alternative: alternative_name(r.alternative).to_string(),
            variance: match r.variance_used {
                VarianceUsed::Untied(s) => VarianceDto::Untied { sigma2: fraction(s) },
                VarianceUsed::Bounds(v) => VarianceDto::Bounds {
                    sigma2_min: fraction(v.sigma2_min),
                    sigma2_max: fraction(v.sigma2_max),
                    d_max: v.d_max,
                },
            },
        }
    }
}

impl TestReportDto {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "decision: {}", self.decision.as_str());
        let _ = writeln!(s, "p-value range: [{:.6}, {:.6}]", self.p_min, self.p_max);
        let _ = writeln!(s, "W range: [{}, {}] (null mean {})", self.w_min, self.w_max, self.mu);
        let _ = writeln!(
            s,
            "sizes: x {}/{} observed, y {}/{} observed",
            self.n_obs_x, self.n, self.n_obs_y, self.m
        );
        match &self.variance {
            VarianceDto::Untied { sigma2 } => {
                let _ = writeln!(s, "variance: untied {sigma2}");
            }
            VarianceDto::Bounds { sigma2_min, sigma2_max, d_max } => {
                let _ = writeln!(s, "variance: [{sigma2_min}, {sigma2_max}] (largest tie {d_max})");
            }
        }
        let _ = writeln!(s, "same sign: {}", self.condition_same_sign);
        let _ = writeln!(s, "alternative: {}, alpha: {}", self.alternative, self.alpha);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityDto {
    pub n: usize,
    pub m: usize,
    pub n_obs_x: usize,
    pub n_obs_y: usize,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub feasible: bool,
}

impl FeasibilityDto {
    pub fn new(
        n: usize,
        m: usize,
        n_obs_x: usize,
        n_obs_y: usize,
        alpha: f64,
        r: &FeasibilityReport,
    ) -> Self {
        FeasibilityDto { n, m, n_obs_x, n_obs_y, alpha, lhs: r.lhs, rhs: r.rhs, feasible: r.feasible }
    }

    pub fn to_text(&self) -> String {
        format!("feasible: {}\nn'm'/(nm) = {:.6}, threshold = {:.6}\n", self.feasible, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerDto {
    pub dist_x: String,
    pub dist_y: String,
    pub n: usize,
    pub m: usize,
    pub s: f64,
    pub alpha: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub power: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub limit: Option<String>,
}

impl PowerDto {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "power: {:.4}\np1 = {:.6}, p2 = {:.6}, p3 = {:.6}\n",
            self.power, self.p1, self.p2, self.p3
        );
        if let Some(limit) = &self.limit {
            let _ = writeln!(s, "limit as n, m grow: {limit}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDto {
    pub group: String,
    pub n_total: usize,
    pub n_missing: usize,
    pub control_total: usize,
    pub control_missing: usize,
    pub test: TestReportDto,
    /// Classical p-value after dropping missing values.
    pub p_ignore: f64,
    pub feasibility: FeasibilityDto,
    /// Holm-adjusted `p_max`, when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_max_holm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub control: String,
    pub alternative: String,
    pub alpha: f64,
    pub comparisons: Vec<ComparisonDto>,
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "control: {} ({}, alpha {})", self.control, self.alternative, self.alpha);
        let _ = writeln!(
            s,
            "{:<16} {:>9} {:>11} {:>11} {:>11} {:>11} {:>9}  decision",
            "group", "missing", "p_min", "p_max", "p_max_holm", "p_ignore", "feasible"
        );
        for c in &self.comparisons {
            let _ = writeln!(
                s,
                "{:<16} {:>9} {:>11.4e} {:>11.4e} {:>11} {:>11.4e} {:>9}  {}",
                c.group,
                format!("{}/{}", c.n_missing, c.n_total),
                c.test.p_min,
                c.test.p_max,
                c.p_max_holm.map_or_else(|| "-".to_string(), |p| format!("{p:.4e}")),
                c.p_ignore,
                c.feasibility.feasible,
                c.test.decision.as_str()
            );
        }
        s
    }
}
