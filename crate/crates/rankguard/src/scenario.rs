//! Scenario files: TOML `key = value` configurations for `simulate`.
//!
//! ```toml
//! dist_x = "normal(0,1)"
//! dist_y = "normal(1,1)"
//! n = [50, 100]            # one value or a list; lists set m = n
//! s = [0.0, 0.05, 0.1]
//! mechanism = "mcar"       # or mechanism_x / mechanism_y ("none" allowed)
//! applies_to = "both"
//! methods = ["proposed", "ignore"]
//! alpha = 0.05
//! trials = 1000
//! seed = 42
//! ```

use serde::Deserialize;

use crate::dist::DistSpec;
use crate::error::InputError;
use crate::missing::{AppliesTo, Mechanism, MissingnessSpec};
use crate::report::parse_alternative;
use crate::sim::{grid_cells, Method, ScenarioSpec};

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Float(f64),
}

impl Num {
    fn to_f64(self) -> f64 {
        match self {
            Num::Int(i) => i as f64,
            Num::Float(f) => f,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    dist_x: String,
    dist_y: String,
    n: OneOrMany<usize>,
    m: Option<usize>,
    #[serde(default)]
    s: Option<OneOrMany<Num>>,
    mechanism: Option<String>,
    applies_to: Option<String>,
    mechanism_x: Option<String>,
    mechanism_y: Option<String>,
    methods: Vec<String>,
    alpha: Option<Num>,
    alternative: Option<String>,
    trials: u64,
    seed: Option<u64>,
}

/// A parsed scenario: a base specification plus the sweep lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub base: ScenarioSpec,
    pub n_values: Vec<usize>,
    pub s_values: Vec<f64>,
}

fn arm_mechanism(text: &str) -> Result<Option<Mechanism>, InputError> {
    if text.trim() == "none" {
        Ok(None)
    } else {
        text.parse().map(Some)
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let raw: RawScenario =
            toml::from_str(text).map_err(|e| InputError::new("scenario", e.message().to_string()))?;
        let dist_x: DistSpec =
            raw.dist_x.parse().map_err(|e: InputError| InputError::new("dist_x", e.message))?;
        let dist_y: DistSpec =
            raw.dist_y.parse().map_err(|e: InputError| InputError::new("dist_y", e.message))?;
        let n_values = raw.n.into_vec();
        let s_values: Vec<f64> =
            raw.s.map_or(vec![0.0], |s| s.into_vec().into_iter().map(Num::to_f64).collect());
        let m = match (raw.m, n_values.as_slice()) {
            (Some(m), [_]) => m,
            (Some(_), _) => return Err(InputError::new("m", "m can only be given with a single n")),
            (None, [n, ..]) => *n,
            (None, []) => 0,
        };

        let per_arm = raw.mechanism_x.is_some() || raw.mechanism_y.is_some();
        let missingness = if per_arm {
            if raw.mechanism.is_some() || raw.applies_to.is_some() {
                return Err(InputError::new(
                    "mechanism",
                    "use either mechanism/applies_to or mechanism_x/mechanism_y",
                ));
            }
            let x = raw.mechanism_x.as_deref().map_or(Ok(None), arm_mechanism)?;
            let y = raw.mechanism_y.as_deref().map_or(Ok(None), arm_mechanism)?;
            MissingnessSpec { x, y, s: 0.0 }
        } else {
            match raw.mechanism.as_deref() {
                None | Some("none") => MissingnessSpec::none(),
                Some(name) => {
                    let applies: AppliesTo = raw.applies_to.as_deref().unwrap_or("both").parse()?;
                    MissingnessSpec::new(name.parse()?, 0.0, applies)?
                }
            }
        };
        let methods = raw.methods.iter().map(|m| m.parse()).collect::<Result<Vec<Method>, _>>()?;
        let alternative = match raw.alternative.as_deref() {
            Some(a) => parse_alternative(a)?,
            None => Default::default(),
        };
        let base = ScenarioSpec {
            dist_x,
            dist_y,
            n: n_values.first().copied().unwrap_or(0),
            m,
            missingness,
            methods,
            alpha: raw.alpha.map_or(0.05, Num::to_f64),
            alternative,
            trials: raw.trials,
            seed: raw.seed.unwrap_or(0),
        };
        let scenario = Scenario { base, n_values, s_values };
        for cell in scenario.cells() {
            cell.validate()?;
        }
        Ok(scenario)
    }

    /// Every cell of the sweep. A single `n` keeps the configured `m`.
    pub fn cells(&self) -> Vec<ScenarioSpec> {
        if let [n] = self.n_values.as_slice() {
            let mut base = self.base.clone();
            base.n = *n;
            return self
                .s_values
                .iter()
                .map(|&s| {
                    let mut c = base.clone();
                    c.missingness.s = s;
                    c
                })
                .collect();
        }
        grid_cells(&self.base, &self.n_values, &self.s_values)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.base.seed = seed;
        self
    }
}
