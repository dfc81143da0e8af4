//! Missingness mechanisms applied to simulated samples.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rankguard_core::Sample;

use crate::error::InputError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mechanism {
    /// A fixed number `floor(s·n)` of values, chosen uniformly.
    Mcar,
    /// Each positive value independently with probability
    /// `q = min(1, s·n / #positives)`; other values are never missing.
    MnarPositive,
}

impl Mechanism {
    pub const NAMES: &'static str = "mcar, mnar_positive";

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Mcar => "mcar",
            Mechanism::MnarPositive => "mnar_positive",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mechanism {
    type Err = InputError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "mcar" => Ok(Mechanism::Mcar),
            "mnar_positive" => Ok(Mechanism::MnarPositive),
            other => Err(InputError::new(
                "mechanism",
                format!("unknown mechanism {other:?}; valid: {}", Mechanism::NAMES),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AppliesTo {
    #[default]
    Both,
    XOnly,
    YOnly,
}

impl FromStr for AppliesTo {
    type Err = InputError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "both" => Ok(AppliesTo::Both),
            "x_only" => Ok(AppliesTo::XOnly),
            "y_only" => Ok(AppliesTo::YOnly),
            other => Err(InputError::new(
                "applies_to",
                format!("unknown value {other:?}; valid: both, x_only, y_only"),
            )),
        }
    }
}

/// Which mechanism each arm is subject to, and the target proportion `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissingnessSpec {
    pub x: Option<Mechanism>,
    pub y: Option<Mechanism>,
    pub s: f64,
}

impl MissingnessSpec {
    pub fn new(mechanism: Mechanism, s: f64, applies_to: AppliesTo) -> Result<Self, InputError> {
        let (x, y) = match applies_to {
            AppliesTo::Both => (Some(mechanism), Some(mechanism)),
            AppliesTo::XOnly => (Some(mechanism), None),
            AppliesTo::YOnly => (None, Some(mechanism)),
        };
        MissingnessSpec::per_arm(x, y, s)
    }

    pub fn per_arm(x: Option<Mechanism>, y: Option<Mechanism>, s: f64) -> Result<Self, InputError> {
        check_fraction(s)?;
        Ok(MissingnessSpec { x, y, s })
    }

    pub fn none() -> Self {
        MissingnessSpec { x: None, y: None, s: 0.0 }
    }

    /// `mcar` when both arms share a mechanism, otherwise `x/y`, e.g.
    /// `mcar/mnar_positive` or `mcar/none`.
    pub fn label(&self) -> String {
        let name = |m: Option<Mechanism>| m.map_or("none", Mechanism::name);
        if self.x == self.y {
            name(self.x).to_string()
        } else {
            format!("{}/{}", name(self.x), name(self.y))
        }
    }
}

fn check_fraction(s: f64) -> Result<(), InputError> {
    if (0.0..1.0).contains(&s) {
        Ok(())
    } else {
        Err(InputError::new("s", format!("missing proportion must lie in [0, 1), got {s}")))
    }
}

/// Number of values MCAR removes from `n`: `s·n` rounded down, with
/// products within float noise of an integer taken as that integer.
pub fn mcar_count(n: usize, s: f64) -> usize {
    let r = s * n as f64;
    ((r + 1e-9 * r.max(1.0)).floor() as usize).min(n)
}

/// Removes exactly [`mcar_count`] values chosen uniformly without
/// replacement.
pub fn apply_mcar<R: Rng + ?Sized>(values: &[f64], s: f64, rng: &mut R) -> Result<Sample, InputError> {
    check_fraction(s)?;
    let k = mcar_count(values.len(), s);
    let mut drop = vec![false; values.len()];
    for i in index::sample(rng, values.len(), k) {
        drop[i] = true;
    }
    let kept = values.iter().zip(&drop).filter(|(_, d)| !**d).map(|(v, _)| *v).collect();
    finish(kept, k)
}

/// Deletes each positive value independently with probability
/// `min(1, s·n / #positives)`.
pub fn apply_mnar_positive<R: Rng + ?Sized>(
    values: &[f64],
    s: f64,
    rng: &mut R,
) -> Result<Sample, InputError> {
    check_fraction(s)?;
    let positives = values.iter().filter(|v| **v > 0.0).count();
    let q = if positives == 0 { 0.0 } else { (s * values.len() as f64 / positives as f64).min(1.0) };
    let mut kept = Vec::with_capacity(values.len());
    let mut missing = 0;
    for &v in values {
        // one draw per positive value keeps the stream layout fixed
        if v > 0.0 && rng.random::<f64>() < q {
            missing += 1;
        } else {
            kept.push(v);
        }
    }
    finish(kept, missing)
}

fn finish(kept: Vec<f64>, missing: usize) -> Result<Sample, InputError> {
    Sample::new(kept, missing).map_err(|e| InputError::new("values", e.to_string()))
}

/// Applies `mechanism` (or nothing) to `values`.
pub fn apply<R: Rng + ?Sized>(
    mechanism: Option<Mechanism>,
    values: &[f64],
    s: f64,
    rng: &mut R,
) -> Result<Sample, InputError> {
    match mechanism {
        None => finish(values.to_vec(), 0),
        Some(Mechanism::Mcar) => apply_mcar(values, s, rng),
        Some(Mechanism::MnarPositive) => apply_mnar_positive(values, s, rng),
    }
}
