//! Named distributions for scenarios and the `power` command, written as
//! `normal(mean,sd)`, `uniform(low,high)`, `exponential(rate)` or
//! `poisson(lambda)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal as NormalDist, Poisson, Uniform as UniformDist};
use rankguard_core::{ContinuousDistribution, Exponential, Normal, Support, Uniform};

use crate::error::InputError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpec {
    Normal { mean: f64, sd: f64 },
    Uniform { low: f64, high: f64 },
    Exponential { rate: f64 },
    Poisson { lambda: f64 },
}

pub const DIST_NAMES: &str = "normal(mean,sd), uniform(low,high), exponential(rate), poisson(lambda)";

impl DistSpec {
    fn validate(self) -> Result<Self, InputError> {
        let bad = |why: &str| Err(InputError::new("distribution", format!("{self}: {why}")));
        match self {
            DistSpec::Normal { mean, sd } if !mean.is_finite() || !(sd > 0.0 && sd.is_finite()) => {
                bad("need a finite mean and sd > 0")
            }
            DistSpec::Uniform { low, high } if !(low.is_finite() && high.is_finite() && low < high) => {
                bad("need finite low < high")
            }
            DistSpec::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => bad("need rate > 0"),
            DistSpec::Poisson { lambda } if !(lambda > 0.0 && lambda.is_finite()) => bad("need lambda > 0"),
            _ => Ok(self),
        }
    }

    /// `n` independent draws.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match *self {
            DistSpec::Normal { mean, sd } => {
                let d = NormalDist::new(mean, sd).expect("validated");
                (0..n).map(|_| d.sample(rng)).collect()
            }
            DistSpec::Uniform { low, high } => {
                let d = UniformDist::new(low, high).expect("validated");
                (0..n).map(|_| d.sample(rng)).collect()
            }
            DistSpec::Exponential { rate } => {
                let d = Exp::new(rate).expect("validated");
                (0..n).map(|_| d.sample(rng)).collect()
            }
            DistSpec::Poisson { lambda } => {
                let d = Poisson::new(lambda).expect("validated");
                (0..n).map(|_| d.sample(rng)).collect()
            }
        }
    }

    /// `(lower, upper)` ends of the support; `None` where unbounded.
    pub fn support_ends(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            DistSpec::Normal { .. } => (None, None),
            DistSpec::Uniform { low, high } => (Some(low), Some(high)),
            DistSpec::Exponential { .. } | DistSpec::Poisson { .. } => (Some(0.0), None),
        }
    }

    /// The smallest closed interval holding the supports of both
    /// distributions.
    pub fn joint_support(a: &DistSpec, b: &DistSpec) -> Support {
        let (la, ua) = a.support_ends();
        let (lb, ub) = b.support_ends();
        let lower = la.zip(lb).map(|(p, q)| p.min(q));
        let upper = ua.zip(ub).map(|(p, q)| p.max(q));
        Support::new(lower, upper).expect("ordered ends")
    }

    /// The distribution as a continuous `(cdf, pdf)` pair; `None` for
    /// discrete ones.
    pub fn continuous(&self) -> Option<Box<dyn ContinuousDistribution + Send + Sync>> {
        Some(match *self {
            DistSpec::Normal { mean, sd } => Box::new(Normal::new(mean, sd).ok()?),
            DistSpec::Uniform { low, high } => Box::new(Uniform::new(low, high).ok()?),
            DistSpec::Exponential { rate } => Box::new(Exponential::new(rate).ok()?),
            DistSpec::Poisson { .. } => return None,
        })
    }
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Normal { mean, sd } => write!(f, "normal({mean},{sd})"),
            DistSpec::Uniform { low, high } => write!(f, "uniform({low},{high})"),
            DistSpec::Exponential { rate } => write!(f, "exponential({rate})"),
            DistSpec::Poisson { lambda } => write!(f, "poisson({lambda})"),
        }
    }
}

impl FromStr for DistSpec {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err =
            || InputError::new("distribution", format!("cannot parse {s:?}; expected one of {DIST_NAMES}"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(err)?;
        let body = s[open + 1..].strip_suffix(')').ok_or_else(err)?;
        let name = s[..open].trim().to_ascii_lowercase();
        let args: Vec<f64> =
            body.split(',').map(|a| a.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| err())?;
        let spec = match (name.as_str(), args.as_slice()) {
            ("normal", &[mean, sd]) => DistSpec::Normal { mean, sd },
            ("uniform", &[low, high]) => DistSpec::Uniform { low, high },
            ("exponential", &[rate]) => DistSpec::Exponential { rate },
            ("poisson", &[lambda]) => DistSpec::Poisson { lambda },
            _ => return Err(err()),
        };
        spec.validate()
    }
}
