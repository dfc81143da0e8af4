//! The classical normal-approximation WMW test and the missing-data
//! strategies it is usually paired with: case deletion, mean imputation and
//! hot-deck imputation.
//!
//! No continuity correction is applied.

use alloc::vec::Vec;

use rand::Rng;

use crate::bounds::sqrt_rational;
use crate::normal::{normal_cdf, two_sided_tail};
use crate::rank::{
    merge_sorted, pair_score_sorted, profile_of_sorted, untied_variance, variance_from_tie_sum, HalfInt,
    Rational, Sample,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Alternative {
    #[default]
    TwoSided,
    /// `X` tends to take larger values than `Y` (large `W(X, Y)`).
    XGreater,
    /// `X` tends to take smaller values than `Y` (small `W(X, Y)`).
    XLess,
}

/// Normal approximation to the null distribution of `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussianApprox {
    pub mu: HalfInt,
    pub sigma2: Rational,
}

impl GaussianApprox {
    pub fn new(n: usize, m: usize, sigma2: Rational) -> Result<Self> {
        if sigma2 <= Rational::from_integer(0) {
            return Err(Error::Degenerate("null variance is zero (all pooled values tied)"));
        }
        Ok(GaussianApprox { mu: HalfInt::from_twice((n * m) as i64), sigma2 })
    }

    /// Approximation without ties.
    pub fn untied(n: usize, m: usize) -> Result<Self> {
        GaussianApprox::new(n, m, untied_variance(n, m))
    }

    pub fn sigma(&self) -> f64 {
        sqrt_rational(self.sigma2)
    }

    pub fn standardize(&self, w: HalfInt) -> f64 {
        (w - self.mu).to_f64() / self.sigma()
    }

    /// p-value of an observed statistic. The two-sided value is
    /// `1 − |1 − 2Φ(z)|`, evaluated as `2Φ(−|z|)`.
    pub fn p_value(&self, w: HalfInt, alternative: Alternative) -> f64 {
        let z = self.standardize(w);
        match alternative {
            Alternative::TwoSided => two_sided_tail(z),
            Alternative::XGreater => normal_cdf(-z),
            Alternative::XLess => normal_cdf(z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WmwOutcome {
    pub w: HalfInt,
    pub p: f64,
    pub approx: GaussianApprox,
}

fn sorted_checked(values: &[f64], name: &'static str) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::Empty(name));
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Normal-approximation WMW test on fully observed data.
pub fn wmw_test(x: &[f64], y: &[f64], alternative: Alternative, tie_correction: bool) -> Result<WmwOutcome> {
    let xs = sorted_checked(x, "x")?;
    let ys = sorted_checked(y, "y")?;
    let (n, m) = (xs.len(), ys.len());
    let w = HalfInt::from_twice(pair_score_sorted(&xs, &ys));
    let pool = merge_sorted(&xs, &ys);
    let profile = profile_of_sorted(&pool);
    if profile.distinct() == 1 {
        return Err(Error::Degenerate("all pooled values are identical"));
    }
    let sigma2 =
        if tie_correction { variance_from_tie_sum(n, m, profile.tie_sum()) } else { untied_variance(n, m) };
    let approx = GaussianApprox::new(n, m, sigma2)?;
    Ok(WmwOutcome { w, p: approx.p_value(w, alternative), approx })
}

/// Observed values followed by `n_missing` copies of their mean.
pub fn impute_mean(s: &Sample) -> Result<Vec<f64>> {
    if s.n_observed() == 0 {
        return Err(Error::Empty("observed values to impute from"));
    }
    let obs = s.observed();
    let mean = obs.iter().sum::<f64>() / obs.len() as f64;
    let mut out = obs.to_vec();
    out.extend(core::iter::repeat_n(mean, s.n_missing()));
    Ok(out)
}

/// Observed values followed by `n_missing` donors drawn uniformly with
/// replacement from the same sample's observed values.
pub fn impute_hot_deck<R: Rng + ?Sized>(s: &Sample, rng: &mut R) -> Result<Vec<f64>> {
    if s.n_observed() == 0 {
        return Err(Error::Empty("observed values to impute from"));
    }
    let obs = s.observed();
    let mut out = obs.to_vec();
    out.extend((0..s.n_missing()).map(|_| obs[rng.random_range(0..obs.len())]));
    Ok(out)
}

/// How a conventional analysis deals with the missing values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy<'a> {
    /// Case deletion: test the observed values only.
    Ignore,
    MeanImpute,
    HotDeck,
    /// Test the true complete data (simulation only).
    Oracle {
        x: &'a [f64],
        y: &'a [f64],
    },
}

/// Runs the classical test (tie correction on) after applying `strategy`.
pub fn strategy_test<R: Rng + ?Sized>(
    x: &Sample,
    y: &Sample,
    strategy: Strategy<'_>,
    alternative: Alternative,
    rng: &mut R,
) -> Result<WmwOutcome> {
    match strategy {
        Strategy::Ignore => wmw_test(x.observed(), y.observed(), alternative, true),
        Strategy::MeanImpute => wmw_test(&impute_mean(x)?, &impute_mean(y)?, alternative, true),
        Strategy::HotDeck => {
            let xs = impute_hot_deck(x, rng)?;
            let ys = impute_hot_deck(y, rng)?;
            wmw_test(&xs, &ys, alternative, true)
        }
        Strategy::Oracle { x: xc, y: yc } => {
            if xc.len() != x.total() {
                return Err(Error::CountMismatch { name: "oracle x", observed: xc.len(), total: x.total() });
            }
            if yc.len() != y.total() {
                return Err(Error::CountMismatch { name: "oracle y", observed: yc.len(), total: y.total() });
            }
            wmw_test(xc, yc, alternative, true)
        }
    }
}
