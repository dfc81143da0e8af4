//! Attainable ranges of the WMW statistic, its null variance and its p-value
//! over every way the missing observations could be filled in.

use crate::normal::two_sided_tail;
use crate::rank::{
    cube_minus, merge_sorted, pair_score_sorted, profile_of_sorted, rank_sum, variance_from_tie_sum, HalfInt,
    Rational, Sample, Support,
};
use crate::{Error, Result};

/// Smallest and largest WMW statistic compatible with the observed data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatBounds {
    pub w_min: HalfInt,
    pub w_max: HalfInt,
    pub n: usize,
    pub m: usize,
    pub n_obs_x: usize,
    pub n_obs_y: usize,
}

impl StatBounds {
    /// Null mean `nm/2`.
    pub fn mu(&self) -> HalfInt {
        HalfInt::from_twice((self.n * self.m) as i64)
    }

    pub fn width(&self) -> HalfInt {
        self.w_max - self.w_min
    }

    /// Both endpoints sit on the same side of the null mean (either may
    /// touch it).
    pub fn same_sign(&self) -> bool {
        let mu = self.mu();
        (self.w_min <= mu && self.w_max <= mu) || (self.w_min >= mu && self.w_max >= mu)
    }

    pub fn contains(&self, w: HalfInt) -> bool {
        self.w_min <= w && w <= self.w_max
    }
}

/// Observed values that sit exactly on an attainable endpoint of the
/// support. Counts are zero when the endpoint does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BoundaryCounts {
    pub x_at_a: usize,
    pub x_at_b: usize,
    pub y_at_a: usize,
    pub y_at_b: usize,
}

impl BoundaryCounts {
    pub fn new(x: &Sample, y: &Sample, support: &Support) -> Self {
        let count =
            |values: &[f64], end: Option<f64>| end.map_or(0, |e| values.iter().filter(|&&v| v == e).count());
        BoundaryCounts {
            x_at_a: count(x.observed(), support.lower()),
            x_at_b: count(x.observed(), support.upper()),
            y_at_a: count(y.observed(), support.lower()),
            y_at_b: count(y.observed(), support.upper()),
        }
    }
}

/// Range of the null variance over completions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarBounds {
    pub sigma2_min: Rational,
    pub sigma2_max: Rational,
    /// Largest tie group any completion can produce.
    pub d_max: usize,
}

/// Two-sided p-value range over completions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PValueBounds {
    pub p_low: f64,
    pub p_high: f64,
    /// `W_min − μ` and `W_max − μ` are both nonnegative or both negative.
    pub same_sign: bool,
}

fn check_sizes(x_obs: usize, y_obs: usize, n: usize, m: usize) -> Result<()> {
    if x_obs > n {
        return Err(Error::CountMismatch { name: "x", observed: x_obs, total: n });
    }
    if y_obs > m {
        return Err(Error::CountMismatch { name: "y", observed: y_obs, total: m });
    }
    Ok(())
}

fn has_adjacent_ties(sorted: &[f64]) -> bool {
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Minimum and maximum rank sum of the full `X` sample over all real
/// completions; observed values must be pairwise distinct.
pub fn rank_sum_bounds_distinct(
    x_obs: &[f64],
    y_obs: &[f64],
    n: usize,
    m: usize,
) -> Result<(HalfInt, HalfInt)> {
    if x_obs.is_empty() {
        return Err(Error::Empty("x"));
    }
    if y_obs.is_empty() {
        return Err(Error::Empty("y"));
    }
    check_sizes(x_obs.len(), y_obs.len(), n, m)?;
    let x = Sample::complete(x_obs.to_vec())?;
    let y = Sample::complete(y_obs.to_vec())?;
    let pool = merge_sorted(x.observed(), y.observed());
    if has_adjacent_ties(&pool) {
        return Err(Error::TiesPresent);
    }
    let observed_sum = rank_sum(x.observed(), &pool)?;
    let (n, m) = (n as i64, m as i64);
    let (nx, ny) = (x_obs.len() as i64, y_obs.len() as i64);
    // both numerators are even, so these are exact halves
    let low = observed_sum + HalfInt::from_twice((n - nx) * (n + nx + 1));
    let high = observed_sum + HalfInt::from_twice(n * (n + 2 * m + 1) - nx * (nx + 2 * ny + 1));
    Ok((low, high))
}

/// Bounds `[W', W' + nm − n'm']` with `W'` computed on the observed values.
/// Valid whenever missing values can fall strictly below and above every
/// observed value (an open support), ties among observed values included.
pub fn stat_bounds_open(x: &Sample, y: &Sample) -> StatBounds {
    let (n, m) = (x.total(), y.total());
    let (nx, ny) = (x.n_observed(), y.n_observed());
    let w_obs = HalfInt::from_twice(pair_score_sorted(x.observed(), y.observed()));
    StatBounds {
        w_min: w_obs,
        w_max: w_obs + HalfInt::from_int((n * m - nx * ny) as i64),
        n,
        m,
        n_obs_x: nx,
        n_obs_y: ny,
    }
}

/// Bounds for pairwise-distinct observed data on an unbounded support.
pub fn stat_bounds_distinct(x: &Sample, y: &Sample) -> Result<StatBounds> {
    if x.n_observed() == 0 {
        return Err(Error::Empty("observed x"));
    }
    if y.n_observed() == 0 {
        return Err(Error::Empty("observed y"));
    }
    let pool = merge_sorted(x.observed(), y.observed());
    if has_adjacent_ties(&pool) {
        return Err(Error::TiesPresent);
    }
    Ok(stat_bounds_open(x, y))
}

/// Bounds allowing ties and a support with attainable endpoints:
/// `W' + T₁/2 ≤ W ≤ W' + (nm − n'm') − T₂/2` with
/// `T₁ = |∂Y'_a|(n − n') + |∂X'_b|(m − m')` and
/// `T₂ = |∂X'_a|(m − m') + |∂Y'_b|(n − n')`.
///
/// Missing `x` values pushed to `a` tie with the observed `y` values at `a`
/// (and likewise at `b`), which is where the half-pair corrections come from.
pub fn stat_bounds_general(x: &Sample, y: &Sample, support: &Support) -> Result<StatBounds> {
    x.check_support(support)?;
    y.check_support(support)?;
    let open = stat_bounds_open(x, y);
    let c = BoundaryCounts::new(x, y, support);
    let (dx, dy) = (x.n_missing() as i64, y.n_missing() as i64);
    let t1 = c.y_at_a as i64 * dx + c.x_at_b as i64 * dy;
    let t2 = c.x_at_a as i64 * dy + c.y_at_b as i64 * dx;
    Ok(StatBounds {
        w_min: open.w_min + HalfInt::from_twice(t1),
        w_max: open.w_max - HalfInt::from_twice(t2),
        ..open
    })
}

/// Range of the tie-corrected null variance over completions.
///
/// The upper end keeps the observed tie structure (missing values all new
/// and distinct); the lower end piles every missing value onto the largest
/// observed tie group.
pub fn variance_bounds(x: &Sample, y: &Sample) -> Result<VarBounds> {
    if x.n_observed() + y.n_observed() == 0 {
        return Err(Error::Empty("observed pool"));
    }
    let (n, m) = (x.total(), y.total());
    let pool = merge_sorted(x.observed(), y.observed());
    let profile = profile_of_sorted(&pool);
    let observed_sum = profile.tie_sum();
    let largest = profile.largest();
    let d_max = largest + x.n_missing() + y.n_missing();
    let concentrated = observed_sum - cube_minus(largest) + cube_minus(d_max);
    Ok(VarBounds {
        sigma2_min: variance_from_tie_sum(n, m, concentrated),
        sigma2_max: variance_from_tie_sum(n, m, observed_sum),
        d_max,
    })
}

pub(crate) fn rational_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub(crate) fn sqrt_rational(r: Rational) -> f64 {
    libm::sqrt(rational_to_f64(r))
}

/// Two-sided p-value bounds over every completion, from the statistic
/// bounds and variance bounds of the same samples (null mean `nm/2`).
///
/// With both endpoints above the mean, `p ∈ [p₃, p₁]` where `p₁` standardises
/// `W_min` by `σ_max` and `p₃` standardises `W_max` by `σ_min`; mirrored
/// below the mean; otherwise `p ∈ [min(p₃, p₄), 1]`.
pub fn p_value_bounds(bounds: &StatBounds, var: &VarBounds) -> Result<PValueBounds> {
    if var.sigma2_min <= Rational::from_integer(0) {
        return Err(Error::Degenerate("minimum attainable variance is zero"));
    }
    let mu = bounds.mu();
    let lo = (bounds.w_min - mu).to_f64();
    let hi = (bounds.w_max - mu).to_f64();
    let s_max = sqrt_rational(var.sigma2_max);
    let s_min = sqrt_rational(var.sigma2_min);
    let p1 = two_sided_tail(lo / s_max);
    let p2 = two_sided_tail(hi / s_max);
    let p3 = two_sided_tail(hi / s_min);
    let p4 = two_sided_tail(lo / s_min);
    Ok(if lo >= 0.0 && hi >= 0.0 {
        PValueBounds { p_low: p3, p_high: p1, same_sign: true }
    } else if lo < 0.0 && hi < 0.0 {
        PValueBounds { p_low: p4, p_high: p2, same_sign: true }
    } else {
        PValueBounds { p_low: p3.min(p4), p_high: 1.0, same_sign: false }
    })
}
