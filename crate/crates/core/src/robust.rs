//! The missing-data-robust WMW test: a result is declared significant only if
//! it would be significant under every completion of the missing values.
//!
//! Two-sided decisions follow the bounded-interval rule: both statistic
//! bounds must fall in the same rejection tail. One-sided decisions take the
//! worst case over the interval, which is the endpoint nearest the null.

use crate::bounds::{
    p_value_bounds, sqrt_rational, stat_bounds_general, stat_bounds_open, variance_bounds, StatBounds,
    VarBounds,
};
use crate::classical::{Alternative, GaussianApprox};
use crate::normal::{normal_cdf, normal_quantile, two_sided_tail};
use crate::rank::{merge_sorted, untied_variance, Rational, Sample, Support};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    /// Significant for every completion (`p_max < α`).
    Significant,
    /// Not significant for any completion (`p_min ≥ α`).
    NotSignificant,
    /// Some completions are significant and some are not.
    InconclusiveDataDependent,
}

impl Decision {
    fn from_range(p_min: f64, p_max: f64, alpha: f64) -> Self {
        if p_max < alpha {
            Decision::Significant
        } else if p_min < alpha {
            Decision::InconclusiveDataDependent
        } else {
            Decision::NotSignificant
        }
    }

    pub fn is_significant(self) -> bool {
        self == Decision::Significant
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceUsed {
    /// `nm(n+m+1)/12` for every completion.
    Untied(Rational),
    /// Tie-corrected variance range over completions.
    Bounds(VarBounds),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestReport {
    pub decision: Decision,
    pub p_min: f64,
    pub p_max: f64,
    pub w_bounds: StatBounds,
    pub condition_same_sign: bool,
    pub alpha: f64,
    pub alternative: Alternative,
    pub variance_used: VarianceUsed,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "alpha", value: alpha })
    }
}

/// Report for a comparison with an arm that has no observed values.
fn uninformative(
    w_bounds: StatBounds,
    alpha: f64,
    alternative: Alternative,
    variance_used: VarianceUsed,
) -> TestReport {
    TestReport {
        decision: Decision::NotSignificant,
        p_min: 1.0,
        p_max: 1.0,
        condition_same_sign: w_bounds.same_sign(),
        w_bounds,
        alpha,
        alternative,
        variance_used,
    }
}

/// Robust test assuming the support is open, so missing values can fall below
/// or above every observation, and using the untied null variance.
///
/// Ties among observed values are scored with midranks; the bounds stay
/// valid because missing values can still be placed strictly outside the
/// observed range.
pub fn robust_test_distinct(
    x: &Sample,
    y: &Sample,
    alpha: f64,
    alternative: Alternative,
) -> Result<TestReport> {
    check_alpha(alpha)?;
    let bounds = stat_bounds_open(x, y);
    let sigma2 = untied_variance(bounds.n, bounds.m);
    let used = VarianceUsed::Untied(sigma2);
    if x.n_observed() == 0 || y.n_observed() == 0 {
        return Ok(uninformative(bounds, alpha, alternative, used));
    }
    let approx = GaussianApprox::new(bounds.n, bounds.m, sigma2)?;
    let same_sign = bounds.same_sign();
    let (p_min, p_max) = match alternative {
        Alternative::TwoSided => {
            let p1 = approx.p_value(bounds.w_min, alternative);
            let p2 = approx.p_value(bounds.w_max, alternative);
            let p_max = if same_sign { p1.max(p2) } else { 1.0 };
            (p1.min(p2), p_max)
        }
        Alternative::XGreater => {
            (approx.p_value(bounds.w_max, alternative), approx.p_value(bounds.w_min, alternative))
        }
        Alternative::XLess => {
            (approx.p_value(bounds.w_min, alternative), approx.p_value(bounds.w_max, alternative))
        }
    };
    Ok(TestReport {
        decision: Decision::from_range(p_min, p_max, alpha),
        p_min,
        p_max,
        w_bounds: bounds,
        condition_same_sign: same_sign,
        alpha,
        alternative,
        variance_used: used,
    })
}

/// Robust test allowing ties and a support with attainable endpoints.
///
/// The rejection decision uses only `σ_max`; `σ_min` enters the reported
/// `p_min`.
pub fn robust_test_general(
    x: &Sample,
    y: &Sample,
    support: &Support,
    alpha: f64,
    alternative: Alternative,
) -> Result<TestReport> {
    check_alpha(alpha)?;
    let bounds = stat_bounds_general(x, y, support)?;
    if x.n_observed() == 0 || y.n_observed() == 0 {
        let used = match variance_bounds(x, y) {
            Ok(v) => VarianceUsed::Bounds(v),
            Err(_) => VarianceUsed::Untied(untied_variance(bounds.n, bounds.m)),
        };
        return Ok(uninformative(bounds, alpha, alternative, used));
    }
    let pool = merge_sorted(x.observed(), y.observed());
    if pool.first() == pool.last() {
        return Err(Error::Degenerate("every observed value is identical"));
    }
    let var = variance_bounds(x, y)?;
    let mu = bounds.mu();
    let s_max = sqrt_rational(var.sigma2_max);
    let s_min = sqrt_rational(var.sigma2_min);
    let lo = (bounds.w_min - mu).to_f64();
    let hi = (bounds.w_max - mu).to_f64();
    let same_sign = bounds.same_sign();

    let (p_min, p_max) = match alternative {
        Alternative::TwoSided => {
            let p1 = two_sided_tail(lo / s_max);
            let p2 = two_sided_tail(hi / s_max);
            let p_max = if same_sign { p1.max(p2) } else { 1.0 };
            let p_min = p_value_bounds(&bounds, &var)?.p_low;
            (p_min, p_max)
        }
        Alternative::XGreater | Alternative::XLess => {
            // extremes of (W - mu) / sigma over W in [w_min, w_max] and
            // sigma in [s_min, s_max]
            let z_low = if lo >= 0.0 { lo / s_max } else { lo / s_min };
            let z_high = if hi >= 0.0 { hi / s_min } else { hi / s_max };
            if alternative == Alternative::XGreater {
                (normal_cdf(-z_high), normal_cdf(-z_low))
            } else {
                (normal_cdf(z_low), normal_cdf(z_high))
            }
        }
    };
    Ok(TestReport {
        decision: Decision::from_range(p_min, p_max, alpha),
        p_min,
        p_max,
        w_bounds: bounds,
        condition_same_sign: same_sign,
        alpha,
        alternative,
        variance_used: VarianceUsed::Bounds(var),
    })
}

/// Whether a significant result is reachable at all given only the sample
/// sizes: `n'm'/(nm) ≥ 1/2 + Φ⁻¹(1 − α/2) √((n+m+1)/(12nm))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub feasible: bool,
}

pub fn feasibility(
    n: usize,
    m: usize,
    n_obs_x: usize,
    n_obs_y: usize,
    alpha: f64,
) -> Result<FeasibilityReport> {
    check_alpha(alpha)?;
    if n == 0 || m == 0 {
        return Err(Error::Empty(if n == 0 { "x" } else { "y" }));
    }
    if n_obs_x > n {
        return Err(Error::CountMismatch { name: "x", observed: n_obs_x, total: n });
    }
    if n_obs_y > m {
        return Err(Error::CountMismatch { name: "y", observed: n_obs_y, total: m });
    }
    let (nf, mf) = (n as f64, m as f64);
    let lhs = (n_obs_x as f64 * n_obs_y as f64) / (nf * mf);
    let z = -normal_quantile(alpha / 2.0)?;
    let rhs = 0.5 + z * libm::sqrt((nf + mf + 1.0) / (12.0 * nf * mf));
    Ok(FeasibilityReport { lhs, rhs, feasible: lhs >= rhs })
}

/// The three equivalent formulations of the two-sided rejection rule under
/// the untied null `N(nm/2, nm(n+m+1)/12)`.
pub mod conditions {
    use super::*;

    fn approx(bounds: &StatBounds) -> Result<GaussianApprox> {
        GaussianApprox::untied(bounds.n, bounds.m)
    }

    /// The p-values of both endpoints are below `alpha`.
    pub fn both_endpoints_significant(bounds: &StatBounds, alpha: f64) -> Result<bool> {
        let a = approx(bounds)?;
        Ok(a.p_value(bounds.w_min, Alternative::TwoSided) < alpha
            && a.p_value(bounds.w_max, Alternative::TwoSided) < alpha)
    }

    /// Both endpoints lie on the same side of `nm/2`.
    pub fn same_side(bounds: &StatBounds) -> bool {
        bounds.same_sign()
    }

    /// `W_max < F⁻¹(α/2)` or `W_min > F⁻¹(1 − α/2)`.
    pub fn interval_in_one_tail(bounds: &StatBounds, alpha: f64) -> Result<bool> {
        check_alpha(alpha)?;
        let a = approx(bounds)?;
        let z = normal_quantile(alpha / 2.0)?;
        let mu = a.mu.to_f64();
        let sigma = a.sigma();
        let lower_cut = mu + sigma * z;
        let upper_cut = mu - sigma * z;
        Ok(bounds.w_max.to_f64() < lower_cut || bounds.w_min.to_f64() > upper_cut)
    }

    /// Rejection region endpoints `(F⁻¹(α/2), F⁻¹(1 − α/2))` for an
    /// `n × m` design.
    pub fn critical_values(n: usize, m: usize, alpha: f64) -> Result<(f64, f64)> {
        check_alpha(alpha)?;
        let a = GaussianApprox::untied(n, m)?;
        let z = normal_quantile(alpha / 2.0)?;
        let mu = a.mu.to_f64();
        Ok((mu + a.sigma() * z, mu - a.sigma() * z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::wmw_test;
    use crate::rank::HalfInt;
    use alloc::vec;
    use alloc::vec::Vec;

    fn seq(start: f64, len: usize) -> Vec<f64> {
        (0..len).map(|i| start + i as f64).collect()
    }

    #[test]
    fn no_missing_matches_classical() {
        let xs = vec![0.1, 0.5, 1.5, 2.2, 3.7, 0.9];
        let ys = vec![1.1, 2.5, 3.5, 4.2, 5.0];
        let x = Sample::complete(xs.clone()).unwrap();
        let y = Sample::complete(ys.clone()).unwrap();
        for alt in [Alternative::TwoSided, Alternative::XGreater, Alternative::XLess] {
            let classic = wmw_test(&xs, &ys, alt, false).unwrap();
            let r = robust_test_distinct(&x, &y, 0.05, alt).unwrap();
            assert_eq!(r.p_min, classic.p);
            assert_eq!(r.p_max, classic.p);
            let tied = wmw_test(&xs, &ys, alt, true).unwrap();
            let g = robust_test_general(&x, &y, &Support::unbounded(), 0.05, alt).unwrap();
            assert!((g.p_min - tied.p).abs() < 1e-15 && (g.p_max - tied.p).abs() < 1e-15);
        }
    }

    #[test]
    fn separated_samples_with_missing_are_significant() {
        let x = Sample::new(seq(0.0, 80), 20).unwrap();
        let y = Sample::new(seq(1000.0, 80), 20).unwrap();
        let r = robust_test_distinct(&x, &y, 0.05, Alternative::TwoSided).unwrap();
        assert_eq!(r.w_bounds.w_max, HalfInt::from_int(3600));
        let (low_cut, _) = conditions::critical_values(100, 100, 0.05).unwrap();
        assert!((low_cut - (5000.0 - 1.959_964 * 409.267_6)).abs() < 0.01);
        assert_eq!(r.decision, Decision::Significant);
        assert!(r.condition_same_sign);
    }

    #[test]
    fn infeasible_sizes_never_significant() {
        let x = Sample::new(seq(0.0, 80), 20).unwrap();
        let y = Sample::new(seq(1000.0, 70), 30).unwrap();
        for (xx, yy) in [(&x, &y), (&y, &x)] {
            let r = robust_test_distinct(xx, yy, 0.05, Alternative::TwoSided).unwrap();
            assert_ne!(r.decision, Decision::Significant);
        }
    }

    #[test]
    fn straddling_interval_reports_one() {
        let x = Sample::new(seq(0.0, 5), 5).unwrap();
        let y = Sample::new(seq(0.5, 5), 5).unwrap();
        let r = robust_test_distinct(&x, &y, 0.05, Alternative::TwoSided).unwrap();
        assert!(!r.condition_same_sign);
        assert_eq!(r.p_max, 1.0);
        assert!(r.p_min < 0.01);
        assert_eq!(r.decision, Decision::InconclusiveDataDependent);
    }

    #[test]
    fn empty_observed_arm_is_uninformative() {
        let x = Sample::new(vec![], 4).unwrap();
        let y = Sample::new(vec![1.0, 2.0], 0).unwrap();
        let r = robust_test_distinct(&x, &y, 0.05, Alternative::TwoSided).unwrap();
        assert_eq!((r.decision, r.p_max), (Decision::NotSignificant, 1.0));
        let g = robust_test_general(&x, &y, &Support::unbounded(), 0.05, Alternative::XLess).unwrap();
        assert_eq!((g.decision, g.p_max), (Decision::NotSignificant, 1.0));
    }

    #[test]
    fn alpha_checked() {
        let x = Sample::complete(vec![1.0]).unwrap();
        assert!(robust_test_distinct(&x, &x, 0.0, Alternative::TwoSided).is_err());
        assert!(robust_test_distinct(&x, &x, 1.0, Alternative::TwoSided).is_err());
    }

    #[test]
    fn general_tied_instance() {
        let x = Sample::complete(vec![1., 2., 3., 2., 2., 1., 1.]).unwrap();
        let y = Sample::new(vec![3.; 6], 1).unwrap();
        let s = Support::grid(vec![1., 2., 3., 4.]).unwrap();
        let r = robust_test_general(&x, &y, &s, 0.05, Alternative::TwoSided).unwrap();
        // p1 uses W_min = 3, p2 uses W_max = 8.5, both with sigma_max
        let s_max = libm::sqrt(114954.0 / 2184.0);
        let p1 = two_sided_tail((3.0 - 24.5) / s_max);
        let p2 = two_sided_tail((8.5 - 24.5) / s_max);
        assert!((r.p_max - p1.max(p2)).abs() < 1e-15);
        assert!((r.p_max - 0.027_427_146_9).abs() < 1e-9);
        assert_eq!(r.decision, Decision::Significant);
    }

    #[test]
    fn general_degenerate_pool() {
        let x = Sample::new(vec![2.0, 2.0], 1).unwrap();
        let y = Sample::new(vec![2.0], 0).unwrap();
        let r = robust_test_general(&x, &y, &Support::unbounded(), 0.05, Alternative::TwoSided);
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }

    #[test]
    fn one_sided_general_worst_case() {
        let x = Sample::new(seq(10.0, 30), 3).unwrap();
        let y = Sample::new(seq(0.5, 30), 2).unwrap();
        let g = robust_test_general(&x, &y, &Support::unbounded(), 0.05, Alternative::XGreater).unwrap();
        let d = robust_test_distinct(&x, &y, 0.05, Alternative::XGreater).unwrap();
        // distinct data, open support: the two pathways coincide
        assert!((g.p_max - d.p_max).abs() < 1e-15, "{} {}", g.p_max, d.p_max);
        assert!(g.decision.is_significant());
        let l = robust_test_general(&x, &y, &Support::unbounded(), 0.05, Alternative::XLess).unwrap();
        assert!(l.p_min > 0.5);
    }

    #[test]
    fn feasibility_example() {
        let f = feasibility(100, 100, 80, 80, 0.05).unwrap();
        assert!((f.rhs - 0.58).abs() < 0.005);
        assert!((f.lhs - 0.64).abs() < 1e-12 && f.feasible);
        let f = feasibility(100, 100, 80, 70, 0.05).unwrap();
        assert!((f.lhs - 0.56).abs() < 1e-12 && !f.feasible);
        let f = feasibility(100, 100, 100, 100, 0.05).unwrap();
        assert!(f.feasible);
    }

    #[test]
    fn feasibility_thirty_percent_missing() {
        for n in [50, 60, 100, 333, 1000] {
            for &alpha in &[0.5, 0.2, 0.05, 0.01, 1e-6] {
                let nx = (0.7 * n as f64).floor() as usize;
                let f = feasibility(n, n + 7, nx, (0.7 * (n + 7) as f64).floor() as usize, alpha).unwrap();
                assert!(f.rhs >= 0.5);
                assert!(f.lhs <= 0.49 && !f.feasible);
            }
        }
    }
}
