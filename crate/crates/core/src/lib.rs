//! Rank arithmetic, attainable-range bounds and hypothesis tests for the
//! Wilcoxon-Mann-Whitney two-sample problem when some observations are
//! missing and nothing is assumed about why they are missing.
//!
//! The crate is `no_std` (it needs `alloc`). Ranks, rank sums and statistics
//! are exact half-integers ([`HalfInt`]) and variances are exact rationals
//! ([`Rational`]); floating point only enters at the normal CDF.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod classical;
mod error;
pub mod holm;
pub mod normal;
pub mod power;
pub mod quad;
pub mod rank;
pub mod robust;

pub use bounds::{
    p_value_bounds, rank_sum_bounds_distinct, stat_bounds_distinct, stat_bounds_general, stat_bounds_open,
    variance_bounds, BoundaryCounts, PValueBounds, StatBounds, VarBounds,
};
pub use classical::{
    impute_hot_deck, impute_mean, strategy_test, wmw_test, Alternative, GaussianApprox, Strategy, WmwOutcome,
};
pub use error::{Error, Result};
pub use holm::{holm_adjust, relative_change, PValueFamily};
pub use normal::{normal_cdf, normal_quantile};
pub use power::{
    asymptotic_class, mcar_power, mcar_power_from_probs, pair_probs, AsymptoticClass, ContinuousDistribution,
    Exponential, Normal, PairProbs, PowerInputs, Uniform,
};
pub use rank::{
    midrank, rank_sum, tie_corrected_variance, tie_profile, untied_variance, wmw_statistic, HalfInt,
    Rational, Sample, Support, SupportKind, TieProfile,
};
pub use robust::{
    feasibility, robust_test_distinct, robust_test_general, Decision, FeasibilityReport, TestReport,
    VarianceUsed,
};
