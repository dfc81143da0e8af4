//! Multiset rank arithmetic: midranks, rank sums, the WMW statistic and the
//! tie-corrected null moments.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_rational::Ratio;

use crate::{Error, Result};

/// Exact rational used for variances.
pub type Rational = Ratio<i128>;

/// A value that is an integer or an integer plus one half, stored as twice
/// its value. Midranks, rank sums and WMW statistics all live here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    /// Builds the half-integer `twice / 2`.
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn to_rational(self) -> Rational {
        Ratio::new(self.0 as i128, 2)
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            // e.g. -0.5, 8.5
            let sign = if self.0 < 0 { "-" } else { "" };
            write!(f, "{}{}.5", sign, self.0.abs() / 2)
        }
    }
}

/// Observed values of one arm plus the number of observations that went
/// missing. Observed values are kept sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    observed: Vec<f64>,
    n_missing: usize,
}

impl Sample {
    pub fn new(mut observed: Vec<f64>, n_missing: usize) -> Result<Self> {
        if let Some(&bad) = observed.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        if observed.is_empty() && n_missing == 0 {
            return Err(Error::NoObservations);
        }
        observed.sort_by(f64::total_cmp);
        // fold -0.0 into 0.0 so equality and ordering agree
        for v in observed.iter_mut() {
            if *v == 0.0 {
                *v = 0.0;
            }
        }
        Ok(Sample { observed, n_missing })
    }

    /// A sample with nothing missing.
    pub fn complete(observed: Vec<f64>) -> Result<Self> {
        Sample::new(observed, 0)
    }

    /// `observed` values out of `total` planned observations.
    pub fn with_total(observed: Vec<f64>, total: usize) -> Result<Self> {
        if observed.len() > total {
            return Err(Error::CountMismatch { name: "sample", observed: observed.len(), total });
        }
        let missing = total - observed.len();
        Sample::new(observed, missing)
    }

    pub fn observed(&self) -> &[f64] {
        &self.observed
    }

    pub fn n_missing(&self) -> usize {
        self.n_missing
    }

    pub fn n_observed(&self) -> usize {
        self.observed.len()
    }

    pub fn total(&self) -> usize {
        self.observed.len() + self.n_missing
    }

    pub fn has_missing(&self) -> bool {
        self.n_missing > 0
    }

    /// Observed values belonging to the closed interval of `support`.
    pub fn check_support(&self, support: &Support) -> Result<()> {
        match self.observed.iter().find(|&&v| !support.contains(v)) {
            Some(&v) => Err(Error::OutsideSupport(v)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    Unbounded,
    HalfBounded,
    Bounded,
}

/// The domain the data (observed or missing) can take values in.
///
/// Only attainable endpoints matter: `lower` is `min Ω` and `upper` is
/// `max Ω` when those exist. An optional finite grid of admissible values
/// is carried for brute-force enumeration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Support {
    lower: Option<f64>,
    upper: Option<f64>,
    grid: Option<Vec<f64>>,
}

impl Support {
    pub fn unbounded() -> Self {
        Support::default()
    }

    pub fn new(lower: Option<f64>, upper: Option<f64>) -> Result<Self> {
        for v in lower.iter().chain(upper.iter()) {
            if !v.is_finite() {
                return Err(Error::NonFinite(*v));
            }
        }
        if let (Some(lo), Some(hi)) = (lower, upper) {
            if lo >= hi {
                return Err(Error::InvalidSupport { lower: lo, upper: hi });
            }
        }
        Ok(Support { lower, upper, grid: None })
    }

    pub fn bounded(lower: f64, upper: f64) -> Result<Self> {
        Support::new(Some(lower), Some(upper))
    }

    /// A finite support `{g_1, ..., g_k}`; its endpoints are the smallest and
    /// largest grid values.
    pub fn grid(mut values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        if values.len() < 2 {
            return Err(Error::Degenerate("a support grid needs at least two distinct values"));
        }
        let lower = values[0];
        let upper = values[values.len() - 1];
        Ok(Support { lower: Some(lower), upper: Some(upper), grid: Some(values) })
    }

    pub fn lower(&self) -> Option<f64> {
        self.lower
    }

    pub fn upper(&self) -> Option<f64> {
        self.upper
    }

    pub fn grid_values(&self) -> Option<&[f64]> {
        self.grid.as_deref()
    }

    pub fn kind(&self) -> SupportKind {
        match (self.lower, self.upper) {
            (None, None) => SupportKind::Unbounded,
            (Some(_), Some(_)) => SupportKind::Bounded,
            _ => SupportKind::HalfBounded,
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        if let Some(grid) = &self.grid {
            return grid.contains(&v);
        }
        self.lower.is_none_or(|lo| v >= lo) && self.upper.is_none_or(|hi| v <= hi)
    }
}

/// Multiplicities of the distinct values of a pooled multiset, in
/// increasing order of value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieProfile {
    multiplicities: Vec<usize>,
}

impl TieProfile {
    pub fn from_multiplicities(multiplicities: Vec<usize>) -> Result<Self> {
        if multiplicities.contains(&0) {
            return Err(Error::OutOfRange { name: "multiplicity", value: 0.0 });
        }
        Ok(TieProfile { multiplicities })
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.multiplicities.iter().copied().max().unwrap_or(0)
    }

    /// `Σ (d³ − d)` over all tie groups.
    pub fn tie_sum(&self) -> i128 {
        self.multiplicities.iter().map(|&d| cube_minus(d)).sum()
    }

    pub fn has_ties(&self) -> bool {
        self.multiplicities.iter().any(|&d| d > 1)
    }
}

pub(crate) fn cube_minus(d: usize) -> i128 {
    let d = d as i128;
    d * d * d - d
}

/// Midrank of `z` within `pool`: `|{v < z}| + (|{v = z}| + 1) / 2`.
pub fn midrank(pool: &[f64], z: f64) -> Result<HalfInt> {
    let mut below = 0i64;
    let mut equal = 0i64;
    for &v in pool {
        if v < z {
            below += 1;
        } else if v == z {
            equal += 1;
        }
    }
    if equal == 0 {
        return Err(Error::NotInPool(z));
    }
    Ok(HalfInt(2 * below + equal + 1))
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Tie groups of a sorted slice as `(value, start, len)`.
pub(crate) fn tie_groups(sorted: &[f64]) -> impl Iterator<Item = (f64, usize, usize)> + '_ {
    let mut start = 0;
    core::iter::from_fn(move || {
        if start >= sorted.len() {
            return None;
        }
        let value = sorted[start];
        let mut end = start + 1;
        while end < sorted.len() && sorted[end] == value {
            end += 1;
        }
        let group = (value, start, end - start);
        start = end;
        Some(group)
    })
}

/// Sum of midranks of `sub` taken within `pool`. `sub` must be a
/// sub-multiset of `pool`.
pub fn rank_sum(sub: &[f64], pool: &[f64]) -> Result<HalfInt> {
    let sub = sorted(sub)?;
    let pool = sorted(pool)?;
    let mut total = 0i64;
    let mut i = 0;
    for (value, start, len) in tie_groups(&pool) {
        let mut taken = 0;
        if i < sub.len() && sub[i] < value {
            // a sub value smaller than this group never appeared in the pool
            return Err(Error::NotContained);
        }
        while i < sub.len() && sub[i] == value {
            taken += 1;
            i += 1;
        }
        if taken > len {
            return Err(Error::NotContained);
        }
        // midrank of the group is start + (len + 1) / 2
        total += taken as i64 * (2 * start as i64 + len as i64 + 1);
    }
    if i < sub.len() {
        return Err(Error::NotContained);
    }
    Ok(HalfInt(total))
}

/// Twice `#{(x, y) : x > y} + ½ #{(x, y) : x = y}` for sorted inputs. Empty
/// inputs give zero.
pub(crate) fn pair_score_sorted(x: &[f64], y: &[f64]) -> i64 {
    let mut below = 0usize;
    let mut not_above = 0usize;
    let mut score = 0i64;
    for &v in x {
        while below < y.len() && y[below] < v {
            below += 1;
        }
        if not_above < below {
            not_above = below;
        }
        while not_above < y.len() && y[not_above] <= v {
            not_above += 1;
        }
        let equal = not_above - below;
        score += 2 * below as i64 + equal as i64;
    }
    score
}

/// `W(X, Y) = R_{X | X ∪ Y} − n(n + 1)/2`, the number of pairs with
/// `x > y` plus half the tied pairs.
pub fn wmw_statistic(x: &[f64], y: &[f64]) -> Result<HalfInt> {
    if x.is_empty() {
        return Err(Error::Empty("x"));
    }
    if y.is_empty() {
        return Err(Error::Empty("y"));
    }
    let x = sorted(x)?;
    let y = sorted(y)?;
    Ok(HalfInt(pair_score_sorted(&x, &y)))
}

pub fn tie_profile(pool: &[f64]) -> TieProfile {
    let mut pool = pool.to_vec();
    pool.sort_by(f64::total_cmp);
    profile_of_sorted(&pool)
}

pub(crate) fn profile_of_sorted(pool: &[f64]) -> TieProfile {
    TieProfile { multiplicities: tie_groups(pool).map(|(_, _, len)| len).collect() }
}

/// Merge two sorted slices into a sorted vector.
pub(crate) fn merge_sorted(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].total_cmp(&b[j]) != Ordering::Greater {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `nm(n + m + 1)/12`, the null variance without ties.
pub fn untied_variance(n: usize, m: usize) -> Rational {
    let (n, m) = (n as i128, m as i128);
    Ratio::new(n * m * (n + m + 1), 12)
}

/// Null variance with the tie correction
/// `nm(n+m+1)/12 − nm Σ(d³ − d) / {12 (n+m)(n+m−1)}`.
pub fn tie_corrected_variance(n: usize, m: usize, profile: &TieProfile) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Empty("x"));
    }
    if m == 0 {
        return Err(Error::Empty("y"));
    }
    if profile.total() != n + m {
        return Err(Error::ProfileMismatch { expected: n + m, got: profile.total() });
    }
    Ok(variance_from_tie_sum(n, m, profile.tie_sum()))
}

pub(crate) fn variance_from_tie_sum(n: usize, m: usize, tie_sum: i128) -> Rational {
    let (ni, mi) = (n as i128, m as i128);
    let big_n = ni + mi;
    // nm [ (N+1) N (N-1) - S ] / (12 N (N-1))
    Ratio::new(ni * mi * ((big_n + 1) * big_n * (big_n - 1) - tie_sum), 12 * big_n * (big_n - 1))
}
