//! Brute-force completion oracle for small instances.
//!
//! Every quantity is recomputed from scratch on each completed data set:
//! `W` by counting pairs, the tie-corrected variance from a direct count of
//! the tie groups, and the p-value from the completion's own variance.

#![allow(dead_code)]

use rankguard_core::{
    normal_cdf, p_value_bounds, rank_sum_bounds_distinct, robust_test_distinct, robust_test_general,
    stat_bounds_distinct, stat_bounds_general, variance_bounds, Alternative, Decision, Rational, Sample,
    Support,
};

/// Multisets of size `k` drawn from `values` (combinations with replacement).
pub fn multisets(values: &[f64], k: usize) -> Vec<Vec<f64>> {
    fn rec(values: &[f64], k: usize, start: usize, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..values.len() {
            cur.push(values[i]);
            rec(values, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(values, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Twice `#(x > y) + #(x = y)/2`.
pub fn twice_w(x: &[f64], y: &[f64]) -> i64 {
    let mut s = 0;
    for &a in x {
        for &b in y {
            if a > b {
                s += 2;
            } else if a == b {
                s += 1;
            }
        }
    }
    s
}

/// Twice the midrank sum of `x` within `x ∪ y`.
pub fn twice_rank_sum(x: &[f64], y: &[f64]) -> i64 {
    let pool: Vec<f64> = x.iter().chain(y).copied().collect();
    x.iter()
        .map(|&v| {
            let below = pool.iter().filter(|&&u| u < v).count() as i64;
            let equal = pool.iter().filter(|&&u| u == v).count() as i64;
            2 * below + equal + 1
        })
        .sum()
}

/// Tie-corrected null variance as an unreduced fraction `(num, den)`.
pub fn variance(n: usize, m: usize, pool: &[f64]) -> (i128, i128) {
    let mut seen: Vec<f64> = Vec::new();
    let mut ties = 0i128;
    for &v in pool {
        if seen.contains(&v) {
            continue;
        }
        seen.push(v);
        let d = pool.iter().filter(|&&u| u == v).count() as i128;
        ties += d * d * d - d;
    }
    let big = (n + m) as i128;
    let nm = (n * m) as i128;
    (nm * ((big + 1) * big * (big - 1) - ties), 12 * big * (big - 1))
}

pub fn frac_le(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 <= b.0 * a.1
}

pub fn rational(r: Rational) -> (i128, i128) {
    (*r.numer(), *r.denom())
}

pub fn p_value(twice_w: i64, n: usize, m: usize, var: (i128, i128), alt: Alternative) -> f64 {
    let z = (twice_w as f64 / 2.0 - (n * m) as f64 / 2.0) / (var.0 as f64 / var.1 as f64).sqrt();
    match alt {
        Alternative::TwoSided => (2.0 * normal_cdf(-z.abs())).min(1.0),
        Alternative::XGreater => normal_cdf(-z),
        Alternative::XLess => normal_cdf(z),
    }
}

#[derive(Debug, Default, Clone)]
pub struct SuiteReport {
    pub instances: usize,
    pub completions: usize,
    pub significant: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        } else if self.failures.len() == 20 {
            self.failures.push("...".into());
        }
    }

    fn merge(&mut self, other: SuiteReport) {
        self.instances += other.instances;
        self.completions += other.completions;
        self.significant += other.significant;
        for f in other.failures {
            self.fail(f);
        }
    }
}

fn subsets_of_grid() -> Vec<Vec<f64>> {
    let base = [1.0, 2.0, 3.0, 4.0];
    (0u32..16)
        .filter(|mask| mask.count_ones() >= 2)
        .map(|mask| (0..4).filter(|i| mask & (1 << i) != 0).map(|i| base[i]).collect())
        .collect()
}

const ALTS: [Alternative; 3] = [Alternative::TwoSided, Alternative::XGreater, Alternative::XLess];

/// Checks one grid instance against all of its completions.
pub fn check_grid_instance(grid: &[f64], x_obs: &[f64], y_obs: &[f64], kx: usize, ky: usize) -> SuiteReport {
    let mut rep = SuiteReport { instances: 1, ..Default::default() };
    let tag = || format!("grid {grid:?} x' {x_obs:?} (+{kx}) y' {y_obs:?} (+{ky})");
    let support = Support::grid(grid.to_vec()).unwrap();
    let x = Sample::new(x_obs.to_vec(), kx).unwrap();
    let y = Sample::new(y_obs.to_vec(), ky).unwrap();
    let (n, m) = (x.total(), y.total());
    let bounds = stat_bounds_general(&x, &y, &support).unwrap();

    let pool_obs: Vec<f64> = x_obs.iter().chain(y_obs).copied().collect();
    let informative = !x_obs.is_empty() && !y_obs.is_empty();
    let degenerate = pool_obs.iter().all(|&v| v == pool_obs[0]);
    let var = if pool_obs.is_empty() { None } else { Some(variance_bounds(&x, &y).unwrap()) };
    let pb = match (&var, informative && !degenerate) {
        (Some(v), true) => Some(p_value_bounds(&bounds, v).unwrap()),
        _ => None,
    };
    let reports: Vec<_> = if informative && !degenerate {
        ALTS.iter().map(|&a| robust_test_general(&x, &y, &support, 0.05, a).unwrap()).collect()
    } else {
        Vec::new()
    };
    for r in &reports {
        if r.decision == Decision::Significant {
            rep.significant += 1;
        }
    }

    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for mx in multisets(grid, kx) {
        let xc: Vec<f64> = x_obs.iter().chain(&mx).copied().collect();
        for my in multisets(grid, ky) {
            let yc: Vec<f64> = y_obs.iter().chain(&my).copied().collect();
            rep.completions += 1;
            let w2 = twice_w(&xc, &yc);
            lo = lo.min(w2);
            hi = hi.max(w2);
            let pool: Vec<f64> = xc.iter().chain(&yc).copied().collect();
            let v = variance(n, m, &pool);
            if let Some(vb) = &var {
                if !(frac_le(rational(vb.sigma2_min), v) && frac_le(v, rational(vb.sigma2_max))) {
                    rep.fail(format!("{}: variance {v:?} outside bounds", tag()));
                }
                let d = pool.iter().map(|&u| pool.iter().filter(|&&t| t == u).count()).max().unwrap();
                if d > vb.d_max {
                    rep.fail(format!("{}: tie group {d} above d_max", tag()));
                }
            }
            if v.0 == 0 {
                continue;
            }
            if let Some(p) = &pb {
                let p2 = p_value(w2, n, m, v, Alternative::TwoSided);
                if p2 < p.p_low - 1e-12 || p2 > p.p_high + 1e-12 {
                    rep.fail(format!("{}: p {p2} outside [{}, {}]", tag(), p.p_low, p.p_high));
                }
            }
            for r in &reports {
                let p = p_value(w2, n, m, v, r.alternative);
                if r.decision == Decision::Significant && p >= 0.05 {
                    rep.fail(format!("{}: {:?} significant but completion p = {p}", tag(), r.alternative));
                }
                if p < r.p_min - 1e-12 || p > r.p_max + 1e-12 {
                    rep.fail(format!(
                        "{}: {:?} p {p} outside [{}, {}]",
                        tag(),
                        r.alternative,
                        r.p_min,
                        r.p_max
                    ));
                }
            }
        }
    }
    if lo != bounds.w_min.twice() || hi != bounds.w_max.twice() {
        rep.fail(format!(
            "{}: enumerated W in [{}, {}], bounds [{}, {}]",
            tag(),
            lo as f64 / 2.0,
            hi as f64 / 2.0,
            bounds.w_min,
            bounds.w_max
        ));
    }
    rep
}

/// Every instance with pooled total at most `max_total`, support grid a
/// subset of `{1, 2, 3, 4}` with at least two values, and up to
/// `max_missing` missing per side.
pub fn grid_suite(max_total: usize, max_missing: usize) -> SuiteReport {
    let mut rep = SuiteReport::default();
    for grid in subsets_of_grid() {
        for n in 1..max_total {
            for m in 1..=(max_total - n) {
                for kx in 0..=max_missing.min(n) {
                    for ky in 0..=max_missing.min(m) {
                        for xo in multisets(&grid, n - kx) {
                            for yo in multisets(&grid, m - ky) {
                                rep.merge(check_grid_instance(&grid, &xo, &yo, kx, ky));
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Continuous-support oracle: observed values `1..=N'` assigned to the arms
/// by `pattern`, missing values placed on insertion points spread through
/// every gap between and around them.
pub fn check_open_instance(pattern: &[bool], kx: usize, ky: usize) -> SuiteReport {
    let mut rep = SuiteReport { instances: 1, ..Default::default() };
    let x_obs: Vec<f64> = (0..pattern.len()).filter(|&i| pattern[i]).map(|i| (i + 1) as f64).collect();
    let y_obs: Vec<f64> = (0..pattern.len()).filter(|&i| !pattern[i]).map(|i| (i + 1) as f64).collect();
    let tag = format!("x' {x_obs:?} (+{kx}) y' {y_obs:?} (+{ky})");
    let x = Sample::new(x_obs.clone(), kx).unwrap();
    let y = Sample::new(y_obs.clone(), ky).unwrap();
    let (n, m) = (x.total(), y.total());
    let bounds = stat_bounds_distinct(&x, &y).unwrap();
    let rank_bounds = rank_sum_bounds_distinct(&x_obs, &y_obs, n, m).unwrap();
    let reports: Vec<_> = ALTS.iter().map(|&a| robust_test_distinct(&x, &y, 0.05, a).unwrap()).collect();
    rep.significant += reports.iter().filter(|r| r.decision == Decision::Significant).count();

    let k = (kx + ky).max(1);
    let mut slots = Vec::new();
    for gap in 0..=pattern.len() {
        for j in 1..=k {
            slots.push(gap as f64 + j as f64 / (k + 1) as f64);
        }
    }
    let untied = ((n * m * (n + m + 1)) as i128, 12i128);
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    let (mut rlo, mut rhi) = (i64::MAX, i64::MIN);
    for mx in multisets(&slots, kx) {
        let xc: Vec<f64> = x_obs.iter().chain(&mx).copied().collect();
        for my in multisets(&slots, ky) {
            let yc: Vec<f64> = y_obs.iter().chain(&my).copied().collect();
            rep.completions += 1;
            let w2 = twice_w(&xc, &yc);
            lo = lo.min(w2);
            hi = hi.max(w2);
            let r2 = twice_rank_sum(&xc, &yc);
            rlo = rlo.min(r2);
            rhi = rhi.max(r2);
            let mut all: Vec<f64> = xc.iter().chain(&yc).copied().collect();
            all.sort_by(f64::total_cmp);
            if all.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            for r in &reports {
                let p = p_value(w2, n, m, untied, r.alternative);
                if r.decision == Decision::Significant && p >= 0.05 {
                    rep.fail(format!("{tag}: {:?} significant but completion p = {p}", r.alternative));
                }
                if p < r.p_min - 1e-12 || p > r.p_max + 1e-12 {
                    rep.fail(format!("{tag}: {:?} p {p} outside [{}, {}]", r.alternative, r.p_min, r.p_max));
                }
            }
        }
    }
    if lo != bounds.w_min.twice() || hi != bounds.w_max.twice() {
        rep.fail(format!("{tag}: W in [{lo}, {hi}]/2, bounds [{}, {}]", bounds.w_min, bounds.w_max));
    }
    if rlo != rank_bounds.0.twice() || rhi != rank_bounds.1.twice() {
        rep.fail(format!(
            "{tag}: rank sum in [{rlo}, {rhi}]/2, bounds [{}, {}]",
            rank_bounds.0, rank_bounds.1
        ));
    }
    rep
}

pub fn open_suite(max_observed: usize, max_missing: usize) -> SuiteReport {
    let mut rep = SuiteReport::default();
    for len in 2..=max_observed {
        for mask in 0u32..(1 << len) {
            let pattern: Vec<bool> = (0..len).map(|i| mask & (1 << i) != 0).collect();
            if pattern.iter().all(|&b| b) || pattern.iter().all(|&b| !b) {
                continue;
            }
            for kx in 0..=max_missing {
                for ky in 0..=max_missing {
                    rep.merge(check_open_instance(&pattern, kx, ky));
                }
            }
        }
    }
    rep
}
