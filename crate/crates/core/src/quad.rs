//! Adaptive Gauss–Kronrod (7/15 point) quadrature on finite, half-infinite
//! and infinite intervals.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-10, rel_tol: 1e-12, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK[..7].iter().enumerate() {
        let pair = f(c - h * x) + f(c + h * x);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Piece { a, b, value: kronrod * h, error: ((kronrod - gauss) * h).abs() }
}

/// Maps a possibly infinite interval onto a finite one.
enum Map {
    Finite,
    Upper(f64),
    Lower(f64),
    Whole,
}

impl Map {
    fn apply(&self, t: f64) -> (f64, f64) {
        match *self {
            Map::Finite => (t, 1.0),
            Map::Upper(a) => {
                let u = 1.0 - t;
                (a + t / u, 1.0 / (u * u))
            }
            Map::Lower(b) => (b - (1.0 - t) / t, 1.0 / (t * t)),
            Map::Whole => {
                let u = 1.0 - t * t;
                (t / u, (1.0 + t * t) / (u * u))
            }
        }
    }
}

/// Integrates `f` over `[lower, upper]`, where either end may be infinite.
/// `breaks` are interior points where `f` may be non-smooth; the range is
/// split there before adaptive refinement.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    upper: f64,
    breaks: &[f64],
    config: QuadConfig,
) -> Result<QuadResult> {
    if lower.is_nan() || upper.is_nan() || lower > upper {
        return Err(Error::InvalidSupport { lower, upper });
    }
    if lower == upper {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, intervals: 0 });
    }
    let (map, t0, t1) = match (lower.is_finite(), upper.is_finite()) {
        (true, true) => (Map::Finite, lower, upper),
        (true, false) => (Map::Upper(lower), 0.0, 1.0),
        (false, true) => (Map::Lower(upper), 0.0, 1.0),
        (false, false) => (Map::Whole, -1.0, 1.0),
    };
    let to_t = |x: f64| match map {
        Map::Finite => x,
        Map::Upper(a) => (x - a) / (1.0 + x - a),
        Map::Lower(b) => 1.0 / (1.0 + b - x),
        Map::Whole => {
            if x == 0.0 {
                0.0
            } else {
                (libm::sqrt(1.0 + 4.0 * x * x) - 1.0) / (2.0 * x)
            }
        }
    };
    let g = |t: f64| {
        let (x, jac) = map.apply(t);
        if !x.is_finite() || !jac.is_finite() {
            return 0.0;
        }
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let mut cuts: Vec<f64> = breaks.iter().filter(|&&x| x > lower && x < upper).map(|&x| to_t(x)).collect();
    cuts.push(t0);
    cuts.push(t1);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let p = gk15(&g, w[0], w[1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    while err > config.abs_tol.max(config.rel_tol * total.abs()) {
        if heap.len() >= config.max_intervals {
            return Err(Error::Quadrature { estimate: total, error_estimate: err, intervals: heap.len() });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature {
                estimate: total,
                error_estimate: err,
                intervals: heap.len() + 1,
            });
        }
        let left = gk15(&g, worst.a, mid);
        let right = gk15(&g, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            // refresh sums to avoid drift from repeated subtraction
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
        }
    }
    let intervals = heap.len();
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error_estimate: f64 = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult { value, error_estimate, intervals })
}
