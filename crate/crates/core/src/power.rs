//! Large-sample power of the robust two-sided test when values are missing
//! completely at random, and the limiting zero/one classification.

use crate::normal::{normal_cdf, normal_quantile};
use crate::quad::{integrate, QuadConfig};
use crate::{Error, Result};

/// A continuous distribution described by its CDF and density.
pub trait ContinuousDistribution {
    fn cdf(&self, x: f64) -> f64;
    fn pdf(&self, x: f64) -> f64;
    /// Closed interval outside which the density vanishes (ends may be
    /// infinite).
    fn support(&self) -> (f64, f64);
    /// `1 − cdf(x)`, overridden where a more accurate form exists.
    fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }
}

impl<D: ContinuousDistribution + ?Sized> ContinuousDistribution for &D {
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn pdf(&self, x: f64) -> f64 {
        (**self).pdf(x)
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn sf(&self, x: f64) -> f64 {
        (**self).sf(x)
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

fn finite(value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(value))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normal {
    mean: f64,
    sd: f64,
}

impl Normal {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        finite(mean)?;
        positive("sd", sd)?;
        Ok(Normal { mean, sd })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }
}

impl ContinuousDistribution for Normal {
    fn cdf(&self, x: f64) -> f64 {
        normal_cdf((x - self.mean) / self.sd)
    }
    fn sf(&self, x: f64) -> f64 {
        normal_cdf((self.mean - x) / self.sd)
    }
    fn pdf(&self, x: f64) -> f64 {
        crate::normal::normal_pdf((x - self.mean) / self.sd) / self.sd
    }
    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    low: f64,
    high: f64,
}

impl Uniform {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        finite(low)?;
        finite(high)?;
        if low >= high {
            return Err(Error::InvalidSupport { lower: low, upper: high });
        }
        Ok(Uniform { low, high })
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }
}

impl ContinuousDistribution for Uniform {
    fn cdf(&self, x: f64) -> f64 {
        ((x - self.low) / (self.high - self.low)).clamp(0.0, 1.0)
    }
    fn sf(&self, x: f64) -> f64 {
        ((self.high - x) / (self.high - self.low)).clamp(0.0, 1.0)
    }
    fn pdf(&self, x: f64) -> f64 {
        if x >= self.low && x <= self.high {
            1.0 / (self.high - self.low)
        } else {
            0.0
        }
    }
    fn support(&self) -> (f64, f64) {
        (self.low, self.high)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    rate: f64,
}

impl Exponential {
    pub fn new(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Ok(Exponential { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

impl ContinuousDistribution for Exponential {
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -libm::expm1(-self.rate * x)
        }
    }
    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            libm::exp(-self.rate * x)
        }
    }
    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.rate * libm::exp(-self.rate * x)
        }
    }
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// `p1 = pr(X₁ < Y₁)`, `p2 = pr(X₁ < Y₁, X₁ < Y₂)`, `p3 = pr(X₁ < Y₁, X₂ < Y₁)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairProbs {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl PairProbs {
    /// Checks `0 < p1 < 1` and `p2, p3 ∈ [max(0, 2p1 − 1), p1]` up to `tol`.
    pub fn new(p1: f64, p2: f64, p3: f64, tol: f64) -> Result<Self> {
        if !(p1 > 0.0 && p1 < 1.0) {
            return Err(Error::OutOfRange { name: "p1", value: p1 });
        }
        let lo = (2.0 * p1 - 1.0).max(0.0) - tol;
        let hi = p1 + tol;
        for (name, v) in [("p2", p2), ("p3", p3)] {
            if !(v >= lo && v <= hi) {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        Ok(PairProbs { p1, p2, p3 })
    }
}

fn finite_ends(d: &impl ContinuousDistribution) -> [f64; 2] {
    let (a, b) = d.support();
    [a, b]
}

/// Pair probabilities of `X ~ F`, `Y ~ G` by adaptive quadrature with
/// absolute tolerance `1e-9` per integral.
pub fn pair_probs<F, G>(f: &F, g: &G) -> Result<PairProbs>
where
    F: ContinuousDistribution + ?Sized,
    G: ContinuousDistribution + ?Sized,
{
    let config = QuadConfig { abs_tol: 1e-10, rel_tol: 0.0, max_intervals: 2000 };
    let (fa, fb) = f.support();
    let (ga, gb) = g.support();
    let g_breaks: [f64; 2] = finite_ends(&g);
    let f_breaks: [f64; 2] = finite_ends(&f);
    let p1 = integrate(|x| f.pdf(x) * g.sf(x), fa, fb, &g_breaks, config)?.value;
    let p2 = integrate(
        |x| {
            let s = g.sf(x);
            f.pdf(x) * s * s
        },
        fa,
        fb,
        &g_breaks,
        config,
    )?
    .value;
    let p3 = integrate(
        |y| {
            let c = f.cdf(y);
            g.pdf(y) * c * c
        },
        ga,
        gb,
        &f_breaks,
        config,
    )?
    .value;
    Ok(PairProbs { p1, p2, p3 })
}

/// Design of an MCAR power calculation. Observed counts may be fractional,
/// which lets a missing fraction enter as its expectation `n(1 − s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerInputs {
    pub n: usize,
    pub m: usize,
    pub n_obs_x: f64,
    pub n_obs_y: f64,
    pub alpha: f64,
}

impl PowerInputs {
    pub fn new(n: usize, m: usize, n_obs_x: f64, n_obs_y: f64, alpha: f64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Empty(if n == 0 { "x" } else { "y" }));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::OutOfRange { name: "alpha", value: alpha });
        }
        for (name, v, total) in [("n_obs_x", n_obs_x, n), ("n_obs_y", n_obs_y, m)] {
            if !(v >= 0.0 && v <= total as f64) {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        Ok(PowerInputs { n, m, n_obs_x, n_obs_y, alpha })
    }

    /// Both arms lose the same expected fraction `s`.
    pub fn from_missing_fraction(n: usize, m: usize, s: f64, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&s) {
            return Err(Error::OutOfRange { name: "s", value: s });
        }
        PowerInputs::new(n, m, n as f64 * (1.0 - s), m as f64 * (1.0 - s), alpha)
    }
}

/// Approximate power of the robust two-sided test under MCAR given the pair
/// probabilities of the underlying distributions.
///
/// The observed statistic `W'` is approximately `N(μ', σ'²)` with
/// `μ' = n'm'p1` and
/// `σ'² = n'm'[p1(1 − p1) + (m' − 1)(p2 − p1²) + (n' − 1)(p3 − p1²)]`;
/// power is `Φ((L − μ')/σ') + 1 − Φ((R − μ')/σ')`.
pub fn mcar_power_from_probs(probs: &PairProbs, inputs: &PowerInputs) -> Result<f64> {
    let PairProbs { p1, p2, p3 } = *probs;
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(Error::OutOfRange { name: "p1", value: p1 });
    }
    let (nx, my) = (inputs.n_obs_x, inputs.n_obs_y);
    if nx * my < 1.0 {
        return Err(Error::OutOfRange { name: "n_obs_x * n_obs_y", value: nx * my });
    }
    let (n, m) = (inputs.n as f64, inputs.m as f64);
    let mu = n * m / 2.0;
    let sigma = libm::sqrt(n * m * (n + m + 1.0) / 12.0);
    let z = normal_quantile(1.0 - inputs.alpha / 2.0)?;
    let left = -sigma * z + mu - n * m + nx * my;
    let right = sigma * z + mu;

    let mu_obs = nx * my * p1;
    let var_obs = nx * my * (p1 * (1.0 - p1) + (my - 1.0) * (p2 - p1 * p1) + (nx - 1.0) * (p3 - p1 * p1));
    if var_obs.is_nan() || var_obs <= 0.0 {
        return Err(Error::Degenerate("variance of the observed statistic is not positive"));
    }
    let sd_obs = libm::sqrt(var_obs);
    let power = normal_cdf((left - mu_obs) / sd_obs) + normal_cdf((mu_obs - right) / sd_obs);
    Ok(power.clamp(0.0, 1.0))
}

/// [`mcar_power_from_probs`] with the pair probabilities of `X ~ f`, `Y ~ g`.
pub fn mcar_power<F, G>(f: &F, g: &G, inputs: &PowerInputs) -> Result<f64>
where
    F: ContinuousDistribution + ?Sized,
    G: ContinuousDistribution + ?Sized,
{
    mcar_power_from_probs(&pair_probs(f, g)?, inputs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AsymptoticClass {
    PowerToZero,
    PowerToOne,
}

/// Limit of the MCAR power as `n, m → ∞` with observed fractions `λx`, `λy`:
/// zero iff `λxλy(p1 − 1) + 1/2 > 0` and `λxλy p1 − 1/2 < 0`.
pub fn asymptotic_class(lambda_x: f64, lambda_y: f64, p1: f64) -> Result<AsymptoticClass> {
    for (name, v) in [("lambda_x", lambda_x), ("lambda_y", lambda_y)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::OutOfRange { name, value: v });
        }
    }
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(Error::OutOfRange { name: "p1", value: p1 });
    }
    let lam = lambda_x * lambda_y;
    let lower = lam * (p1 - 1.0) + 0.5;
    let upper = lam * p1 - 0.5;
    if lower == 0.0 {
        return Err(Error::Boundary("lambda_x lambda_y (p1 - 1) + 1/2 is exactly zero"));
    }
    if upper == 0.0 {
        return Err(Error::Boundary("lambda_x lambda_y p1 - 1/2 is exactly zero"));
    }
    Ok(if lower > 0.0 && upper < 0.0 { AsymptoticClass::PowerToZero } else { AsymptoticClass::PowerToOne })
}
