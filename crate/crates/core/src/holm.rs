//! Holm step-down adjustment and the relative-change transform used before
//! comparing arms.

use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Holm-adjusted p-values, returned in input order.
///
/// With `p₍₁₎ ≤ … ≤ p₍ₖ₎`, the adjusted value of `p₍ᵢ₎` is
/// `min(1, max_{j ≤ i} (k − j + 1) p₍ⱼ₎)`.
pub fn holm_adjust(pvals: &[f64]) -> Result<Vec<f64>> {
    if let Some(&bad) = pvals.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::OutOfRange { name: "p-value", value: bad });
    }
    let k = pvals.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| pvals[a].total_cmp(&pvals[b]).then(a.cmp(&b)));
    let mut adjusted = alloc::vec![0.0; k];
    let mut running: f64 = 0.0;
    for (rank, &idx) in order.iter().enumerate() {
        let scaled = ((k - rank) as f64 * pvals[idx]).min(1.0);
        running = running.max(scaled);
        adjusted[idx] = running;
    }
    Ok(adjusted)
}

/// Labelled family of raw and Holm-adjusted p-values.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueFamily {
    pub labels: Vec<String>,
    pub raw: Vec<f64>,
    pub adjusted: Vec<f64>,
}

impl PValueFamily {
    pub fn new(labels: Vec<String>, raw: Vec<f64>) -> Result<Self> {
        if labels.len() != raw.len() {
            return Err(Error::CountMismatch { name: "labels", observed: labels.len(), total: raw.len() });
        }
        let adjusted = holm_adjust(&raw)?;
        Ok(PValueFamily { labels, raw, adjusted })
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<(f64, f64)> {
        let i = self.labels.iter().position(|l| l == label)?;
        Some((self.raw[i], self.adjusted[i]))
    }
}

/// `(c − s)/s`; a missing completion value stays missing.
pub fn relative_change(baseline: f64, completion: Option<f64>) -> Result<Option<f64>> {
    if !baseline.is_finite() {
        return Err(Error::NonFinite(baseline));
    }
    if baseline == 0.0 {
        return Err(Error::OutOfRange { name: "baseline", value: baseline });
    }
    match completion {
        None => Ok(None),
        Some(c) if !c.is_finite() => Err(Error::NonFinite(c)),
        Some(c) => Ok(Some((c - baseline) / baseline)),
    }
}
