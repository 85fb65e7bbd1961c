use serde::Serialize;

use super::EstimateError;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;
/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.5758293035489004;

/// Wilson score interval for `k` successes in `n` trials, clamped to `[0, 1]`.
/// The endpoints are exactly 0 when `k = 0` and exactly 1 when `k = n`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> Result<(f64, f64), EstimateError> {
    if n == 0 {
        return Err(EstimateError::UndefinedEstimate);
    }
    if k > n {
        return Err(EstimateError::InvalidArgument(format!("{k} successes out of {n} trials")));
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let low = if k == 0 { 0.0 } else { (centre - half).clamp(0.0, p) };
    let high = if k == n { 1.0 } else { (centre + half).clamp(p, 1.0) };
    Ok((low, high))
}

/// A success frequency with its Wilson interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64, z: f64) -> Result<Self, EstimateError> {
        let (ci_low, ci_high) = wilson_interval(successes, trials, z)?;
        Ok(Proportion { successes, trials, p_hat: successes as f64 / trials as f64, ci_low, ci_high })
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}
