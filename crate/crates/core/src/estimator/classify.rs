//! Finite-range verdicts on probability and density sequences.
//!
//! A limit is never decided from finitely many points. The classifier
//! reports evidence: the tail window (the last third of the points by
//! default) must sit above `1 − ε` without a downward trend for a generic
//! verdict, and `log(1 − value)` must fit a decreasing line with high `R²`
//! for the strong (exponential) flag. The exponential detector is a
//! heuristic.

use serde::Serialize;

use super::{EstimateError, EstimatePoint};

/// Verdict thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    /// Density threshold `τ ∈ (0, 1]`.
    pub tau: f64,
    /// Fraction of the points (from the end) forming the tail window.
    pub tail_fraction: f64,
    pub epsilon: f64,
    pub exp_fit_r2_min: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { tau: 1.0, tail_fraction: 1.0 / 3.0, epsilon: 0.02, exp_fit_r2_min: 0.98 }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<(), EstimateError> {
        let bad = |what: &str, v: f64| Err(EstimateError::InvalidArgument(format!("{what} = {v} out of range")));
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return bad("tau", self.tau);
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return bad("tail_fraction", self.tail_fraction);
        }
        if !(self.epsilon >= 0.0 && self.epsilon < 1.0) {
            return bad("epsilon", self.epsilon);
        }
        if !(0.0..=1.0).contains(&self.exp_fit_r2_min) {
            return bad("exp_fit_r2_min", self.exp_fit_r2_min);
        }
        Ok(())
    }
}

/// One point of a sequence to classify.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitPoint {
    pub n: u64,
    pub value: f64,
    /// Sample count behind `value`, if it is an estimate. Used only to floor
    /// values equal to 1 in the exponential fit.
    pub samples: Option<u64>,
}

impl From<&EstimatePoint> for LimitPoint {
    fn from(p: &EstimatePoint) -> Self {
        LimitPoint { n: p.n, value: p.estimate.p_hat, samples: Some(p.estimate.trials) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    EvidenceGeneric,
    EvidenceStrongGeneric,
    EvidenceAtLeastTau,
    Negative,
    Inconclusive,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::EvidenceGeneric => "EvidenceGeneric",
            Classification::EvidenceStrongGeneric => "EvidenceStrongGeneric",
            Classification::EvidenceAtLeastTau => "EvidenceAtLeastTau",
            Classification::Negative => "Negative",
            Classification::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitDiagnostics {
    pub tail_len: usize,
    pub tail_mean: f64,
    pub tail_min: f64,
    pub tail_max: f64,
    /// Least-squares slope of value against `n` over the tail.
    pub tail_slope: f64,
    pub trend_ok: bool,
    /// Points used in the `log(1 − value)` fit.
    pub exp_fit_points: usize,
    pub exp_fit_slope: Option<f64>,
    pub exp_fit_r2: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub classification: Classification,
    pub generic: bool,
    pub strong: bool,
    pub thresholds: Thresholds,
    pub diagnostics: FitDiagnostics,
    /// The strong flag rests on a finite-sample curve fit.
    pub strong_is_heuristic: bool,
}

/// `(slope, R²)` of the least-squares line through `(x, y)`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, r2)
}

/// Classifies a sequence of values in `[0, 1]` indexed by increasing `n`.
pub fn classify_limit(points: &[LimitPoint], thresholds: &Thresholds) -> Result<Verdict, EstimateError> {
    thresholds.validate()?;
    if points.len() < 4 {
        return Err(EstimateError::TooFewPoints(points.len()));
    }
    if points.windows(2).any(|w| w[0].n >= w[1].n) {
        return Err(EstimateError::InvalidArgument("points must have strictly increasing n".into()));
    }
    if let Some(p) = points.iter().find(|p| !(0.0..=1.0).contains(&p.value)) {
        return Err(EstimateError::InvalidArgument(format!("value {} at n={} not in [0, 1]", p.value, p.n)));
    }

    let tail_len = ((points.len() as f64 * thresholds.tail_fraction).ceil() as usize).clamp(2, points.len());
    let tail = &points[points.len() - tail_len..];
    let values: Vec<f64> = tail.iter().map(|p| p.value).collect();
    let tail_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tail_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail_mean = values.iter().sum::<f64>() / tail_len as f64;
    let xs: Vec<f64> = tail.iter().map(|p| p.n as f64).collect();
    let (tail_slope, _) = linear_fit(&xs, &values);
    let span = (tail[tail_len - 1].n - tail[0].n) as f64;
    // the fitted line may not drop by more than ε/2 across the tail
    let trend_ok = tail_slope * span >= -thresholds.epsilon / 2.0;
    let generic = tail_min >= 1.0 - thresholds.epsilon && trend_ok;

    let (fit_x, fit_y): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter_map(|p| {
            let gap = if p.value < 1.0 {
                1.0 - p.value
            } else {
                1.0 / (3.0 * p.samples? as f64)
            };
            Some((p.n as f64, gap.ln()))
        })
        .unzip();
    let (exp_fit_slope, exp_fit_r2) = if fit_x.len() >= 3 {
        let (s, r2) = linear_fit(&fit_x, &fit_y);
        (Some(s), Some(r2))
    } else {
        (None, None)
    };
    let strong = generic
        && matches!((exp_fit_slope, exp_fit_r2), (Some(s), Some(r2)) if s < 0.0 && r2 >= thresholds.exp_fit_r2_min);

    let classification = if strong {
        Classification::EvidenceStrongGeneric
    } else if generic {
        Classification::EvidenceGeneric
    } else if tail_min >= thresholds.tau {
        Classification::EvidenceAtLeastTau
    } else if tail_max < thresholds.tau {
        Classification::Negative
    } else {
        Classification::Inconclusive
    };

    Ok(Verdict {
        classification,
        generic,
        strong,
        thresholds: *thresholds,
        diagnostics: FitDiagnostics {
            tail_len,
            tail_mean,
            tail_min,
            tail_max,
            tail_slope,
            trend_ok,
            exp_fit_points: fit_x.len(),
            exp_fit_slope,
            exp_fit_r2,
        },
        strong_is_heuristic: true,
    })
}
