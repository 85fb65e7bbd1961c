//! Pearson chi-square goodness of fit.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

impl ChiSquare {
    /// Fails to reject at significance `alpha`.
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Goodness of fit of `observed` counts against cell probabilities
/// `expected` (normalized internally). Needs at least two cells.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> Option<ChiSquare> {
    if observed.len() < 2 || observed.len() != expected.len() || expected.iter().any(|&e| e.is_nan() || e <= 0.0) {
        return None;
    }
    let total: u64 = observed.iter().sum();
    let mass: f64 = expected.iter().sum();
    let statistic = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let e = total as f64 * e / mass;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dof = observed.len() as u64 - 1;
    let p_value = ChiSquared::new(dof as f64).ok()?.sf(statistic);
    Some(ChiSquare { statistic, dof, p_value })
}

/// Uniform-cell special case.
pub fn chi_square_uniform(observed: &[u64]) -> Option<ChiSquare> {
    chi_square(observed, &vec![1.0; observed.len()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_fit() {
        let c = chi_square_uniform(&[100, 100, 100, 100]).unwrap();
        assert_eq!(c.statistic, 0.0);
        assert_eq!(c.dof, 3);
        assert!((c.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_statistic() {
        // (60-50)^2/50 + (40-50)^2/50 = 4, P(χ²₁ > 4) = 0.0455
        let c = chi_square_uniform(&[60, 40]).unwrap();
        assert!((c.statistic - 4.0).abs() < 1e-12);
        assert!((c.p_value - 0.0455).abs() < 1e-3);
        assert!(c.passes(1e-3) && !c.passes(0.05));
    }

    #[test]
    fn weighted_cells() {
        let c = chi_square(&[10, 20, 40], &[1.0, 2.0, 4.0]).unwrap();
        assert!(c.statistic.abs() < 1e-12);
        assert!(chi_square(&[1], &[1.0]).is_none());
        assert!(chi_square(&[1, 2], &[1.0, 0.0]).is_none());
    }
}
