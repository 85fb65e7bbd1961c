//! Exact sphere and ball densities by enumeration.
//!
//! All densities are exact rationals, so the identity
//! `ball(n) = Σ_{k≤n} #S(k)·sphere(k) / Σ_{k≤n} #S(k)` can be checked with
//! zero tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::domains::{Domain, DomainError, Subset};

/// Hits and size of one sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphereCount {
    pub n: u32,
    pub size: u128,
    pub hits: u128,
}

/// Counts `#(S(n) ∩ subset)` and `#S(n)`.
pub fn count_sphere(domain: &Domain, subset: &Subset, n: u32, cap: u128) -> Result<SphereCount, DomainError> {
    let mut size = 0u128;
    let mut hits = 0u128;
    domain.visit_sphere(n, cap, |e| {
        size += 1;
        hits += subset.contains(&e) as u128;
    })?;
    Ok(SphereCount { n, size, hits })
}

fn ratio(num: u128, den: u128) -> Option<BigRational> {
    (den > 0).then(|| BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// `#(S(n) ∩ subset) / #S(n)`. Errors on an empty sphere.
pub fn sphere_density(domain: &Domain, subset: &Subset, n: u32, cap: u128) -> Result<BigRational, DomainError> {
    let c = count_sphere(domain, subset, n, cap)?;
    ratio(c.hits, c.size).ok_or_else(|| DomainError::InvalidParameters(format!("sphere S({n}) is empty")))
}

/// `#(B(n) ∩ subset) / #B(n)`. Errors on an empty ball.
pub fn ball_density(domain: &Domain, subset: &Subset, n: u32, cap: u128) -> Result<BigRational, DomainError> {
    let (mut size, mut hits) = (0u128, 0u128);
    for k in 0..=n {
        let c = count_sphere(domain, subset, k, cap)?;
        size += c.size;
        hits += c.hits;
    }
    ratio(hits, size).ok_or_else(|| DomainError::InvalidParameters(format!("ball B({n}) is empty")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityPoint {
    pub n: u32,
    pub sphere_count: u128,
    pub sphere_hits: u128,
    pub ball_count: u128,
    pub ball_hits: u128,
    /// `None` for an empty sphere.
    pub sphere_density: Option<BigRational>,
    pub ball_density: Option<BigRational>,
}

/// Windowed extrema over the last `window` points: finite-range stand-ins
/// for `liminf` and `limsup`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowExtrema {
    pub window: usize,
    pub min: Option<BigRational>,
    pub max: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensitySequence {
    pub domain: Domain,
    pub subset: Subset,
    pub points: Vec<DensityPoint>,
    pub sphere_window: WindowExtrema,
    pub ball_window: WindowExtrema,
}

fn extrema<'a>(values: impl Iterator<Item = &'a Option<BigRational>>, window: usize) -> WindowExtrema {
    let present: Vec<&BigRational> = values.flatten().collect();
    WindowExtrema {
        window,
        min: present.iter().min().map(|r| (*r).clone()),
        max: present.iter().max().map(|r| (*r).clone()),
    }
}

/// Sphere and ball densities for `n = 0..=n_max`.
pub fn density_sequence(domain: &Domain, subset: &Subset, n_max: u32, cap: u128) -> Result<DensitySequence, DomainError> {
    // check every sphere against the cap before enumerating anything
    for n in 0..=n_max {
        let size = domain.sphere_size(n).map_err(|_| DomainError::ResourceLimit {
            size: format!("S({n}) of {} (overflows u128)", domain.describe()),
            cap,
        })?;
        if size > cap {
            return Err(DomainError::ResourceLimit { size: size.to_string(), cap });
        }
    }
    let mut points = Vec::with_capacity(n_max as usize + 1);
    let (mut ball_count, mut ball_hits) = (0u128, 0u128);
    for n in 0..=n_max {
        let c = count_sphere(domain, subset, n, cap)?;
        ball_count += c.size;
        ball_hits += c.hits;
        points.push(DensityPoint {
            n,
            sphere_count: c.size,
            sphere_hits: c.hits,
            ball_count,
            ball_hits,
            sphere_density: ratio(c.hits, c.size),
            ball_density: ratio(ball_hits, ball_count),
        });
    }
    let window = (n_max as usize).div_ceil(3).max(1);
    let tail = &points[points.len() - window.min(points.len())..];
    Ok(DensitySequence {
        domain: domain.clone(),
        subset: subset.clone(),
        sphere_window: extrema(tail.iter().map(|p| &p.sphere_density), window),
        ball_window: extrema(tail.iter().map(|p| &p.ball_density), window),
        points,
    })
}

impl DensitySequence {
    /// Checks the weighted-average identity exactly at every point.
    pub fn weighted_average_holds(&self) -> bool {
        let mut weighted = BigRational::zero();
        let mut total = BigInt::zero();
        self.points.iter().all(|p| {
            if let Some(d) = &p.sphere_density {
                weighted += d * BigRational::from_integer(BigInt::from(p.sphere_count));
            }
            total += BigInt::from(p.sphere_count);
            match &p.ball_density {
                Some(b) => *b == &weighted / BigRational::from_integer(total.clone()),
                None => total.is_zero(),
            }
        })
    }
}

/// `"p/q"`, always with an explicit denominator.
pub fn fraction_text(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{Alphabet, DEFAULT_SPHERE_CAP};

    fn frac(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn ab() -> Domain {
        Domain::Words(Alphabet::plain(2).unwrap())
    }

    #[test]
    fn sphere_density_examples() {
        let cap = DEFAULT_SPHERE_CAP;
        assert_eq!(sphere_density(&ab(), &Subset::StartsWith(b'a'), 5, cap).unwrap(), frac(1, 2));
        let x = Domain::Words(Alphabet::signed("tab").unwrap());
        assert_eq!(sphere_density(&x, &Subset::ExponentSumNonzero(b't'), 2, cap).unwrap(), frac(1, 2));
        assert_eq!(sphere_density(&Domain::Graphs, &Subset::All, 3, cap).unwrap(), frac(1, 1));
        assert!(sphere_density(&Domain::Graphs, &Subset::All, 0, cap).is_err());
    }

    #[test]
    fn ball_density_examples() {
        let cap = DEFAULT_SPHERE_CAP;
        assert_eq!(ball_density(&ab(), &Subset::StartsWith(b'a'), 3, cap).unwrap(), frac(7, 15));
        for n in 0..6 {
            assert_eq!(ball_density(&ab(), &Subset::Empty, n, cap).unwrap(), frac(0, 1));
            assert_eq!(ball_density(&ab(), &Subset::All, n, cap).unwrap(), frac(1, 1));
        }
    }

    #[test]
    fn starts_with_sequence_closed_form() {
        let seq = density_sequence(&ab(), &Subset::StartsWith(b'a'), 10, DEFAULT_SPHERE_CAP).unwrap();
        for p in &seq.points[1..] {
            assert_eq!(p.sphere_density, Some(frac(1, 2)));
            let n = p.n as i64;
            assert_eq!(p.ball_density, Some(frac((1 << n) - 1, (1 << (n + 1)) - 1)));
        }
        assert_eq!(seq.points[10].ball_density, Some(frac(1023, 2047)));
        assert!(seq.weighted_average_holds());
        assert_eq!(seq.sphere_window.window, 4);
        assert_eq!(seq.sphere_window.min, Some(frac(1, 2)));
    }

    #[test]
    fn cap_refuses_before_enumerating() {
        let err = density_sequence(&ab(), &Subset::All, 12, 1000).unwrap_err();
        assert!(matches!(err, DomainError::ResourceLimit { cap: 1000, .. }));
    }

    #[test]
    fn fraction_text_form() {
        assert_eq!(fraction_text(&frac(2, 4)), "1/2");
        assert_eq!(fraction_text(&frac(1, 1)), "1/1");
    }
}
