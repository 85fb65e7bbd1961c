use serde::Serialize;

use super::EstimateError;

/// Shape of a running-time bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "template", rename_all = "kebab-case")]
pub enum BoundTemplate {
    Constant,
    Linear,
    Polynomial { degree: u32 },
    Exponential { base: f64 },
}

/// `f(n) = ⌈c · template(n) + b⌉`, monotone non-decreasing in `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundSpec {
    #[serde(flatten)]
    pub template: BoundTemplate,
    pub c: f64,
    pub b: f64,
}

impl BoundSpec {
    pub fn new(template: BoundTemplate, c: f64, b: f64) -> Result<Self, EstimateError> {
        let bad = |why: String| Err(EstimateError::InvalidArgument(why));
        if !(c >= 0.0 && c.is_finite()) || !(b >= 0.0 && b.is_finite()) {
            return bad(format!("bound coefficients must be finite and non-negative (c={c}, b={b})"));
        }
        if let BoundTemplate::Exponential { base } = template {
            if !(base >= 1.0 && base.is_finite()) {
                return bad(format!("exponential base {base} must be at least 1"));
            }
        }
        Ok(BoundSpec { template, c, b })
    }

    pub fn constant(value: u64) -> Self {
        BoundSpec { template: BoundTemplate::Constant, c: 0.0, b: value as f64 }
    }

    /// `c·n + b`
    pub fn linear(c: f64, b: f64) -> Result<Self, EstimateError> {
        BoundSpec::new(BoundTemplate::Linear, c, b)
    }

    /// Saturates at `u64::MAX`.
    pub fn evaluate(&self, n: u64) -> u64 {
        let x = n as f64;
        let shape = match self.template {
            BoundTemplate::Constant => 1.0,
            BoundTemplate::Linear => x,
            BoundTemplate::Polynomial { degree } => x.powi(degree as i32),
            BoundTemplate::Exponential { base } => base.powf(x),
        };
        let value = (self.c * shape + self.b).ceil();
        if value >= u64::MAX as f64 {
            u64::MAX
        } else {
            value as u64
        }
    }

    pub fn describe(&self) -> String {
        let shape = match self.template {
            BoundTemplate::Constant => return format!("ceil({})", self.c + self.b),
            BoundTemplate::Linear => "n".to_string(),
            BoundTemplate::Polynomial { degree } => format!("n^{degree}"),
            BoundTemplate::Exponential { base } => format!("{base}^n"),
        };
        format!("ceil({}*{shape} + {})", self.c, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        assert_eq!(BoundSpec::constant(1).evaluate(1000), 1);
        assert_eq!(BoundSpec::linear(1.0, 1.0).unwrap().evaluate(1000), 1001);
        let quad = BoundSpec::new(BoundTemplate::Polynomial { degree: 2 }, 0.5, 0.0).unwrap();
        assert_eq!(quad.evaluate(3), 5);
        let exp = BoundSpec::new(BoundTemplate::Exponential { base: 2.0 }, 1.0, 0.0).unwrap();
        assert_eq!(exp.evaluate(10), 1024);
        assert_eq!(exp.evaluate(5000), u64::MAX);
    }

    #[test]
    fn rejects_negative_coefficients() {
        assert!(BoundSpec::linear(-1.0, 0.0).is_err());
        assert!(BoundSpec::new(BoundTemplate::Exponential { base: 0.5 }, 1.0, 0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn monotone(c in 0.0f64..10.0, b in 0.0f64..10.0, deg in 0u32..4, n in 0u64..10_000) {
            for t in [BoundTemplate::Constant, BoundTemplate::Linear, BoundTemplate::Polynomial { degree: deg }, BoundTemplate::Exponential { base: 1.5 }] {
                let f = BoundSpec::new(t, c, b).unwrap();
                proptest::prop_assert!(f.evaluate(n) <= f.evaluate(n + 1));
            }
        }
    }
}
