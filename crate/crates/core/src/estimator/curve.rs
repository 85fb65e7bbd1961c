use serde::{Deserialize, Serialize};

use super::{BoundSpec, EstimateError, Proportion, Z_95};
use crate::domains::{Element, Subset};
use crate::exec::Executor;
use crate::machines::{run, IndicatorOracle, Machine, RunOutcome};
use crate::processes::{ProcessSpec, Schedule};

/// How auxiliary outputs enter the estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `Pr(W_n ∈ Ω and t(W_n) ≤ f(n))`; auxiliary outputs count as failures.
    Unconditional,
    /// `Pr(t(W_n) ≤ f(n) | W_n ∈ Ω)`; auxiliary replicas are discarded.
    ConditionalOnValid,
    /// Grid entries are indices `i`, evaluated at the valid times `nᵢ`.
    AtValidTimes,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Unconditional => "unconditional",
            Mode::ConditionalOnValid => "conditional-on-valid",
            Mode::AtValidTimes => "at-valid-times",
        }
    }
}

/// One grid point of a Monte Carlo curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimatePoint {
    /// Process time at which `W_n` was drawn.
    pub n: u64,
    /// Schedule index `i` with `n = nᵢ`, in [`Mode::AtValidTimes`].
    pub index: Option<u64>,
    /// Replicas drawn.
    pub requested: u64,
    /// `N` = replicas counted, `k` = successes.
    pub estimate: Proportion,
}

impl EstimatePoint {
    pub fn p_hat(&self) -> f64 {
        self.estimate.p_hat
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curve {
    pub mode: Mode,
    pub points: Vec<EstimatePoint>,
    /// Times at which no valid replica was drawn (conditional mode only).
    pub missing: Vec<u64>,
    pub warnings: Vec<String>,
}

/// Shared parameters of a Monte Carlo sweep.
#[derive(Clone, Debug)]
pub struct Sweep<'a> {
    pub grid: &'a [u64],
    pub samples: u64,
    pub seed: u64,
    pub mode: Mode,
    pub executor: &'a Executor,
}

impl<'a> Sweep<'a> {
    pub fn new(grid: &'a [u64], samples: u64, seed: u64, mode: Mode, executor: &'a Executor) -> Self {
        Sweep { grid, samples, seed, mode, executor }
    }

    fn validate(&self) -> Result<(), EstimateError> {
        validate_grid(self.grid)?;
        if self.samples == 0 {
            return Err(EstimateError::InvalidArgument("samples per grid point must be at least 1".into()));
        }
        Ok(())
    }

    /// `(index, n)` pairs the sweep evaluates.
    fn times(&self, schedule: Schedule) -> Result<Vec<(Option<u64>, u64)>, EstimateError> {
        self.grid
            .iter()
            .map(|&g| match self.mode {
                Mode::AtValidTimes => match schedule {
                    Schedule::AllValid => Ok((None, g)),
                    Schedule::Triangular => schedule
                        .valid_time(g)
                        .map(|n| (Some(g), n))
                        .ok_or_else(|| EstimateError::InvalidArgument(format!("valid time n_{g} overflows"))),
                    Schedule::Stochastic => Err(EstimateError::NoDeterministicSchedule),
                },
                _ => Ok((None, g)),
            })
            .collect()
    }
}

pub fn validate_grid(grid: &[u64]) -> Result<(), EstimateError> {
    if grid.is_empty() {
        return Err(EstimateError::InvalidArgument("empty grid".into()));
    }
    if grid[0] == 0 {
        return Err(EstimateError::InvalidArgument("grid entries must be at least 1".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EstimateError::InvalidArgument("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Per-replica result: `None` for an auxiliary output.
type Indicator = Option<bool>;

/// Core sweep: `success(n, element)` is evaluated on every valid replica.
fn sweep<F>(process: &ProcessSpec, sweep: &Sweep<'_>, success: F) -> Result<Curve, EstimateError>
where
    F: Fn(u64, &Element) -> Result<bool, EstimateError> + Sync + Send,
{
    sweep.validate()?;
    let times = sweep.times(process.schedule())?;
    let mut curve = Curve { mode: sweep.mode, points: Vec::new(), missing: Vec::new(), warnings: Vec::new() };
    for (index, n) in times {
        let indicators: Vec<Result<Indicator, EstimateError>> = sweep.executor.map(sweep.samples, |r| {
            let out = process.sample_at(n, sweep.seed, r);
            match out.valid() {
                Some(e) => success(n, e).map(Some),
                None => Ok(None),
            }
        });
        let mut valid = 0u64;
        let mut hits = 0u64;
        for indicator in indicators {
            if let Some(ok) = indicator? {
                valid += 1;
                hits += ok as u64;
            }
        }
        let trials = match sweep.mode {
            Mode::ConditionalOnValid => valid,
            _ => sweep.samples,
        };
        if trials == 0 {
            curve.missing.push(n);
            curve.warnings.push(format!("no valid replica at n={n}; point omitted"));
            continue;
        }
        curve.points.push(EstimatePoint {
            n,
            index,
            requested: sweep.samples,
            estimate: Proportion::new(hits, trials, Z_95)?,
        });
    }
    Ok(curve)
}

/// Whether `machine` produces on `element` within `fuel` ticks.
pub fn halts_within(machine: &dyn Machine, element: &Element, fuel: u64) -> Result<bool, EstimateError> {
    if fuel == 0 {
        return Ok(false);
    }
    Ok(run(machine, element, fuel)?.is_produced())
}

/// Estimates `Pr(t(W_n) ≤ f(n))` on the grid.
pub fn estimate_success_curve(
    process: &ProcessSpec,
    machine: &dyn Machine,
    bound: &BoundSpec,
    params: &Sweep<'_>,
) -> Result<Curve, EstimateError> {
    sweep(process, params, |n, e| halts_within(machine, e, bound.evaluate(n)))
}

/// Estimates `Pr(W_n ∈ D)` on the grid.
pub fn estimate_property_curve(process: &ProcessSpec, subset: &Subset, params: &Sweep<'_>) -> Result<Curve, EstimateError> {
    sweep(process, params, |_, e| Ok(subset.contains(e)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditPoint {
    pub n: u64,
    pub index: Option<u64>,
    /// `Pr(machine produces within f(n))`.
    pub coverage: Proportion,
    /// `Pr(value = h(W_n) | produced)`; `None` when nothing was produced.
    pub correctness: Option<Proportion>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Audit {
    pub mode: Mode,
    pub points: Vec<AuditPoint>,
    pub warnings: Vec<String>,
}

/// Coverage and conditional correctness of `machine` against `oracle`.
/// Only valid replicas are counted.
pub fn correctness_audit(
    process: &ProcessSpec,
    machine: &dyn Machine,
    oracle: &IndicatorOracle,
    bound: &BoundSpec,
    params: &Sweep<'_>,
) -> Result<Audit, EstimateError> {
    params.validate()?;
    let mut audit = Audit { mode: params.mode, points: Vec::new(), warnings: Vec::new() };
    for (index, n) in params.times(process.schedule())? {
        let fuel = bound.evaluate(n);
        // (valid, produced, correct)
        let results: Vec<Result<(bool, bool, bool), EstimateError>> = params.executor.map(params.samples, |r| {
            let out = process.sample_at(n, params.seed, r);
            let Some(e) = out.valid() else { return Ok((false, false, false)) };
            if fuel == 0 {
                return Ok((true, false, false));
            }
            match run(machine, e, fuel)? {
                RunOutcome::Produced { value, .. } => Ok((true, true, value == oracle.label(e))),
                _ => Ok((true, false, false)),
            }
        });
        let (mut valid, mut produced, mut correct) = (0u64, 0u64, 0u64);
        for r in results {
            let (v, p, c) = r?;
            valid += v as u64;
            produced += p as u64;
            correct += c as u64;
        }
        if valid == 0 {
            audit.warnings.push(format!("no valid replica at n={n}; point omitted"));
            continue;
        }
        let correctness = if produced == 0 {
            audit.warnings.push(format!("nothing produced at n={n}; correctness missing"));
            None
        } else {
            Some(Proportion::new(correct, produced, Z_95)?)
        };
        audit.points.push(AuditPoint { n, index, coverage: Proportion::new(produced, valid, Z_95)?, correctness });
    }
    Ok(audit)
}
