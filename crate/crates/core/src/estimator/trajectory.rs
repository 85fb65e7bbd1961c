use serde::Serialize;

use super::{halts_within, EstimateError, Proportion, Z_95};
use crate::exec::Executor;
use crate::machines::Machine;
use crate::processes::ProcessSpec;

/// Outcome of [`trajectory_halt_fraction`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryEstimate {
    pub n: u64,
    pub step_bound: u64,
    /// Trajectories in which at least `n/3` of `W_1..W_n` halt within the
    /// step bound, out of all trials.
    pub threshold_met: Proportion,
    pub mean_fraction: f64,
}

/// Runs `trials` trajectories `W_1, …, W_n` and reports how often at least a
/// third of the inputs are decided within `step_bound` ticks. Auxiliary
/// inputs count as undecided.
pub fn trajectory_halt_fraction(
    process: &ProcessSpec,
    machine: &dyn Machine,
    step_bound: u64,
    n: u64,
    trials: u64,
    seed: u64,
    executor: &Executor,
) -> Result<TrajectoryEstimate, EstimateError> {
    if trials == 0 || n == 0 {
        return Err(EstimateError::InvalidArgument("trajectory needs n >= 1 and trials >= 1".into()));
    }
    let counts: Vec<Result<u64, EstimateError>> = executor.map(trials, |trial| {
        let mut p = process.instantiate(seed, trial);
        let mut halted = 0u64;
        for _ in 0..n {
            if let Some(e) = p.step().valid() {
                halted += halts_within(machine, e, step_bound)? as u64;
            }
        }
        Ok(halted)
    });
    let mut met = 0u64;
    let mut fraction_sum = 0.0;
    for c in counts {
        let halted = c?;
        if 3 * halted >= n {
            met += 1;
        }
        fraction_sum += halted as f64 / n as f64;
    }
    Ok(TrajectoryEstimate {
        n,
        step_bound,
        threshold_met: Proportion::new(met, trials, Z_95)?,
        mean_fraction: fraction_sum / trials as f64,
    })
}
