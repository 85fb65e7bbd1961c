//! A measurement laboratory for generic-case time complexity.
//!
//! Inputs are produced by discrete-time random processes ([`processes`]),
//! fed to step-counted partial algorithms ([`machines`]), and the
//! probability `Pr(t(W_n) ≤ f(n))` is estimated by Monte Carlo
//! ([`estimator`]). For uniform measures on spheres and balls, exact
//! asymptotic densities are computed by enumeration ([`density`]).
//!
//! Experiments are usually driven by TOML or JSON configs ([`config`],
//! [`runner`]); see the `examples/` directory of this crate for one runnable
//! program per capability.

pub mod cli;
pub mod config;
pub mod density;
pub mod domains;
pub mod estimator;
pub mod exec;
pub mod machines;
pub mod processes;
pub mod registry;
pub mod rng;
pub mod runner;
pub mod stats;

pub use domains::{Alphabet, Domain, DomainError, Element, Graph, Subset};
pub use estimator::{BoundSpec, Classification, Curve, EstimateError, EstimatePoint, Mode, Sweep, Thresholds, Verdict};
pub use exec::Executor;
pub use machines::{run, Machine, RunOutcome};
pub use processes::{ProcessSpec, Schedule, StepOutput};
