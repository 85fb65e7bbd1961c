//! The two-token machine: `a` halts after one tick, `b` never halts.
//! Under uniform tokens the success probability is 1/2 at every n.

use genericase::estimator::{classify_limit, estimate_success_curve, LimitPoint};
use genericase::machines::Table;
use genericase::{Alphabet, BoundSpec, Executor, Mode, ProcessSpec, Sweep, Thresholds};

fn main() {
    let exec = Executor::new(0);
    let process = ProcessSpec::IidToken(Alphabet::new("ab").unwrap());
    let grid = [1, 10, 100, 1000];
    let sweep = Sweep::new(&grid, 10_000, 1, Mode::Unconditional, &exec);
    let curve = estimate_success_curve(&process, &Table::two_element(), &BoundSpec::constant(1), &sweep).unwrap();
    for p in &curve.points {
        let e = &p.estimate;
        println!("n={:<5} pHat={:.4} CI=[{:.4}, {:.4}]", p.n, e.p_hat, e.ci_low, e.ci_high);
    }
    let points: Vec<LimitPoint> = curve.points.iter().map(LimitPoint::from).collect();
    for tau in [1.0, 0.4] {
        let t = Thresholds { tau, ..Thresholds::default() };
        println!("tau={tau}: {}", classify_limit(&points, &t).unwrap().classification.label());
    }
}
