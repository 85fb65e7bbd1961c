//! Verdicts for synthetic success curves with known limits.

use genericase::estimator::{classify_limit, estimate_success_curve, LimitPoint};
use genericase::machines::Trivial;
use genericase::processes::AcceptanceCurve;
use genericase::{BoundSpec, Executor, Mode, ProcessSpec, Sweep, Thresholds};

fn main() {
    let exec = Executor::new(0);
    let cases: [(AcceptanceCurve, Vec<u64>); 3] = [
        (AcceptanceCurve::OneMinusPower { base: 2.0 }, (1..=12).collect()),
        (AcceptanceCurve::OneMinusInverse, (1..=20).map(|i| 10 * i).collect()),
        (AcceptanceCurve::Constant(0.5), (1..=12).collect()),
    ];
    for (curve, grid) in cases {
        let process = ProcessSpec::synthetic(curve).unwrap();
        let sweep = Sweep::new(&grid, 20_000, 8, Mode::Unconditional, &exec);
        let c = estimate_success_curve(&process, &Trivial::SyntheticAcceptor, &BoundSpec::constant(1), &sweep).unwrap();
        let points: Vec<LimitPoint> = c.points.iter().map(LimitPoint::from).collect();
        let v = classify_limit(&points, &Thresholds::default()).unwrap();
        let r2 = v.diagnostics.exp_fit_r2.map_or("-".into(), |r| format!("{r:.3}"));
        println!("p(n) = {:<10} {:<24} tail min {:.4}, fit R2 {r2}", curve.describe(), v.classification.label(), v.diagnostics.tail_min);
    }
}
