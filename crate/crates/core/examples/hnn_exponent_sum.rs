//! Exponent-sum machine on words over `t, a, b` and inverses. It outputs
//! after n + 1 ticks when the t-exponent is nonzero and runs forever
//! otherwise, so it never succeeds on words without `t`.

use genericase::estimator::{classify_limit, estimate_success_curve, LimitPoint};
use genericase::machines::ExponentSum;
use genericase::{Alphabet, BoundSpec, Executor, Mode, ProcessSpec, Sweep, Thresholds};

fn main() {
    let exec = Executor::new(0);
    let machine = ExponentSum::new(b't').unwrap();
    let bound = BoundSpec::linear(1.0, 1.0).unwrap();
    let x = Alphabet::signed("tab").unwrap();
    let grid = [50, 100, 200, 500, 1000];
    let thresholds = Thresholds { epsilon: 0.05, ..Thresholds::default() };

    let processes = [
        ProcessSpec::UniformWord(x.clone()),
        ProcessSpec::restricted(x, Alphabet::new("aAbB").unwrap()).unwrap(),
    ];
    for process in &processes {
        let sweep = Sweep::new(&grid, 10_000, 2, Mode::Unconditional, &exec);
        let curve = estimate_success_curve(process, &machine, &bound, &sweep).unwrap();
        println!("{}", process.describe());
        for p in &curve.points {
            println!("  n={:<5} pHat={:.4}", p.n, p.p_hat());
        }
        let points: Vec<LimitPoint> = curve.points.iter().map(LimitPoint::from).collect();
        println!("  verdict: {}", classify_limit(&points, &thresholds).unwrap().classification.label());
    }
}
