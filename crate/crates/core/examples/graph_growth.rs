//! Graph growth: vertex i + 1 is attached by i fair coin flips, one per
//! possible edge. Only the steps n_i = i(i+1)/2 carry a finished graph.

use genericase::estimator::estimate_property_curve;
use genericase::{Executor, Mode, ProcessSpec, Subset, Sweep};

fn main() {
    let spec = ProcessSpec::GraphGrowth;
    let mut p = spec.instantiate(3, 0);
    for _ in 0..10 {
        let out = p.step();
        println!("t={:<3} {} {}", p.time(), if out.is_valid() { "valid" } else { "aux  " }, out.element());
    }

    let exec = Executor::new(0);
    let grid: Vec<u64> = (2..=8).collect();
    let sweep = Sweep::new(&grid, 10_000, 4, Mode::AtValidTimes, &exec);
    let curve = estimate_property_curve(&spec, &Subset::HasEdge, &sweep).unwrap();
    for pt in &curve.points {
        let i = pt.index.unwrap();
        let exact = 1.0 - 0.5f64.powi((i * (i - 1) / 2) as i32);
        println!("i={i} n_i={:<3} Pr(has edge) ~ {:.4} (exact {exact:.4})", pt.n, pt.p_hat());
    }
}
