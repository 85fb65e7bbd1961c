//! How often at least a third of W_1..W_n halt within one tick.

use genericase::estimator::trajectory_halt_fraction;
use genericase::machines::Table;
use genericase::{Alphabet, Executor, ProcessSpec};

fn main() {
    let exec = Executor::new(0);
    let process = ProcessSpec::IidToken(Alphabet::new("ab").unwrap());
    for n in [3, 10, 30, 300] {
        let t = trajectory_halt_fraction(&process, &Table::two_element(), 1, n, 10_000, 10, &exec).unwrap();
        println!("n={n:<4} Pr(>= n/3 halt) = {:.4}, mean fraction {:.4}", t.threshold_met.p_hat, t.mean_fraction);
    }
}
