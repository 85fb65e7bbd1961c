//! Non-backtracking walks produce uniform freely reduced words.

use std::collections::BTreeMap;

use genericase::domains::is_freely_reduced;
use genericase::stats::chi_square_uniform;
use genericase::{Executor, ProcessSpec};

fn main() {
    let process = ProcessSpec::NonBacktrackingWalk { rank: 2 };
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for out in Executor::new(0).map(100_000, |r| process.sample_at(3, 5, r)) {
        let e = out.valid().unwrap();
        assert!(is_freely_reduced(e.letters().unwrap()));
        *counts.entry(e.to_text()).or_default() += 1;
    }
    let observed: Vec<u64> = counts.values().copied().collect();
    let test = chi_square_uniform(&observed).unwrap();
    println!("{} distinct reduced words of length 3", counts.len());
    println!("chi-square {:.2} on {} dof, p = {:.4}", test.statistic, test.dof, test.p_value);

    let mut walk = process.instantiate(5, 0);
    for _ in 0..12 {
        print!("{} ", walk.step().element());
    }
    println!();
}
