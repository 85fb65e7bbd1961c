//! Permutations rebuilt from scratch each round by picking images without
//! replacement.

use std::collections::HashMap;

use genericase::domains::DEFAULT_SPHERE_CAP;
use genericase::stats::chi_square_uniform;
use genericase::{Domain, Element, Executor, ProcessSpec};

fn main() {
    let spec = ProcessSpec::PermutationFromScratch;
    let n4 = spec.schedule().valid_time(4).unwrap();
    let cells = Domain::Permutations.enumerate_sphere(4, DEFAULT_SPHERE_CAP).unwrap();
    let index: HashMap<&Element, usize> = cells.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut counts = vec![0u64; cells.len()];
    for out in Executor::new(0).map(240_000, |r| spec.sample_at(n4, 6, r)) {
        counts[index[out.valid().unwrap()]] += 1;
    }
    for (cell, count) in cells.iter().zip(&counts).take(4) {
        println!("{cell:<10} {count}");
    }
    println!("...");
    let test = chi_square_uniform(&counts).unwrap();
    println!("S_4 at t={n4}: chi-square {:.2} on {} dof, p = {:.4}", test.statistic, test.dof, test.p_value);
}
