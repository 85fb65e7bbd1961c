//! Uniform sampling from the ball of words of length at most n.

use genericase::stats::chi_square;
use genericase::{Alphabet, Domain, Executor, ProcessSpec};

fn main() {
    let alphabet = Alphabet::plain(2).unwrap();
    let spec = ProcessSpec::ball_uniform(alphabet.clone()).unwrap();
    let domain = Domain::Words(alphabet);
    let n = 2;
    let mut counts = vec![0u64; n + 1];
    for out in Executor::new(0).map(70_000, |r| spec.sample_at(n as u64, 7, r)) {
        counts[out.valid().unwrap().letters().unwrap().len()] += 1;
    }
    let weights: Vec<f64> = (0..=n as u32).map(|j| domain.sphere_size(j).unwrap() as f64).collect();
    let total: f64 = weights.iter().sum();
    for (j, (c, w)) in counts.iter().zip(&weights).enumerate() {
        println!("|w|={j}: {:.4} (expected {:.4})", *c as f64 / 70_000.0, w / total);
    }
    let test = chi_square(&counts, &weights).unwrap();
    println!("chi-square p = {:.4}", test.p_value);
}
