//! Exact sphere and ball densities of a few subsets.

use genericase::density::{density_sequence, fraction_text};
use genericase::domains::DEFAULT_SPHERE_CAP;
use genericase::{Alphabet, Domain, Subset};

fn main() {
    let words = Domain::Words(Alphabet::plain(2).unwrap());
    let cases = [
        (words.clone(), Subset::StartsWith(b'a'), 12),
        (words, Subset::ContainsFactor(b"aa".to_vec()), 12),
        (Domain::free_group(2).unwrap(), Subset::ExponentSumNonzero(b'a'), 8),
        (Domain::Graphs, Subset::HasEdge, 6),
        (Domain::Permutations, Subset::HasFixedPoint, 8),
    ];
    for (domain, subset, n_max) in cases {
        let seq = density_sequence(&domain, &subset, n_max, DEFAULT_SPHERE_CAP).unwrap();
        let last = seq.points.last().unwrap();
        println!(
            "{} in {}: ball({n_max}) = {}, identity {}",
            subset.describe(),
            domain.describe(),
            fraction_text(last.ball_density.as_ref().unwrap()),
            seq.weighted_average_holds()
        );
    }
}
