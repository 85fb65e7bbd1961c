//! Coverage and conditional correctness against a reference function.

use genericase::estimator::correctness_audit;
use genericase::machines::{IndicatorOracle, Table, Trivial};
use genericase::{Alphabet, BoundSpec, Executor, Machine, Mode, ProcessSpec, Subset, Sweep};

fn main() {
    let exec = Executor::new(0);
    let grid = [1, 10, 100];
    let sweep = Sweep::new(&grid, 10_000, 9, Mode::Unconditional, &exec);
    let tokens = ProcessSpec::IidToken(Alphabet::new("ab").unwrap());
    let words = ProcessSpec::UniformWord(Alphabet::plain(2).unwrap());
    let starts_with_a = |member: &str, nonmember: &str| IndicatorOracle {
        subset: Subset::StartsWith(b'a'),
        member: member.into(),
        nonmember: nonmember.into(),
    };
    let cases: [(&ProcessSpec, Box<dyn Machine>, IndicatorOracle); 2] = [
        (&tokens, Box::new(Table::two_element()), starts_with_a("halt", "other")),
        (&words, Box::new(Trivial::ConstantOutput("0".into())), starts_with_a("1", "0")),
    ];
    for (process, machine, oracle) in cases {
        let audit = correctness_audit(process, machine.as_ref(), &oracle, &BoundSpec::constant(1), &sweep).unwrap();
        println!("{} on {}", machine.name(), process.describe());
        for p in &audit.points {
            let corr = p.correctness.map_or("-".into(), |c| format!("{:.4}", c.p_hat));
            println!("  n={:<4} coverage {:.4} correctness {corr}", p.n, p.coverage.p_hat);
        }
    }
}
