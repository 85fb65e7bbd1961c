//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use genericase::density::density_sequence;
use genericase::domains::{ball_cardinality, is_freely_reduced, DEFAULT_SPHERE_CAP};
use genericase::estimator::{classify_limit, estimate_success_curve, trajectory_halt_fraction, Classification, LimitPoint};
use genericase::machines::{ExponentSum, Table, Trivial};
use genericase::processes::AcceptanceCurve;
use genericase::stats::{chi_square, chi_square_uniform};
use genericase::{Alphabet, BoundSpec, Curve, Domain, Element, Executor, Mode, ProcessSpec, Subset, Sweep, Thresholds};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.detail = format!("{} [{:.2}s]", o.detail, took.as_secs_f64());
    if let Some(limit) = limit {
        if took > limit {
            o.pass = false;
            o.detail = format!("{} exceeds {}s", o.detail, limit.as_secs());
        }
    }
    o
}

fn points(curve: &Curve) -> Vec<LimitPoint> {
    curve.points.iter().map(LimitPoint::from).collect()
}

fn thresholds(tau: f64, epsilon: f64) -> Thresholds {
    Thresholds { tau, epsilon, ..Thresholds::default() }
}

fn c1_ball_formula() -> Outcome {
    let mut bad = Vec::new();
    for m in [2usize, 3] {
        let domain = Domain::Words(Alphabet::plain(m).unwrap());
        let mut enumerated = 0u128;
        for n in 0..=12u32 {
            domain.visit_sphere(n, u128::MAX, |_| enumerated += 1).unwrap();
            if ball_cardinality(m as u64, n).unwrap() != enumerated {
                bad.push((m, n));
            }
        }
    }
    outcome(bad.is_empty(), format!("m in {{2,3}}, n <= 12, mismatches {bad:?}"))
}

fn c2_two_element(exec: &Executor) -> Outcome {
    let process = ProcessSpec::IidToken(Alphabet::new("ab").unwrap());
    // n = 1 is added so the classifier has its minimum of four points.
    let grid = [1, 10, 100, 1000];
    let sweep = Sweep::new(&grid, 10_000, 20240501, Mode::Unconditional, exec);
    let curve = estimate_success_curve(&process, &Table::two_element(), &BoundSpec::constant(1), &sweep).unwrap();
    let within = curve.points.iter().filter(|p| p.n >= 10).all(|p| (p.p_hat() - 0.5).abs() <= 0.02);
    let pts = points(&curve);
    let v1 = classify_limit(&pts, &thresholds(1.0, 0.02)).unwrap().classification;
    let v04 = classify_limit(&pts, &thresholds(0.4, 0.02)).unwrap().classification;
    let hats: Vec<String> = curve.points.iter().map(|p| format!("{:.4}", p.p_hat())).collect();
    outcome(
        within && v1 == Classification::Negative && v04 == Classification::EvidenceAtLeastTau,
        format!("pHat {hats:?}, tau=1 {}, tau=0.4 {}", v1.label(), v04.label()),
    )
}

/// `Pr(σ_t(W_n) = 0)` for uniform words over `t, T, a, A, b, B`, exactly.
fn zero_exponent_sum_probability(n: u64) -> f64 {
    // Σ_k n!/(k! k! (n-2k)!) · 4^(n-2k) / 6^n
    let mut total = BigInt::from(0);
    let mut multinomial = BigInt::one(); // n!/(k! k! (n-2k)!) at k = 0
    for k in 0..=n / 2 {
        if k > 0 {
            let rem = n - 2 * (k - 1);
            multinomial = multinomial * BigInt::from(rem) * BigInt::from(rem - 1) / (BigInt::from(k) * BigInt::from(k));
        }
        total += &multinomial * BigInt::from(4).pow((n - 2 * k) as u32);
    }
    BigRational::new(total, BigInt::from(6).pow(n as u32)).to_f64().unwrap()
}

fn c3_hnn(exec: &Executor) -> Outcome {
    let bound = BoundSpec::linear(1.0, 1.0).unwrap();
    let grid = [50, 100, 200, 500, 1000];
    let machine = ExponentSum::new(b't').unwrap();
    let x = Alphabet::signed("tab").unwrap();

    let uniform = ProcessSpec::UniformWord(x.clone());
    let sweep = Sweep::new(&grid, 10_000, 20240502, Mode::Unconditional, exec);
    let curve = estimate_success_curve(&uniform, &machine, &bound, &sweep).unwrap();
    let mut misses = Vec::new();
    for p in &curve.points {
        let oracle = 1.0 - zero_exponent_sum_probability(p.n);
        if !p.estimate.contains(oracle) {
            misses.push(format!("n={} oracle {oracle:.5} CI [{:.5}, {:.5}]", p.n, p.estimate.ci_low, p.estimate.ci_high));
        }
    }
    let last = curve.points.last().unwrap().p_hat();
    let generic = classify_limit(&points(&curve), &thresholds(1.0, 0.05)).unwrap().classification;

    let restricted = ProcessSpec::restricted(x, Alphabet::new("aAbB").unwrap()).unwrap();
    let sweep = Sweep::new(&grid, 10_000, 20240503, Mode::Unconditional, exec);
    let rcurve = estimate_success_curve(&restricted, &machine, &bound, &sweep).unwrap();
    let zero = rcurve.points.iter().all(|p| p.estimate.successes == 0);
    let negative = classify_limit(&points(&rcurve), &Thresholds::default()).unwrap().classification;

    let pass = misses.is_empty()
        && last >= 0.95
        && generic == Classification::EvidenceGeneric
        && zero
        && negative == Classification::Negative;
    outcome(
        pass,
        format!(
            "pHat(1000)={last:.4}, uniform {} (epsilon 0.05), restricted {} zero={zero}, CI misses {misses:?}",
            generic.label(),
            negative.label()
        ),
    )
}

fn c4_trajectory(exec: &Executor) -> Outcome {
    let process = ProcessSpec::IidToken(Alphabet::new("ab").unwrap());
    let machine = Table::two_element();
    let large = trajectory_halt_fraction(&process, &machine, 1, 300, 1000, 20240511, exec).unwrap();
    let small = trajectory_halt_fraction(&process, &machine, 1, 3, 10_000, 20240512, exec).unwrap();
    let p300 = large.threshold_met.p_hat;
    let p3 = small.threshold_met.p_hat;
    outcome(p300 >= 0.99 && (p3 - 7.0 / 8.0).abs() <= 0.03, format!("n=300 {p300:.4}, n=3 {p3:.4} (7/8 = 0.875)"))
}

fn uniformity_at(process: &ProcessSpec, domain: &Domain, size: u32, time: u64, samples: u64, seed: u64, exec: &Executor) -> (bool, String, Vec<Element>) {
    let cells = domain.enumerate_sphere(size, DEFAULT_SPHERE_CAP).unwrap();
    let index: HashMap<&Element, usize> = cells.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let outputs = exec.map(samples, |r| process.sample_at(time, seed, r));
    let mut counts = vec![0u64; cells.len()];
    let mut strays = Vec::new();
    for out in &outputs {
        match out.valid().and_then(|e| index.get(e)) {
            Some(&i) => counts[i] += 1,
            None => strays.push(out.element().clone()),
        }
    }
    let test = chi_square_uniform(&counts).unwrap();
    let pass = strays.is_empty() && test.passes(1e-3);
    (pass, format!("{} cells, chi2={:.2} dof={} p={:.4}", cells.len(), test.statistic, test.dof, test.p_value), strays)
}

fn c5_graphs(exec: &Executor) -> Outcome {
    let mut p = ProcessSpec::GraphGrowth.instantiate(20240513, 0);
    let mut observed = BTreeSet::new();
    for _ in 0..1275 {
        if p.step().is_valid() {
            observed.insert(p.time());
        }
    }
    let expected: BTreeSet<u64> = (1..=50).map(|i| i * (i + 1) / 2).collect();
    let schedule_ok = observed == expected;
    let (uniform, detail, _) = uniformity_at(&ProcessSpec::GraphGrowth, &Domain::Graphs, 3, 6, 80_000, 20240506, exec);
    outcome(schedule_ok && uniform, format!("valid times match={schedule_ok}, {detail}"))
}

fn c6_permutations(exec: &Executor) -> Outcome {
    let (uniform, detail, strays) =
        uniformity_at(&ProcessSpec::PermutationFromScratch, &Domain::Permutations, 4, 10, 240_000, 20240505, exec);
    // strays would include any non-bijection
    outcome(uniform, format!("{detail}, non-bijections {}", strays.len()))
}

fn c7_free_group(exec: &Executor) -> Outcome {
    let process = ProcessSpec::NonBacktrackingWalk { rank: 2 };
    let outputs = exec.map(100_000, |r| process.sample_at(3, 20240508, r));
    let reduced = outputs.iter().all(|o| o.valid().and_then(Element::letters).is_some_and(is_freely_reduced));
    let (uniform, detail, _) = uniformity_at(&process, &Domain::free_group(2).unwrap(), 3, 3, 100_000, 20240508, exec);
    outcome(reduced && uniform, format!("all reduced={reduced}, {detail}"))
}

fn c8_ball_uniform(exec: &Executor) -> Outcome {
    let process = ProcessSpec::ball_uniform(Alphabet::plain(2).unwrap()).unwrap();
    let outputs = exec.map(70_000, |r| process.sample_at(2, 20240507, r));
    let mut counts = [0u64; 3];
    for o in &outputs {
        counts[o.valid().and_then(Element::letters).unwrap().len()] += 1;
    }
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / 70_000.0).collect();
    let target = [1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0];
    let ok = freq.iter().zip(target).all(|(f, t)| (f - t).abs() <= 0.01);
    let chi = chi_square(&counts, &[1.0, 2.0, 4.0]).unwrap();
    outcome(ok, format!("frequencies {:.4?} vs (1/7, 2/7, 4/7), chi2 p={:.3}", freq, chi.p_value))
}

fn c9_density() -> Outcome {
    let words = |m| Domain::Words(Alphabet::plain(m).unwrap());
    let cases = [
        (words(2), Subset::StartsWith(b'a')),
        (words(3), Subset::ContainsFactor(b"aa".to_vec())),
        (words(2), Subset::Not(Box::new(Subset::ContainsFactor(b"ab".to_vec())))),
        (Domain::free_group(2).unwrap(), Subset::ExponentSumNonzero(b'a')),
        (Domain::Words(Alphabet::signed("t").unwrap()), Subset::ExponentSumNonzero(b't')),
    ];
    let identity = cases
        .iter()
        .all(|(d, s)| density_sequence(d, s, 10, DEFAULT_SPHERE_CAP).unwrap().weighted_average_holds());
    let seq = density_sequence(&words(2), &Subset::StartsWith(b'a'), 12, DEFAULT_SPHERE_CAP).unwrap();
    let half = BigRational::new(1.into(), 2.into());
    let bound_ok = seq.points.iter().all(|p| {
        let d = p.ball_density.clone().unwrap();
        let gap = if d > half { &d - &half } else { &half - &d };
        gap <= BigRational::new(1.into(), BigInt::from(2).pow(p.n))
    });
    outcome(identity && bound_ok, format!("identity on 5 subsets={identity}, |ball - 1/2| <= 2^-n for n <= 12: {bound_ok}"))
}

fn c10_classifier(exec: &Executor) -> Outcome {
    let acceptor = Trivial::SyntheticAcceptor;
    let one = BoundSpec::constant(1);
    let classify = |curve: AcceptanceCurve, grid: &[u64], samples: u64, seed: u64| {
        let process = ProcessSpec::synthetic(curve).unwrap();
        let sweep = Sweep::new(grid, samples, seed, Mode::Unconditional, exec);
        let c = estimate_success_curve(&process, &acceptor, &one, &sweep).unwrap();
        classify_limit(&points(&c), &Thresholds::default()).unwrap()
    };
    let strong = classify(AcceptanceCurve::OneMinusPower { base: 2.0 }, &(1..=12).collect::<Vec<_>>(), 100_000, 20240509);
    let inverse = classify(AcceptanceCurve::OneMinusInverse, &(1..=20).map(|i| 10 * i).collect::<Vec<_>>(), 10_000, 20240514);
    let half = classify(AcceptanceCurve::Constant(0.5), &(1..=12).collect::<Vec<_>>(), 10_000, 20240515);
    let pass = strong.classification == Classification::EvidenceStrongGeneric
        && inverse.classification == Classification::EvidenceGeneric
        && !inverse.strong
        && half.classification == Classification::Negative;
    outcome(
        pass,
        format!(
            "1-2^-n {}, 1-1/n {} (strong={}, R2={:.3}), 1/2 {}",
            strong.classification.label(),
            inverse.classification.label(),
            inverse.strong,
            inverse.diagnostics.exp_fit_r2.unwrap_or(f64::NAN),
            half.classification.label()
        ),
    )
}

fn bundled_configs() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn c11_determinism() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    let configs = bundled_configs();
    for config in &configs {
        let stem = config.file_stem().unwrap().to_string_lossy().to_string();
        let mut outputs = Vec::new();
        for threads in ["1", "8"] {
            let out = root.path().join(format!("{stem}-{threads}"));
            let status = Command::new(env!("CARGO_BIN_EXE_genericase"))
                .args(["run", config.to_str().unwrap(), "--threads", threads, "--out", out.to_str().unwrap()])
                .output()
                .unwrap();
            if !status.status.success() {
                differing.push(format!("{stem}: exit {:?}", status.status.code()));
            }
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
                .map(|d| d.map(|e| e.unwrap().path()).collect::<Vec<_>>())
                .unwrap_or_default()
                .into_iter()
                .filter(|p| p.file_name().unwrap() != "manifest.json")
                .map(|p| (p.file_name().unwrap().to_string_lossy().to_string(), std::fs::read(&p).unwrap()))
                .collect();
            files.sort();
            outputs.push(files);
        }
        if outputs[0] != outputs[1] || outputs[0].len() != 2 {
            differing.push(stem);
        }
    }
    outcome(differing.is_empty(), format!("{} bundled configs, differing {differing:?}", configs.len()))
}

fn main() {
    let exec = Executor::new(0);
    let secs = |s| Some(Duration::from_secs(s));
    let results = [
        ("1 ball cardinality", timed(secs(10), c1_ball_formula)),
        ("2 two-element example", timed(secs(5), || c2_two_element(&exec))),
        ("3 exponent-sum divergence", timed(secs(60), || c3_hnn(&exec))),
        ("4 trajectory law of large numbers", timed(secs(10), || c4_trajectory(&exec))),
        ("5 graph growth process", timed(secs(20), || c5_graphs(&exec))),
        ("6 permutation process", timed(secs(20), || c6_permutations(&exec))),
        ("7 free-group walk", timed(secs(10), || c7_free_group(&exec))),
        ("8 ball-uniform sampler", timed(None, || c8_ball_uniform(&exec))),
        ("9 density engine", timed(None, c9_density)),
        ("10 classifier calibration", timed(secs(5), || c10_classifier(&exec))),
        ("11 thread-count determinism", timed(None, c11_determinism)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("criterion {name}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
