//! Discrete-time random processes `W₁, W₂, …` that generate inputs.
//!
//! A process is stepped one unit of time at a time. At each time it either
//! holds a valid input in Ω or a flagged auxiliary configuration. Processes
//! that build inputs incrementally (graph growth, permutations from scratch)
//! only emit valid inputs on a deterministic schedule of times `nᵢ`.

use rand::Rng;

use crate::domains::{Alphabet, Domain, DomainError, Element, Graph};
use crate::rng::{self, ReplicaRng};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepOutput {
    Valid(Element),
    Auxiliary(Element),
}

impl StepOutput {
    pub fn valid(&self) -> Option<&Element> {
        match self {
            StepOutput::Valid(e) => Some(e),
            StepOutput::Auxiliary(_) => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, StepOutput::Valid(_))
    }

    pub fn element(&self) -> &Element {
        match self {
            StepOutput::Valid(e) | StepOutput::Auxiliary(e) => e,
        }
    }
}

/// When a process emits valid inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    AllValid,
    /// Valid exactly at the triangular times `nᵢ = i(i+1)/2`.
    Triangular,
    /// Reserved: validity decided at random. No built-in uses it.
    Stochastic,
}

impl Schedule {
    pub fn kind(&self) -> &'static str {
        match self {
            Schedule::AllValid => "AllValid",
            Schedule::Triangular => "Deterministic",
            Schedule::Stochastic => "Stochastic",
        }
    }

    pub fn is_deterministic(&self) -> bool {
        !matches!(self, Schedule::Stochastic)
    }

    /// The `i`-th valid time `nᵢ` (`i ≥ 1`), if the schedule is deterministic.
    pub fn valid_time(&self, i: u64) -> Option<u64> {
        match self {
            Schedule::AllValid => Some(i),
            Schedule::Triangular => i.checked_mul(i + 1).map(|x| x / 2),
            Schedule::Stochastic => None,
        }
    }

    /// Whether time `n` is a valid time. `None` for stochastic schedules.
    pub fn is_valid_time(&self, n: u64) -> Option<bool> {
        match self {
            Schedule::AllValid => Some(n >= 1),
            Schedule::Triangular => {
                // i(i+1)/2 = n  <=>  8n + 1 is an odd square
                let disc = 8u128 * n as u128 + 1;
                let root = (disc as f64).sqrt() as u128;
                Some(n >= 1 && (root.saturating_sub(1)..=root + 1).any(|r| r * r == disc))
            }
            Schedule::Stochastic => None,
        }
    }
}

/// `n ↦ p(n)` for the synthetic calibration process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AcceptanceCurve {
    Constant(f64),
    /// `1 − base^{−n}`
    OneMinusPower { base: f64 },
    /// `1 − 1/n`
    OneMinusInverse,
}

impl AcceptanceCurve {
    pub fn at(&self, n: u64) -> f64 {
        let p = match *self {
            AcceptanceCurve::Constant(p) => p,
            AcceptanceCurve::OneMinusPower { base } => 1.0 - base.powf(-(n as f64)),
            AcceptanceCurve::OneMinusInverse => 1.0 - 1.0 / n as f64,
        };
        p.clamp(0.0, 1.0)
    }

    fn validate(&self) -> Result<(), DomainError> {
        match *self {
            AcceptanceCurve::Constant(p) if !(0.0..=1.0).contains(&p) => {
                Err(DomainError::InvalidParameters(format!("probability {p} not in [0, 1]")))
            }
            AcceptanceCurve::OneMinusPower { base } if base.is_nan() || base <= 1.0 => {
                Err(DomainError::InvalidParameters(format!("base {base} must exceed 1")))
            }
            _ => Ok(()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AcceptanceCurve::Constant(p) => format!("{p}"),
            AcceptanceCurve::OneMinusPower { base } => format!("1-{base}^-n"),
            AcceptanceCurve::OneMinusInverse => "1-1/n".into(),
        }
    }
}

/// The token a synthetic acceptor accepts.
pub const SYNTHETIC_ACCEPT: u8 = b'a';
/// The token a synthetic acceptor rejects.
pub const SYNTHETIC_REJECT: u8 = b'b';

/// A stateful process instance. Stepping is strictly sequential.
pub trait Process: Send {
    /// Number of steps taken so far.
    fn time(&self) -> u64;

    /// Advances time by exactly one unit without materializing the output.
    fn advance(&mut self);

    /// The output `W_t` at the current time `t ≥ 1`.
    fn current(&self) -> StepOutput;

    fn step(&mut self) -> StepOutput {
        self.advance();
        self.current()
    }
}

/// A process description: name plus parameters. Immutable and shareable.
#[derive(Clone, Debug, PartialEq)]
pub enum ProcessSpec {
    /// i.i.d. uniform tokens: `W_n` is a single uniform letter.
    IidToken(Alphabet),
    /// `W_n` is the length-`n` prefix of an i.i.d. uniform letter sequence.
    UniformWord(Alphabet),
    /// Simple non-backtracking walk on the free group of the given rank.
    NonBacktrackingWalk { rank: usize },
    /// Uniform words over `letters ⊂ alphabet`, as inputs in `alphabet*`.
    RestrictedSubalphabet { alphabet: Alphabet, letters: Alphabet },
    /// `W_n` uniform over the ball `B(n)` of `alphabet*`, sampled afresh.
    BallUniform(Alphabet),
    GraphGrowth,
    PermutationFromScratch,
    /// `W_n` is the accepting token with probability `p(n)`.
    SyntheticBernoulli(AcceptanceCurve),
}

impl ProcessSpec {
    pub fn restricted(alphabet: Alphabet, letters: Alphabet) -> Result<Self, DomainError> {
        if let Some(&l) = letters.letters().iter().find(|&&l| !alphabet.contains(l)) {
            return Err(DomainError::InvalidParameters(format!(
                "letter {} is not in alphabet {}",
                l as char,
                alphabet.as_str()
            )));
        }
        Ok(ProcessSpec::RestrictedSubalphabet { alphabet, letters })
    }

    pub fn ball_uniform(alphabet: Alphabet) -> Result<Self, DomainError> {
        if alphabet.len() < 2 {
            return Err(DomainError::InvalidParameters("ball-uniform needs at least 2 letters".into()));
        }
        Ok(ProcessSpec::BallUniform(alphabet))
    }

    pub fn synthetic(curve: AcceptanceCurve) -> Result<Self, DomainError> {
        curve.validate()?;
        Ok(ProcessSpec::SyntheticBernoulli(curve))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProcessSpec::IidToken(_) => "iid-token",
            ProcessSpec::UniformWord(_) => "uniform-word",
            ProcessSpec::NonBacktrackingWalk { .. } => "nonbacktracking-walk",
            ProcessSpec::RestrictedSubalphabet { .. } => "restricted-subalphabet",
            ProcessSpec::BallUniform(_) => "ball-uniform",
            ProcessSpec::GraphGrowth => "graph-growth",
            ProcessSpec::PermutationFromScratch => "permutation-from-scratch",
            ProcessSpec::SyntheticBernoulli(_) => "synthetic-bernoulli",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ProcessSpec::IidToken(a) | ProcessSpec::UniformWord(a) | ProcessSpec::BallUniform(a) => {
                format!("{}({})", self.name(), a.as_str())
            }
            ProcessSpec::NonBacktrackingWalk { rank } => format!("{}(rank={rank})", self.name()),
            ProcessSpec::RestrictedSubalphabet { alphabet, letters } => {
                format!("{}({} in {})", self.name(), letters.as_str(), alphabet.as_str())
            }
            ProcessSpec::SyntheticBernoulli(c) => format!("{}(p={})", self.name(), c.describe()),
            _ => self.name().to_string(),
        }
    }

    /// The input set Ω the valid outputs live in.
    pub fn domain(&self) -> Domain {
        match self {
            ProcessSpec::IidToken(a) => Domain::Tokens(a.clone()),
            ProcessSpec::UniformWord(a) | ProcessSpec::BallUniform(a) => Domain::Words(a.clone()),
            ProcessSpec::RestrictedSubalphabet { alphabet, .. } => Domain::Words(alphabet.clone()),
            ProcessSpec::NonBacktrackingWalk { rank } => Domain::FreeGroup { rank: *rank },
            ProcessSpec::GraphGrowth => Domain::Graphs,
            ProcessSpec::PermutationFromScratch => Domain::Permutations,
            ProcessSpec::SyntheticBernoulli(_) => {
                Domain::Tokens(Alphabet::new("ab").expect("static alphabet"))
            }
        }
    }

    pub fn schedule(&self) -> Schedule {
        match self {
            ProcessSpec::GraphGrowth | ProcessSpec::PermutationFromScratch => Schedule::Triangular,
            _ => Schedule::AllValid,
        }
    }

    /// A fresh instance at time 0, drawing from `rng`.
    pub fn instantiate_with(&self, rng: ReplicaRng) -> Box<dyn Process> {
        match self {
            ProcessSpec::IidToken(a) => Box::new(IidToken { rng, time: 0, letters: a.letters().to_vec(), token: 0 }),
            ProcessSpec::UniformWord(a) => Box::new(LetterSequence::new(rng, a.letters().to_vec())),
            ProcessSpec::RestrictedSubalphabet { letters, .. } => {
                Box::new(LetterSequence::new(rng, letters.letters().to_vec()))
            }
            ProcessSpec::NonBacktrackingWalk { rank } => Box::new(NonBacktrackingWalk {
                rng,
                letters: Domain::FreeGroup { rank: *rank }.alphabet().unwrap().letters().to_vec(),
                word: Vec::new(),
            }),
            ProcessSpec::BallUniform(a) => Box::new(BallUniform { rng, time: 0, letters: a.letters().to_vec(), word: Vec::new() }),
            ProcessSpec::GraphGrowth => Box::new(GraphGrowth { rng, time: 0, graph: Graph::empty(0), flips: None }),
            ProcessSpec::PermutationFromScratch => Box::new(PermutationFromScratch {
                rng,
                time: 0,
                round: 0,
                pool: Vec::new(),
                images: Vec::new(),
            }),
            ProcessSpec::SyntheticBernoulli(curve) => {
                Box::new(SyntheticBernoulli { rng, time: 0, curve: *curve, token: SYNTHETIC_REJECT })
            }
        }
    }

    /// A fresh instance seeded by `(master_seed, stream)`.
    pub fn instantiate(&self, master_seed: u64, stream: u64) -> Box<dyn Process> {
        self.instantiate_with(rng::sequential(master_seed, stream))
    }

    /// Runs a fresh replica on substream `(master_seed, stream, n)` to time
    /// `n` and returns `W_n`.
    pub fn sample_at(&self, n: u64, master_seed: u64, stream: u64) -> StepOutput {
        assert!(n >= 1, "sample_at requires n >= 1");
        let mut process = self.instantiate_with(rng::substream(master_seed, stream, n));
        for _ in 0..n {
            process.advance();
        }
        process.current()
    }
}

struct IidToken {
    rng: ReplicaRng,
    time: u64,
    letters: Vec<u8>,
    token: u8,
}

impl Process for IidToken {
    fn time(&self) -> u64 {
        self.time
    }

    fn advance(&mut self) {
        self.time += 1;
        self.token = self.letters[self.rng.random_range(0..self.letters.len())];
    }

    fn current(&self) -> StepOutput {
        assert!(self.time > 0, "process has not been stepped");
        StepOutput::Valid(Element::Token(self.token))
    }
}

struct LetterSequence {
    rng: ReplicaRng,
    letters: Vec<u8>,
    word: Vec<u8>,
}

impl LetterSequence {
    fn new(rng: ReplicaRng, letters: Vec<u8>) -> Self {
        LetterSequence { rng, letters, word: Vec::new() }
    }
}

impl Process for LetterSequence {
    fn time(&self) -> u64 {
        self.word.len() as u64
    }

    fn advance(&mut self) {
        let l = self.letters[self.rng.random_range(0..self.letters.len())];
        self.word.push(l);
    }

    fn current(&self) -> StepOutput {
        StepOutput::Valid(Element::Word(self.word.clone()))
    }
}

struct NonBacktrackingWalk {
    rng: ReplicaRng,
    /// `a A b B …`
    letters: Vec<u8>,
    word: Vec<u8>,
}

impl Process for NonBacktrackingWalk {
    fn time(&self) -> u64 {
        self.word.len() as u64
    }

    fn advance(&mut self) {
        let next = match self.word.last() {
            None => self.letters[self.rng.random_range(0..self.letters.len())],
            Some(&last) => {
                // uniform over the 2m − 1 letters other than last⁻¹
                let forbidden = crate::domains::inverse_letter(last);
                let mut idx = self.rng.random_range(0..self.letters.len() - 1);
                if self.letters[idx] == forbidden {
                    idx = self.letters.len() - 1;
                }
                self.letters[idx]
            }
        };
        self.word.push(next);
    }

    fn current(&self) -> StepOutput {
        StepOutput::Valid(Element::ReducedWord(self.word.clone()))
    }
}

struct BallUniform {
    rng: ReplicaRng,
    time: u64,
    letters: Vec<u8>,
    word: Vec<u8>,
}

impl Process for BallUniform {
    fn time(&self) -> u64 {
        self.time
    }

    fn advance(&mut self) {
        self.time += 1;
        let n = self.time;
        let m = self.letters.len();
        // Sphere index j has weight m^j; its deficit k = n − j has weight
        // m^{−k}. Draw k geometrically and reject values beyond n.
        let deficit = loop {
            let mut k = 0u64;
            while k <= n && self.rng.random_range(0..m) == 0 {
                k += 1;
            }
            if k <= n {
                break k;
            }
        };
        let length = (n - deficit) as usize;
        self.word.clear();
        for _ in 0..length {
            self.word.push(self.letters[self.rng.random_range(0..m)]);
        }
    }

    fn current(&self) -> StepOutput {
        assert!(self.time > 0, "process has not been stepped");
        StepOutput::Valid(Element::Word(self.word.clone()))
    }
}

struct GraphGrowth {
    rng: ReplicaRng,
    time: u64,
    graph: Graph,
    /// Coin flips done for the vertex being attached; `None` once committed.
    flips: Option<u32>,
}

impl Process for GraphGrowth {
    fn time(&self) -> u64 {
        self.time
    }

    fn advance(&mut self) {
        self.time += 1;
        if self.time == 1 {
            self.graph = Graph::empty(1);
            return;
        }
        let done = match self.flips {
            None => {
                self.graph.add_vertex();
                0
            }
            Some(f) if f + 1 == self.graph.vertices() => {
                self.flips = None;
                return;
            }
            Some(f) => f,
        };
        let new_vertex = self.graph.vertices();
        let other = done + 1;
        if self.rng.random_bool(0.5) {
            self.graph.add_edge(other, new_vertex).expect("fresh edge");
        }
        self.flips = Some(done + 1);
    }

    fn current(&self) -> StepOutput {
        assert!(self.time > 0, "process has not been stepped");
        let g = Element::Graph(self.graph.clone());
        match self.flips {
            None => StepOutput::Valid(g),
            Some(_) => StepOutput::Auxiliary(Element::aux(g)),
        }
    }
}

struct PermutationFromScratch {
    rng: ReplicaRng,
    time: u64,
    round: u32,
    pool: Vec<u32>,
    images: Vec<u32>,
}

impl Process for PermutationFromScratch {
    fn time(&self) -> u64 {
        self.time
    }

    fn advance(&mut self) {
        self.time += 1;
        if self.images.len() as u32 == self.round {
            // previous permutation is discarded entirely
            self.round += 1;
            self.pool = (1..=self.round).collect();
            self.images.clear();
        }
        let pick = self.rng.random_range(0..self.pool.len());
        self.images.push(self.pool.swap_remove(pick));
    }

    fn current(&self) -> StepOutput {
        assert!(self.time > 0, "process has not been stepped");
        let p = Element::Permutation(self.images.clone());
        if self.images.len() as u32 == self.round {
            StepOutput::Valid(p)
        } else {
            StepOutput::Auxiliary(Element::aux(p))
        }
    }
}

struct SyntheticBernoulli {
    rng: ReplicaRng,
    time: u64,
    curve: AcceptanceCurve,
    token: u8,
}

impl Process for SyntheticBernoulli {
    fn time(&self) -> u64 {
        self.time
    }

    fn advance(&mut self) {
        self.time += 1;
        let accept = self.rng.random::<f64>() < self.curve.at(self.time);
        self.token = if accept { SYNTHETIC_ACCEPT } else { SYNTHETIC_REJECT };
    }

    fn current(&self) -> StepOutput {
        assert!(self.time > 0, "process has not been stepped");
        StepOutput::Valid(Element::Token(self.token))
    }
}
