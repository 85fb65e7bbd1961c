//! Step-counted partial algorithms.
//!
//! A machine loads an input and is then ticked one unit of time at a time.
//! Each tick either continues, produces an output label, or halts without
//! output. The running time `t(w)` is the index of the producing tick, or
//! infinite when the machine never produces. Running with fuel `f` decides
//! the event `t(w) ≤ f` exactly.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::domains::{exponent_sum, Alphabet, Element, Subset};
use crate::processes::SYNTHETIC_ACCEPT;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("machine {machine} does not accept input {element}")]
    DomainMismatch { machine: String, element: String },
    #[error("fuel must be at least 1")]
    ZeroFuel,
    #[error("invalid machine parameters: {0}")]
    InvalidParameters(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Continue,
    Output(String),
    HaltNoOutput,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Produced { value: String, steps: u64 },
    /// Halted without output: `t(w) = ∞`.
    RejectedHalt { steps: u64 },
    /// Still running after `fuel` ticks: `t(w) > fuel`.
    FuelExhausted { fuel: u64 },
}

impl RunOutcome {
    pub fn is_produced(&self) -> bool {
        matches!(self, RunOutcome::Produced { .. })
    }

    pub fn value(&self) -> Option<&str> {
        match self {
            RunOutcome::Produced { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Per-run machine state.
pub trait Tick: Send {
    fn tick(&mut self) -> StepResult;
}

/// The tick contract.
pub trait Machine: Send + Sync {
    fn name(&self) -> String;

    /// Loads an input. Fails on inputs outside the machine's domain.
    fn load(&self, element: &Element) -> Result<Box<dyn Tick>, MachineError>;
}

/// A loaded machine. Ticking after a halt is a contract violation and panics.
pub struct Session {
    state: Box<dyn Tick>,
    ticks: u64,
    halted: bool,
}

impl Session {
    pub fn new(machine: &dyn Machine, element: &Element) -> Result<Self, MachineError> {
        Ok(Session { state: machine.load(element)?, ticks: 0, halted: false })
    }

    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    pub fn tick(&mut self) -> StepResult {
        assert!(!self.halted, "tick after halt: machine contract violated");
        self.ticks += 1;
        let result = self.state.tick();
        if !matches!(result, StepResult::Continue) {
            self.halted = true;
        }
        result
    }
}

/// Runs `machine` on `element` for at most `fuel` ticks.
pub fn run(machine: &dyn Machine, element: &Element, fuel: u64) -> Result<RunOutcome, MachineError> {
    if fuel == 0 {
        return Err(MachineError::ZeroFuel);
    }
    let mut session = Session::new(machine, element)?;
    while session.ticks() < fuel {
        match session.tick() {
            StepResult::Continue => {}
            StepResult::Output(value) => return Ok(RunOutcome::Produced { value, steps: session.ticks() }),
            StepResult::HaltNoOutput => return Ok(RunOutcome::RejectedHalt { steps: session.ticks() }),
        }
    }
    Ok(RunOutcome::FuelExhausted { fuel })
}

fn mismatch(machine: &dyn Machine, element: &Element) -> MachineError {
    MachineError::DomainMismatch { machine: machine.name(), element: element.to_text() }
}

/// Label produced by [`ExponentSum`] when `σ_t(w) ≠ 0`.
pub const NOT_IN_D: &str = "not-in-D";

/// Reads a word one letter per tick, tracking `σ_g`; one more tick then
/// outputs [`NOT_IN_D`] if `σ_g ≠ 0`, and otherwise loops forever.
#[derive(Clone, Debug)]
pub struct ExponentSum {
    generator: u8,
}

impl ExponentSum {
    pub fn new(generator: u8) -> Result<Self, MachineError> {
        if !generator.is_ascii_lowercase() {
            return Err(MachineError::InvalidParameters(format!(
                "generator {:?} must be a lowercase letter",
                generator as char
            )));
        }
        Ok(ExponentSum { generator })
    }
}

struct ExponentSumState {
    word: Vec<u8>,
    generator: u8,
    read: usize,
    sum: i64,
}

impl Tick for ExponentSumState {
    fn tick(&mut self) -> StepResult {
        if self.read < self.word.len() {
            self.sum += exponent_sum(&self.word[self.read..=self.read], self.generator);
            self.read += 1;
            StepResult::Continue
        } else if self.sum != 0 {
            StepResult::Output(NOT_IN_D.to_string())
        } else {
            StepResult::Continue
        }
    }
}

impl Machine for ExponentSum {
    fn name(&self) -> String {
        format!("exponent-sum({})", self.generator as char)
    }

    fn load(&self, element: &Element) -> Result<Box<dyn Tick>, MachineError> {
        match element {
            Element::Word(w) | Element::ReducedWord(w) => Ok(Box::new(ExponentSumState {
                word: w.clone(),
                generator: self.generator,
                read: 0,
                sum: 0,
            })),
            _ => Err(mismatch(self, element)),
        }
    }
}

/// What a [`Table`] machine does on one input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableAction {
    /// Output `label` on tick `steps`.
    Output { label: String, steps: u64 },
    /// Halt without output on tick `steps`.
    Halt { steps: u64 },
    Diverge,
}

/// A finite lookup machine keyed by canonical element text. Unlisted inputs
/// diverge.
#[derive(Clone, Debug, Default)]
pub struct Table {
    entries: BTreeMap<String, TableAction>,
}

impl Table {
    pub fn new() -> Self {
        Table::default()
    }

    pub fn with(mut self, input: &str, action: TableAction) -> Result<Self, MachineError> {
        if let TableAction::Output { steps: 0, .. } | TableAction::Halt { steps: 0 } = action {
            return Err(MachineError::InvalidParameters("table steps must be at least 1".into()));
        }
        self.entries.insert(input.to_string(), action);
        Ok(self)
    }

    /// The two-element machine: `a` outputs `halt` in one tick, `b` diverges.
    pub fn two_element() -> Self {
        Table::new()
            .with("a", TableAction::Output { label: "halt".into(), steps: 1 })
            .and_then(|t| t.with("b", TableAction::Diverge))
            .expect("static table")
    }
}

struct TableState {
    action: TableAction,
    ticks: u64,
}

impl Tick for TableState {
    fn tick(&mut self) -> StepResult {
        self.ticks += 1;
        match &self.action {
            TableAction::Output { label, steps } if self.ticks == *steps => StepResult::Output(label.clone()),
            TableAction::Halt { steps } if self.ticks == *steps => StepResult::HaltNoOutput,
            _ => StepResult::Continue,
        }
    }
}

impl Machine for Table {
    fn name(&self) -> String {
        "table".into()
    }

    fn load(&self, element: &Element) -> Result<Box<dyn Tick>, MachineError> {
        if element.is_aux() {
            return Err(mismatch(self, element));
        }
        let action = self.entries.get(&element.to_text()).cloned().unwrap_or(TableAction::Diverge);
        Ok(Box::new(TableState { action, ticks: 0 }))
    }
}

/// A deterministic finite automaton over an alphabet. Missing transitions go
/// to an implicit rejecting sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    /// `transitions[state][letter index]`
    transitions: Vec<Vec<Option<usize>>>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        start: usize,
        accepting: Vec<bool>,
        transitions: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, MachineError> {
        let states = accepting.len();
        let ok = start < states
            && transitions.len() == states
            && transitions.iter().all(|row| {
                row.len() == alphabet.len() && row.iter().flatten().all(|&s| s < states)
            });
        if !ok {
            return Err(MachineError::InvalidParameters("malformed automaton".into()));
        }
        Ok(Dfa { alphabet, start, accepting, transitions })
    }

    /// Words whose first letter is `letter`.
    pub fn starts_with(alphabet: Alphabet, letter: u8) -> Result<Self, MachineError> {
        let k = alphabet.len();
        let idx = alphabet
            .letters()
            .iter()
            .position(|&l| l == letter)
            .ok_or_else(|| MachineError::InvalidParameters(format!("{} not in alphabet", letter as char)))?;
        // 0 = start, 1 = accept (absorbing), 2 = reject (absorbing)
        let start: Vec<Option<usize>> = (0..k).map(|i| Some(if i == idx { 1 } else { 2 })).collect();
        Dfa::new(alphabet, 0, vec![false, true, false], vec![start, vec![Some(1); k], vec![Some(2); k]])
    }

    pub fn accepts(&self, word: &[u8]) -> bool {
        let mut state = Some(self.start);
        for &l in word {
            state = state.and_then(|s| {
                let i = self.alphabet.letters().iter().position(|&x| x == l)?;
                self.transitions[s][i]
            });
        }
        state.is_some_and(|s| self.accepting[s])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

/// One tick per letter, then one tick outputting `accept` or `reject`.
#[derive(Clone, Debug)]
pub struct DfaMembership {
    dfa: Dfa,
}

impl DfaMembership {
    pub fn new(dfa: Dfa) -> Self {
        DfaMembership { dfa }
    }
}

struct DfaState {
    dfa: Dfa,
    word: Vec<u8>,
    read: usize,
    state: Option<usize>,
}

impl Tick for DfaState {
    fn tick(&mut self) -> StepResult {
        if self.read < self.word.len() {
            let l = self.word[self.read];
            self.state = self.state.and_then(|s| {
                let i = self.dfa.alphabet.letters().iter().position(|&x| x == l)?;
                self.dfa.transitions[s][i]
            });
            self.read += 1;
            StepResult::Continue
        } else {
            let accept = self.state.is_some_and(|s| self.dfa.accepting[s]);
            StepResult::Output(if accept { "accept" } else { "reject" }.into())
        }
    }
}

impl Machine for DfaMembership {
    fn name(&self) -> String {
        "dfa-membership".into()
    }

    fn load(&self, element: &Element) -> Result<Box<dyn Tick>, MachineError> {
        match element.letters() {
            Some(w) if !element.is_aux() => Ok(Box::new(DfaState {
                dfa: self.dfa.clone(),
                word: w.to_vec(),
                read: 0,
                state: Some(self.dfa.start),
            })),
            _ => Err(mismatch(self, element)),
        }
    }
}

/// Fixed-behavior calibration machines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trivial {
    /// Outputs `done` on the first tick.
    InstantHalt,
    NeverHalt,
    /// Outputs the label on the first tick.
    ConstantOutput(String),
    /// One tick: outputs `accept` on the accepting synthetic token, else
    /// halts without output.
    SyntheticAcceptor,
}

struct TrivialState(Trivial);

impl Tick for TrivialState {
    fn tick(&mut self) -> StepResult {
        match &self.0 {
            Trivial::InstantHalt => StepResult::Output("done".into()),
            Trivial::NeverHalt => StepResult::Continue,
            Trivial::ConstantOutput(label) => StepResult::Output(label.clone()),
            Trivial::SyntheticAcceptor => unreachable!("resolved at load"),
        }
    }
}

struct Decided(Option<String>);

impl Tick for Decided {
    fn tick(&mut self) -> StepResult {
        match self.0.take() {
            Some(v) => StepResult::Output(v),
            None => StepResult::HaltNoOutput,
        }
    }
}

impl Machine for Trivial {
    fn name(&self) -> String {
        match self {
            Trivial::InstantHalt => "instant-halt".into(),
            Trivial::NeverHalt => "never-halt".into(),
            Trivial::ConstantOutput(l) => format!("constant-output({l})"),
            Trivial::SyntheticAcceptor => "synthetic-acceptor".into(),
        }
    }

    fn load(&self, element: &Element) -> Result<Box<dyn Tick>, MachineError> {
        if element.is_aux() {
            return Err(mismatch(self, element));
        }
        match self {
            Trivial::SyntheticAcceptor => match element {
                Element::Token(t) => Ok(Box::new(Decided((*t == SYNTHETIC_ACCEPT).then(|| "accept".into())))),
                _ => Err(mismatch(self, element)),
            },
            other => Ok(Box::new(TrivialState(other.clone()))),
        }
    }
}

/// A reference function `h: Ω → U` for correctness audits: the indicator
/// of a subset, with configurable labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorOracle {
    pub subset: Subset,
    pub member: String,
    pub nonmember: String,
}

impl IndicatorOracle {
    pub fn label(&self, element: &Element) -> &str {
        if self.subset.contains(element) {
            &self.member
        } else {
            &self.nonmember
        }
    }
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunOutcome::Produced { value, steps } => write!(f, "Produced({value}, {steps})"),
            RunOutcome::RejectedHalt { steps } => write!(f, "RejectedHalt({steps})"),
            RunOutcome::FuelExhausted { fuel } => write!(f, "FuelExhausted({fuel})"),
        }
    }
}
