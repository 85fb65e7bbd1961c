//! Experiment configuration (TOML or JSON) and its resolution into library
//! objects.
//!
//! Every component is named by a registered identifier plus a parameter
//! table, e.g.
//!
//! ```toml
//! kind = "success-curve"
//! seed = 2015
//! grid = [50, 100, 200]
//! samples = 10000
//!
//! [process]
//! name = "uniform-word"
//! generators = "tab"
//!
//! [machine]
//! name = "exponent-sum"
//! generator = "t"
//!
//! [bound]
//! template = "linear"
//! c = 1.0
//! b = 1.0
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domains::{Alphabet, Domain, DomainError, Subset};
use crate::estimator::{BoundSpec, BoundTemplate, EstimateError, Mode, Thresholds};
use crate::machines::{Dfa, DfaMembership, ExponentSum, IndicatorOracle, Machine, MachineError, Table, TableAction, Trivial};
use crate::processes::{AcceptanceCurve, ProcessSpec};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SuccessCurve,
    PropertyCurve,
    Density,
    Audit,
    Trajectory,
    Calibrate,
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::SuccessCurve => "success-curve",
            ExperimentKind::PropertyCurve => "property-curve",
            ExperimentKind::Density => "density",
            ExperimentKind::Audit => "audit",
            ExperimentKind::Trajectory => "trajectory",
            ExperimentKind::Calibrate => "calibrate",
        }
    }
}

/// A word alphabet: explicit `letters`, the first `m` letters, or the
/// signed alphabet of `generators`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub letters: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<String>,
}

impl AlphabetConfig {
    fn resolve(&self) -> Result<Alphabet, DomainError> {
        match (&self.letters, self.m, &self.generators) {
            (Some(l), None, None) => Alphabet::new(l),
            (None, Some(m), None) => Alphabet::plain(m),
            (None, None, Some(g)) => Alphabet::signed(g),
            _ => Err(DomainError::InvalidParameters(
                "give exactly one of `letters`, `m`, `generators`".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProcessConfig {
    IidToken {
        letters: String,
    },
    UniformWord {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        letters: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<String>,
    },
    NonbacktrackingWalk {
        rank: usize,
    },
    RestrictedSubalphabet {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<String>,
        letters: String,
    },
    BallUniform {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        letters: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
    },
    GraphGrowth {},
    PermutationFromScratch {},
    SyntheticBernoulli {
        /// `constant`, `one-minus-power` or `one-minus-inverse`.
        curve: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<f64>,
    },
}

impl ProcessConfig {
    pub fn resolve(&self) -> Result<ProcessSpec, DomainError> {
        let alphabet = |letters: &Option<String>, m: Option<usize>, generators: &Option<String>| {
            AlphabetConfig { letters: letters.clone(), m, generators: generators.clone() }.resolve()
        };
        Ok(match self {
            ProcessConfig::IidToken { letters } => ProcessSpec::IidToken(Alphabet::new(letters)?),
            ProcessConfig::UniformWord { letters, m, generators } => {
                ProcessSpec::UniformWord(alphabet(letters, *m, generators)?)
            }
            ProcessConfig::NonbacktrackingWalk { rank } => {
                Domain::free_group(*rank)?;
                ProcessSpec::NonBacktrackingWalk { rank: *rank }
            }
            ProcessConfig::RestrictedSubalphabet { alphabet: full, generators, letters } => {
                ProcessSpec::restricted(alphabet(full, None, generators)?, Alphabet::new(letters)?)?
            }
            ProcessConfig::BallUniform { letters, m } => ProcessSpec::ball_uniform(alphabet(letters, *m, &None)?)?,
            ProcessConfig::GraphGrowth {} => ProcessSpec::GraphGrowth,
            ProcessConfig::PermutationFromScratch {} => ProcessSpec::PermutationFromScratch,
            ProcessConfig::SyntheticBernoulli { curve, p, base } => {
                let curve = match (curve.as_str(), p, base) {
                    ("constant", Some(p), None) => AcceptanceCurve::Constant(*p),
                    ("one-minus-power", None, Some(b)) => AcceptanceCurve::OneMinusPower { base: *b },
                    ("one-minus-inverse", None, None) => AcceptanceCurve::OneMinusInverse,
                    _ => {
                        return Err(DomainError::InvalidParameters(format!(
                            "curve {curve:?}: expected constant (with p), one-minus-power (with base) or one-minus-inverse"
                        )))
                    }
                };
                ProcessSpec::synthetic(curve)?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainConfig {
    Tokens {
        letters: String,
    },
    Words {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        letters: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<String>,
    },
    FreeGroup {
        rank: usize,
    },
    Graphs {},
    Permutations {},
}

impl DomainConfig {
    pub fn resolve(&self) -> Result<Domain, DomainError> {
        Ok(match self {
            DomainConfig::Tokens { letters } => Domain::Tokens(Alphabet::new(letters)?),
            DomainConfig::Words { letters, m, generators } => Domain::Words(
                AlphabetConfig { letters: letters.clone(), m: *m, generators: generators.clone() }.resolve()?,
            ),
            DomainConfig::FreeGroup { rank } => Domain::free_group(*rank)?,
            DomainConfig::Graphs {} => Domain::Graphs,
            DomainConfig::Permutations {} => Domain::Permutations,
        })
    }
}

fn single_letter(field: &str, s: &str) -> Result<u8, DomainError> {
    match s.as_bytes() {
        [l] if l.is_ascii_alphabetic() => Ok(*l),
        _ => Err(DomainError::InvalidParameters(format!("{field} must be a single letter, got {s:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SubsetConfig {
    All {},
    Empty {},
    StartsWith { letter: String },
    ContainsFactor { factor: String },
    ExponentSumNonzero { generator: String },
    HasEdge {},
    HasFixedPoint {},
    Not { inner: Box<SubsetConfig> },
}

impl SubsetConfig {
    pub fn resolve(&self) -> Result<Subset, DomainError> {
        Ok(match self {
            SubsetConfig::All {} => Subset::All,
            SubsetConfig::Empty {} => Subset::Empty,
            SubsetConfig::StartsWith { letter } => Subset::StartsWith(single_letter("letter", letter)?),
            SubsetConfig::ContainsFactor { factor } => Subset::ContainsFactor(factor.as_bytes().to_vec()),
            SubsetConfig::ExponentSumNonzero { generator } => {
                Subset::ExponentSumNonzero(single_letter("generator", generator)?)
            }
            SubsetConfig::HasEdge {} => Subset::HasEdge,
            SubsetConfig::HasFixedPoint {} => Subset::HasFixedPoint,
            SubsetConfig::Not { inner } => Subset::Not(Box::new(inner.resolve()?)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableActionKind {
    Output,
    Halt,
    Diverge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntryConfig {
    pub input: String,
    pub action: TableActionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MachineConfig {
    ExponentSum {
        #[serde(default = "default_generator")]
        generator: String,
    },
    Table {
        entries: Vec<TableEntryConfig>,
    },
    /// The table machine `a ↦ halt in one tick`, `b ↦ diverge`.
    TwoElement {},
    DfaMembership {
        /// Only `starts-with` is built in.
        language: String,
        letter: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        letters: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
    },
    InstantHalt {},
    NeverHalt {},
    ConstantOutput {
        label: String,
    },
    SyntheticAcceptor {},
}

fn default_generator() -> String {
    "t".into()
}

impl MachineConfig {
    pub fn resolve(&self) -> Result<Box<dyn Machine>, MachineError> {
        let invalid = |e: DomainError| MachineError::InvalidParameters(e.to_string());
        Ok(match self {
            MachineConfig::ExponentSum { generator } => {
                Box::new(ExponentSum::new(single_letter("generator", generator).map_err(invalid)?)?)
            }
            MachineConfig::Table { entries } => {
                let mut table = Table::new();
                for e in entries {
                    let steps = e.steps.unwrap_or(1);
                    let action = match e.action {
                        TableActionKind::Output => TableAction::Output {
                            label: e.label.clone().ok_or_else(|| {
                                MachineError::InvalidParameters(format!("entry {:?} needs a label", e.input))
                            })?,
                            steps,
                        },
                        TableActionKind::Halt => TableAction::Halt { steps },
                        TableActionKind::Diverge => TableAction::Diverge,
                    };
                    table = table.with(&e.input, action)?;
                }
                Box::new(table)
            }
            MachineConfig::TwoElement {} => Box::new(Table::two_element()),
            MachineConfig::DfaMembership { language, letter, letters, m } => {
                if language != "starts-with" {
                    return Err(MachineError::InvalidParameters(format!(
                        "unknown language {language:?}; built in: starts-with"
                    )));
                }
                let alphabet = AlphabetConfig { letters: letters.clone(), m: *m, generators: None }
                    .resolve()
                    .map_err(invalid)?;
                let letter = single_letter("letter", letter).map_err(invalid)?;
                Box::new(DfaMembership::new(Dfa::starts_with(alphabet, letter)?))
            }
            MachineConfig::InstantHalt {} => Box::new(Trivial::InstantHalt),
            MachineConfig::NeverHalt {} => Box::new(Trivial::NeverHalt),
            MachineConfig::ConstantOutput { label } => Box::new(Trivial::ConstantOutput(label.clone())),
            MachineConfig::SyntheticAcceptor {} => Box::new(Trivial::SyntheticAcceptor),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    /// `constant`, `linear`, `polynomial` or `exponential`.
    pub template: String,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<f64>,
}

impl BoundConfig {
    pub fn resolve(&self) -> Result<BoundSpec, EstimateError> {
        let template = match (self.template.as_str(), self.degree, self.base) {
            ("constant", None, None) => BoundTemplate::Constant,
            ("linear", None, None) => BoundTemplate::Linear,
            ("polynomial", Some(degree), None) => BoundTemplate::Polynomial { degree },
            ("exponential", None, Some(base)) => BoundTemplate::Exponential { base },
            (t, _, _) => {
                return Err(EstimateError::InvalidArgument(format!(
                    "bound template {t:?}: expected constant, linear, polynomial (with degree) or exponential (with base)"
                )))
            }
        };
        BoundSpec::new(template, self.c, self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub subset: SubsetConfig,
    pub member: String,
    pub nonmember: String,
}

impl OracleConfig {
    pub fn resolve(&self) -> Result<IndicatorOracle, DomainError> {
        Ok(IndicatorOracle {
            subset: self.subset.resolve()?,
            member: self.member.clone(),
            nonmember: self.nonmember.clone(),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp_fit_r2_min: Option<f64>,
}

impl ThresholdConfig {
    pub fn resolve(&self) -> Result<Thresholds, EstimateError> {
        let d = Thresholds::default();
        let t = Thresholds {
            tau: self.tau.unwrap_or(d.tau),
            tail_fraction: self.tail_fraction.unwrap_or(d.tail_fraction),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            exp_fit_r2_min: self.exp_fit_r2_min.unwrap_or(d.exp_fit_r2_min),
        };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CalibrationStatistic {
    /// Chi-square over all elements of the sphere the samples land in.
    Uniformity,
    /// Chi-square of sample sizes against sphere weights `#S(j)/#B(n)`.
    SphereIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationConfig {
    pub statistic: CalibrationStatistic,
    /// Process time to sample at.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<u64>,
    /// Schedule index `i`; samples at the valid time `nᵢ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    1e-3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_bound: Option<u64>,
    /// Time from which every `W_n` is expected to be valid with positive
    /// probability (conditional mode); missing points at `n ≥ n0` are flagged.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub process: Option<ProcessConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine: Option<MachineConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<SubsetConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<ThresholdConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigFormat {
    Toml,
    Json,
}

impl ConfigFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => ConfigFormat::Json,
            _ => ConfigFormat::Toml,
        }
    }
}

/// `line N` of the first line that mentions `key` as a key or table header,
/// or `config` if none does.
fn locate(text: &str, key: &str) -> String {
    text.lines()
        .position(|line| {
            let t = line.trim_start().trim_start_matches('"');
            t.starts_with(&format!("[{key}]"))
                || t.strip_prefix(key)
                    .is_some_and(|rest| rest.trim_start().trim_start_matches('"').trim_start().starts_with(['=', ':']))
        })
        .map(|i| format!("line {}", i + 1))
        .unwrap_or_else(|| "config".into())
}

/// A validation failure at `key`, located in `text`.
pub fn invalid(text: &str, key: &str, message: impl std::fmt::Display) -> ConfigError {
    ConfigError::Invalid { location: format!("{} ({key})", locate(text, key)), message: message.to_string() }
}

impl ExperimentConfig {
    pub fn parse(text: &str, format: ConfigFormat) -> Result<Self, ConfigError> {
        match format {
            ConfigFormat::Toml => toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string())),
            ConfigFormat::Json => serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string())),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or(Mode::Unconditional)
    }

    pub fn thresholds(&self) -> Result<Thresholds, EstimateError> {
        self.verdict.unwrap_or_default().resolve()
    }
}
