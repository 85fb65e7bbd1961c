//! Config-driven experiment execution with reproducible file outputs.
//!
//! Each run writes a data CSV, `verdict.json` and `manifest.json` into the
//! output directory. The CSV and verdict depend only on the config and the
//! effective seed; the manifest additionally records run metadata.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::{invalid, CalibrationStatistic, ConfigError, ConfigFormat, ExperimentConfig, ExperimentKind};
use crate::density::{density_sequence, fraction_text, to_f64};
use crate::domains::{DomainError, Element, DEFAULT_SPHERE_CAP};
use crate::estimator::{
    classify_limit, correctness_audit, estimate_property_curve, estimate_success_curve, trajectory_halt_fraction,
    Curve, EstimateError, LimitPoint, Sweep, Thresholds, Verdict,
};
use crate::exec::Executor;
use crate::processes::StepOutput;
use crate::stats::chi_square;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "GENERICASE_OUT";
const FALLBACK_OUT: &str = "genericase-out";

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("resource limit: {0}")]
    Resource(DomainError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Resource(_) => 3,
            RunError::Io { .. } => 1,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    /// 0 = all cores. Never affects results.
    pub threads: usize,
    pub cap: Option<u128>,
    /// Refuse configs of any other kind.
    pub require_kind: Option<ExperimentKind>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub kind: ExperimentKind,
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub classification: Option<String>,
    pub summary: String,
    pub warnings: Vec<String>,
}

/// SHA-256 of the config bytes, hex-encoded.
pub fn config_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io { path: path.to_path_buf(), source }
}

/// Writes via a temporary sibling file and a rename.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), RunError> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Reads, validates and runs the config at `path`.
pub fn run_experiment(path: &Path, opts: &RunOptions) -> Result<RunReport, RunError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    run_config_text(&text, ConfigFormat::from_path(path), &path.display().to_string(), opts)
}

/// Runs a config given as text. `source` is recorded in the manifest.
pub fn run_config_text(text: &str, format: ConfigFormat, source: &str, opts: &RunOptions) -> Result<RunReport, RunError> {
    let mut cfg = ExperimentConfig::parse(text, format)?;
    if let Some(kind) = opts.require_kind {
        if cfg.kind != kind {
            return Err(invalid(text, "kind", format!("expected kind {:?}, found {:?}", kind.label(), cfg.kind.label())).into());
        }
    }
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    let out_dir = opts
        .out_dir
        .clone()
        .or_else(|| cfg.output.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUT));
    let ctx = Context {
        text,
        cfg: &cfg,
        digest: config_digest(text),
        executor: Executor::new(opts.threads),
        cap: opts.cap.or(cfg.cap.map(u128::from)).unwrap_or(DEFAULT_SPHERE_CAP),
    };

    let outcome = match cfg.kind {
        ExperimentKind::SuccessCurve | ExperimentKind::PropertyCurve => ctx.curve()?,
        ExperimentKind::Density => ctx.density()?,
        ExperimentKind::Audit => ctx.audit()?,
        ExperimentKind::Trajectory => ctx.trajectory()?,
        ExperimentKind::Calibrate => ctx.calibrate()?,
    };

    fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;
    let csv_path = out_dir.join(outcome.csv_name);
    let verdict_path = out_dir.join("verdict.json");
    let manifest_path = out_dir.join("manifest.json");

    let classification = outcome.verdict.as_ref().map(|v| v.classification.label().to_string());
    let verdict_doc = json!({
        "kind": cfg.kind.label(),
        "title": cfg.title,
        "seed": cfg.seed,
        "config_digest": ctx.digest,
        "classification": classification,
        "verdict": outcome.verdict,
        "thresholds": outcome.thresholds,
        "strong_flag_note": "exponential convergence is detected by a finite-sample log-linear fit (heuristic)",
        "results": outcome.results,
        "warnings": outcome.warnings,
    });
    write_atomic(&csv_path, outcome.csv.as_bytes())?;
    write_atomic(&verdict_path, pretty(&verdict_doc).as_bytes())?;

    let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = json!({
        "artifact": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config_source": source,
        "config_format": match format { ConfigFormat::Toml => "toml", ConfigFormat::Json => "json" },
        "config_digest": ctx.digest,
        "resolved": &cfg,
        "overrides": { "seed": opts.seed, "cap": opts.cap.map(|c| c.to_string()), "out": opts.out_dir },
        "sphere_cap": ctx.cap.to_string(),
        "threads": opts.threads,
        "verdict": classification,
        "files": [&csv_path, &verdict_path],
        "created_unix": created,
    });
    write_atomic(&manifest_path, pretty(&manifest).as_bytes())?;

    Ok(RunReport {
        kind: cfg.kind,
        out_dir,
        files: vec![csv_path, verdict_path, manifest_path],
        classification,
        summary: outcome.summary,
        warnings: outcome.warnings,
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

struct Outcome {
    csv_name: &'static str,
    csv: String,
    verdict: Option<Verdict>,
    thresholds: Option<Thresholds>,
    results: Value,
    summary: String,
    warnings: Vec<String>,
}

struct Context<'a> {
    text: &'a str,
    cfg: &'a ExperimentConfig,
    digest: String,
    executor: Executor,
    cap: u128,
}

impl Context<'_> {
    fn bad(&self, key: &str, message: impl std::fmt::Display) -> RunError {
        invalid(self.text, key, message).into()
    }

    fn require<'b, T>(&self, value: &'b Option<T>, key: &str) -> Result<&'b T, RunError> {
        value.as_ref().ok_or_else(|| self.bad(key, format!("{} experiments need `{key}`", self.cfg.kind.label())))
    }

    fn estimate_err(&self, key: &str, e: EstimateError) -> RunError {
        self.bad(key, e)
    }

    fn domain_err(&self, key: &str, e: DomainError) -> RunError {
        match e {
            DomainError::ResourceLimit { .. } => RunError::Resource(e),
            other => self.bad(key, other),
        }
    }

    fn grid(&self) -> Result<&[u64], RunError> {
        let grid = self.require(&self.cfg.grid, "grid")?;
        crate::estimator::validate_grid(grid).map_err(|e| self.estimate_err("grid", e))?;
        Ok(grid)
    }

    fn samples(&self) -> Result<u64, RunError> {
        match *self.require(&self.cfg.samples, "samples")? {
            0 => Err(self.bad("samples", "samples must be at least 1")),
            s => Ok(s),
        }
    }

    fn thresholds(&self) -> Result<Thresholds, RunError> {
        self.cfg.thresholds().map_err(|e| self.estimate_err("verdict", e))
    }

    fn classify(&self, points: &[LimitPoint], warnings: &mut Vec<String>) -> Result<Option<Verdict>, RunError> {
        let thresholds = self.thresholds()?;
        if points.len() < 4 {
            warnings.push(format!("only {} points; at least 4 are needed for a verdict", points.len()));
            return Ok(None);
        }
        classify_limit(points, &thresholds).map(Some).map_err(|e| self.estimate_err("verdict", e))
    }

    fn curve(&self) -> Result<Outcome, RunError> {
        let cfg = self.cfg;
        let process = self.require(&cfg.process, "process")?.resolve().map_err(|e| self.domain_err("process", e))?;
        let grid = self.grid()?;
        let sweep = Sweep::new(grid, self.samples()?, cfg.seed, cfg.mode(), &self.executor);
        let (curve, what) = if cfg.kind == ExperimentKind::SuccessCurve {
            let machine = self.require(&cfg.machine, "machine")?.resolve().map_err(|e| self.bad("machine", e))?;
            let bound = self.require(&cfg.bound, "bound")?.resolve().map_err(|e| self.estimate_err("bound", e))?;
            let curve = estimate_success_curve(&process, machine.as_ref(), &bound, &sweep)
                .map_err(|e| self.estimate_err("machine", e))?;
            (curve, format!("{} on {}, f(n) = {}", machine.name(), process.describe(), bound.describe()))
        } else {
            let subset = self.require(&cfg.subset, "subset")?.resolve().map_err(|e| self.domain_err("subset", e))?;
            let curve = estimate_property_curve(&process, &subset, &sweep).map_err(|e| self.estimate_err("process", e))?;
            (curve, format!("Pr(W_n in {}) under {}", subset.describe(), process.describe()))
        };
        let mut warnings = curve.warnings.clone();
        if let Some(n0) = cfg.n0 {
            for &n in curve.missing.iter().filter(|&&n| n >= n0) {
                warnings.push(format!("no valid sample at n={n} >= n0={n0}"));
            }
        }
        let points: Vec<LimitPoint> = curve.points.iter().map(LimitPoint::from).collect();
        let verdict = self.classify(&points, &mut warnings)?;
        Ok(Outcome {
            csv_name: "curve.csv",
            csv: curve_csv(&curve),
            summary: curve_summary(&what, &curve, verdict.as_ref()),
            results: json!({ "points": curve.points, "missing": curve.missing }),
            thresholds: Some(self.thresholds()?),
            verdict,
            warnings,
        })
    }

    fn density(&self) -> Result<Outcome, RunError> {
        let cfg = self.cfg;
        let domain = self.require(&cfg.domain, "domain")?.resolve().map_err(|e| self.domain_err("domain", e))?;
        let subset = self.require(&cfg.subset, "subset")?.resolve().map_err(|e| self.domain_err("subset", e))?;
        let n_max = *self.require(&cfg.n_max, "n_max")?;
        let seq = density_sequence(&domain, &subset, n_max, self.cap).map_err(|e| self.domain_err("n_max", e))?;

        let mut csv = String::from("n,sphereCount,sphereHits,sphereDensity,sphereDensityDecimal,ballDensity,ballDensityDecimal\n");
        let cell = |r: &Option<num_rational::BigRational>| match r {
            Some(r) => (fraction_text(r), format!("{:.9}", to_f64(r))),
            None => (String::new(), String::new()),
        };
        let mut table = format!("density of {} in {}\n{:>4} {:>10} {:>10} {:>12} {:>12}\n", subset.describe(), domain.describe(), "n", "|S(n)|", "hits", "sphere", "ball");
        for p in &seq.points {
            let (sf, sd) = cell(&p.sphere_density);
            let (bf, bd) = cell(&p.ball_density);
            writeln!(csv, "{},{},{},{sf},{sd},{bf},{bd}", p.n, p.sphere_count, p.sphere_hits).unwrap();
            writeln!(table, "{:>4} {:>10} {:>10} {:>12} {:>12}", p.n, p.sphere_count, p.sphere_hits, sd, bd).unwrap();
        }
        let sphere_points: Vec<LimitPoint> = seq
            .points
            .iter()
            .filter(|p| p.n >= 1)
            .filter_map(|p| p.sphere_density.as_ref().map(|d| LimitPoint { n: p.n as u64, value: to_f64(d), samples: None }))
            .collect();
        let mut warnings = Vec::new();
        let verdict = self.classify(&sphere_points, &mut warnings)?;
        let identity = seq.weighted_average_holds();
        let frac = |r: &Option<num_rational::BigRational>| r.as_ref().map(fraction_text);
        if let Some(v) = &verdict {
            writeln!(table, "verdict (sphere densities): {}", v.classification.label()).unwrap();
        }
        writeln!(table, "weighted-average identity: {}", if identity { "holds" } else { "VIOLATED" }).unwrap();
        Ok(Outcome {
            csv_name: "density.csv",
            csv,
            summary: table,
            results: json!({
                "weighted_average_identity": identity,
                "window": seq.sphere_window.window,
                "sphere_window_min": frac(&seq.sphere_window.min),
                "sphere_window_max": frac(&seq.sphere_window.max),
                "ball_window_min": frac(&seq.ball_window.min),
                "ball_window_max": frac(&seq.ball_window.max),
            }),
            thresholds: Some(self.thresholds()?),
            verdict,
            warnings,
        })
    }

    fn audit(&self) -> Result<Outcome, RunError> {
        let cfg = self.cfg;
        let process = self.require(&cfg.process, "process")?.resolve().map_err(|e| self.domain_err("process", e))?;
        let machine = self.require(&cfg.machine, "machine")?.resolve().map_err(|e| self.bad("machine", e))?;
        let oracle = self.require(&cfg.oracle, "oracle")?.resolve().map_err(|e| self.domain_err("oracle", e))?;
        let bound = self.require(&cfg.bound, "bound")?.resolve().map_err(|e| self.estimate_err("bound", e))?;
        let grid = self.grid()?;
        let sweep = Sweep::new(grid, self.samples()?, cfg.seed, cfg.mode(), &self.executor);
        let audit = correctness_audit(&process, machine.as_ref(), &oracle, &bound, &sweep)
            .map_err(|e| self.estimate_err("machine", e))?;

        let mut csv = String::from("n,N,produced,coverage,coverageLow,coverageHigh,correct,correctness,correctnessLow,correctnessHigh,mode\n");
        let mut table = format!(
            "audit of {} against {} under {}\n{:>8} {:>8} {:>10} {:>12}\n",
            machine.name(),
            oracle.subset.describe(),
            process.describe(),
            "n",
            "N",
            "coverage",
            "correctness"
        );
        for p in &audit.points {
            let c = &p.coverage;
            let (correct, corr) = match &p.correctness {
                Some(k) => (k.successes.to_string(), format!("{:.6},{:.6},{:.6}", k.p_hat, k.ci_low, k.ci_high)),
                None => (String::new(), ",,".into()),
            };
            writeln!(
                csv,
                "{},{},{},{:.6},{:.6},{:.6},{correct},{corr},{}",
                p.n, c.trials, c.successes, c.p_hat, c.ci_low, c.ci_high, audit.mode.label()
            )
            .unwrap();
            let corr_text = p.correctness.map(|k| format!("{:.4}", k.p_hat)).unwrap_or_else(|| "-".into());
            writeln!(table, "{:>8} {:>8} {:>10.4} {:>12}", p.n, c.trials, c.p_hat, corr_text).unwrap();
        }
        let correct_for_h = audit.points.iter().all(|p| p.correctness.is_none_or(|k| k.successes == k.trials));
        let coverage: Vec<LimitPoint> = audit
            .points
            .iter()
            .map(|p| LimitPoint { n: p.n, value: p.coverage.p_hat, samples: Some(p.coverage.trials) })
            .collect();
        let mut warnings = audit.warnings.clone();
        let verdict = self.classify(&coverage, &mut warnings)?;
        writeln!(table, "correct for h on every produced output: {correct_for_h}").unwrap();
        if let Some(v) = &verdict {
            writeln!(table, "coverage verdict: {}", v.classification.label()).unwrap();
        }
        Ok(Outcome {
            csv_name: "audit.csv",
            csv,
            summary: table,
            results: json!({ "points": audit.points, "correct_for_h": correct_for_h }),
            thresholds: Some(self.thresholds()?),
            verdict,
            warnings,
        })
    }

    fn trajectory(&self) -> Result<Outcome, RunError> {
        let cfg = self.cfg;
        let process = self.require(&cfg.process, "process")?.resolve().map_err(|e| self.domain_err("process", e))?;
        let machine = self.require(&cfg.machine, "machine")?.resolve().map_err(|e| self.bad("machine", e))?;
        let step_bound = *self.require(&cfg.step_bound, "step_bound")?;
        let trials = self.samples()?;
        let mut csv = String::from("n,trials,met,frequency,ciLow,ciHigh,meanFraction\n");
        let mut table = format!(
            "Pr(at least n/3 of W_1..W_n produced within {step_bound} ticks), {} on {}\n{:>8} {:>10} {:>10}\n",
            machine.name(),
            process.describe(),
            "n",
            "frequency",
            "mean frac"
        );
        let mut rows = Vec::new();
        for &n in self.grid()? {
            let t = trajectory_halt_fraction(&process, machine.as_ref(), step_bound, n, trials, cfg.seed, &self.executor)
                .map_err(|e| self.estimate_err("machine", e))?;
            let m = &t.threshold_met;
            writeln!(csv, "{n},{},{},{:.6},{:.6},{:.6},{:.6}", m.trials, m.successes, m.p_hat, m.ci_low, m.ci_high, t.mean_fraction).unwrap();
            writeln!(table, "{n:>8} {:>10.4} {:>10.4}", m.p_hat, t.mean_fraction).unwrap();
            rows.push(t);
        }
        Ok(Outcome {
            csv_name: "trajectory.csv",
            csv,
            summary: table,
            results: json!({ "rows": rows }),
            thresholds: None,
            verdict: None,
            warnings: Vec::new(),
        })
    }

    fn calibrate(&self) -> Result<Outcome, RunError> {
        let cfg = self.cfg;
        let process = self.require(&cfg.process, "process")?.resolve().map_err(|e| self.domain_err("process", e))?;
        let cal = *self.require(&cfg.calibration, "calibration")?;
        let samples = self.samples()?;
        let time = match (cal.time, cal.index) {
            (Some(t), None) if t >= 1 => t,
            (None, Some(i)) if i >= 1 => process
                .schedule()
                .valid_time(i)
                .ok_or_else(|| self.bad("calibration", "index needs a deterministic schedule"))?,
            _ => return Err(self.bad("calibration", "give exactly one of `time` or `index` (both >= 1)")),
        };
        if !(cal.alpha > 0.0 && cal.alpha < 1.0) {
            return Err(self.bad("calibration", format!("alpha {} not in (0, 1)", cal.alpha)));
        }
        let outputs: Vec<StepOutput> = self.executor.map(samples, |r| process.sample_at(time, cfg.seed, r));
        let valid: Vec<&Element> = outputs.iter().filter_map(StepOutput::valid).collect();
        let mut warnings = Vec::new();
        if valid.len() < outputs.len() {
            warnings.push(format!("{} of {} samples were auxiliary and are excluded", outputs.len() - valid.len(), outputs.len()));
        }
        let domain = process.domain();
        let sizes: Vec<u64> = valid
            .iter()
            .map(|e| domain.size_of(e))
            .collect::<Result<_, _>>()
            .map_err(|e| self.bad("process", e))?;

        let (labels, observed, expected): (Vec<String>, Vec<u64>, Vec<f64>) = match cal.statistic {
            CalibrationStatistic::Uniformity => {
                let size = sizes.first().copied().ok_or_else(|| self.bad("calibration", "no valid samples"))?;
                if sizes.iter().any(|&s| s != size) {
                    return Err(self.bad("calibration", "uniformity needs all samples in one sphere; use sphere-index"));
                }
                let size = u32::try_from(size).map_err(|_| self.bad("calibration", "sphere index too large"))?;
                let cells = domain.enumerate_sphere(size, self.cap).map_err(|e| self.domain_err("calibration", e))?;
                let index: HashMap<&Element, usize> = cells.iter().enumerate().map(|(i, e)| (e, i)).collect();
                let mut counts = vec![0u64; cells.len()];
                for e in &valid {
                    counts[index[e]] += 1;
                }
                let labels = cells.iter().map(Element::to_text).collect();
                (labels, counts, vec![1.0; cells.len()])
            }
            CalibrationStatistic::SphereIndex => {
                let n = u32::try_from(time).map_err(|_| self.bad("calibration", "time too large"))?;
                let weights: Vec<f64> = (0..=n)
                    .map(|j| domain.sphere_size(j).map(|s| s as f64))
                    .collect::<Result<_, _>>()
                    .map_err(|e| self.domain_err("calibration", e))?;
                let mut counts = vec![0u64; weights.len()];
                for &s in &sizes {
                    let slot = counts
                        .get_mut(s as usize)
                        .ok_or_else(|| self.bad("calibration", format!("sample of size {s} exceeds time {n}")))?;
                    *slot += 1;
                }
                let keep: Vec<usize> = (0..weights.len()).filter(|&j| weights[j] > 0.0).collect();
                (
                    keep.iter().map(|j| j.to_string()).collect(),
                    keep.iter().map(|&j| counts[j]).collect(),
                    keep.iter().map(|&j| weights[j]).collect(),
                )
            }
        };
        let test = chi_square(&observed, &expected).ok_or_else(|| self.bad("calibration", "need at least two cells"))?;
        let total: u64 = observed.iter().sum();
        let mass: f64 = expected.iter().sum();
        let mut csv = String::from("cell,observed,expectedCount,frequency,expectedFrequency\n");
        for ((label, &o), &e) in labels.iter().zip(&observed).zip(&expected) {
            writeln!(csv, "{label},{o},{:.6},{:.6},{:.6}", total as f64 * e / mass, o as f64 / total as f64, e / mass).unwrap();
        }
        let pass = test.passes(cal.alpha);
        let summary = format!(
            "{:?} calibration of {} at time {time}: {} cells, {total} samples\nchi-square = {:.3} (dof {}), p = {:.4}, alpha = {}: {}\n",
            cal.statistic,
            process.describe(),
            observed.len(),
            test.statistic,
            test.dof,
            test.p_value,
            cal.alpha,
            if pass { "PASS" } else { "FAIL" }
        );
        Ok(Outcome {
            csv_name: "calibration.csv",
            csv,
            summary,
            results: json!({ "time": time, "chi_square": test, "alpha": cal.alpha, "pass": pass, "valid_samples": total }),
            thresholds: None,
            verdict: None,
            warnings,
        })
    }
}

fn curve_csv(curve: &Curve) -> String {
    let mut csv = String::from("n,N,k,pHat,ciLow,ciHigh,mode\n");
    for p in &curve.points {
        let e = &p.estimate;
        writeln!(csv, "{},{},{},{:.6},{:.6},{:.6},{}", p.n, e.trials, e.successes, e.p_hat, e.ci_low, e.ci_high, curve.mode.label())
            .unwrap();
    }
    csv
}

fn curve_summary(what: &str, curve: &Curve, verdict: Option<&Verdict>) -> String {
    let mut s = format!("{what} [{}]\n{:>8} {:>8} {:>8} {:>10} {:>20}\n", curve.mode.label(), "n", "N", "k", "pHat", "95% CI");
    for p in &curve.points {
        let e = &p.estimate;
        writeln!(s, "{:>8} {:>8} {:>8} {:>10.4}   [{:.4}, {:.4}]", p.n, e.trials, e.successes, e.p_hat, e.ci_low, e.ci_high).unwrap();
    }
    if let Some(v) = verdict {
        writeln!(s, "verdict: {} (tail min {:.4}, tau {})", v.classification.label(), v.diagnostics.tail_min, v.thresholds.tau).unwrap();
    }
    s
}

