//! Runner behind the `nlinv` binary: single-strategy runs and UR-vs-hyper
//! comparisons, each writing its artifacts into an output directory.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use nlinv::circuits::{
    load_problem, synthesize, verify_circuit, CircuitError, CircuitProblem, DenialSource,
};
use nlinv::saturation::{CsvTrace, TraceSink};
use nlinv::{InferenceRule, Limits, Outcome, PickGiven, ProverConfig, RuleConfig, Stats};
use serde::{Deserialize, Serialize};

pub const COMPARE_HEADER: &str = "metric,ur,hyper,ratio_hyper_over_ur";

/// Process exit statuses.
pub const EXIT_REFUTATION: i32 = 0;
pub const EXIT_SOS_EXHAUSTED: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("problem: {0}")]
    Problem(#[from] CircuitError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Denial {
    #[default]
    TableDerived,
    PaperLiteral,
}

impl From<Denial> for DenialSource {
    fn from(d: Denial) -> Self {
        match d {
            Denial::TableDerived => DenialSource::TableDerived,
            Denial::PaperLiteral => DenialSource::Listing,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    /// Built-in name (`2inv`, `bcd`, `ninv N K`, ...) or a problem file.
    pub problem: String,
    pub rule: RuleConfig,
    pub pick_given: PickGiven,
    pub limits: Limits,
    /// Overrides the problem's NOT budget.
    pub budget: Option<usize>,
    pub denial: Denial,
    pub out: PathBuf,
}

impl RunOptions {
    pub fn new(problem: impl Into<String>, rule: RuleConfig, out: impl Into<PathBuf>) -> Self {
        RunOptions {
            problem: problem.into(),
            rule,
            pick_given: PickGiven::default(),
            limits: Limits::unbounded(),
            budget: None,
            denial: Denial::default(),
            out: out.into(),
        }
    }

    pub fn load(&self) -> Result<CircuitProblem, CliError> {
        let p = load_problem(&self.problem, self.denial.into())?;
        Ok(match self.budget {
            Some(k) => p.with_budget(k),
            None => p,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifacts {
    pub trace: PathBuf,
    pub stats: PathBuf,
    pub proof: Option<PathBuf>,
    pub circuit: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub pick_given: PickGiven,
    pub budget: usize,
    pub limits: Limits,
    pub denial: Denial,
    /// Runs are deterministic; kept for schema stability.
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: String,
    pub rule_config: RuleConfig,
    pub outcome: Outcome,
    pub exit_code: i32,
    pub stats: Stats,
    /// Whether the extracted circuit passed verification, on refutation.
    pub circuit_verified: Option<bool>,
    pub artifacts: Artifacts,
    pub meta: RunMeta,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn from_json(s: &str) -> Result<RunReport, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// The report with wall and CPU time zeroed.
    pub fn without_times(&self) -> RunReport {
        RunReport {
            stats: self.stats.without_times(),
            ..self.clone()
        }
    }
}

pub fn exit_code(o: Outcome) -> i32 {
    match o {
        Outcome::Refutation(_) => EXIT_REFUTATION,
        Outcome::SosExhausted => EXIT_SOS_EXHAUSTED,
        Outcome::LimitHit(_) => EXIT_LIMIT,
    }
}

pub fn rule_name(r: InferenceRule) -> &'static str {
    match r {
        InferenceRule::Hyper => "hyper",
        InferenceRule::Ur => "ur",
        InferenceRule::Binary => "binary",
    }
}

/// `weight`, `fifo` or `ratio:<r>`.
pub fn parse_pick_given(s: &str) -> Result<PickGiven, String> {
    match s {
        "weight" => Ok(PickGiven::Weight),
        "fifo" => Ok(PickGiven::Fifo),
        _ => s
            .strip_prefix("ratio:")
            .and_then(|r| r.parse().ok())
            .filter(|&r| r > 0)
            .map(PickGiven::Ratio)
            .ok_or_else(|| format!("expected weight, fifo or ratio:<r>, got `{s}`")),
    }
}

/// Rows of `stats.txt`, in file order.
pub fn stats_rows(s: &Stats) -> Vec<(&'static str, String)> {
    vec![
        ("clauses generated", s.clauses_generated.to_string()),
        ("clauses kept", s.clauses_kept.to_string()),
        (
            "clauses forward subsumed",
            s.clauses_forward_subsumed.to_string(),
        ),
        ("subsumed by sos", s.subsumed_by_sos.to_string()),
        ("discarded by hook", s.discarded_by_hook.to_string()),
        ("sos size (final)", s.sos_size_final.to_string()),
        ("sos size (peak)", s.sos_size_peak.to_string()),
        ("given clauses", s.given_count.to_string()),
        ("user CPU time", format!("{:.3}", s.cpu_seconds)),
        ("wall time", format!("{:.3}", s.wall_seconds)),
    ]
}

fn render_stats(s: &Stats) -> String {
    let mut out = String::new();
    for (k, v) in stats_rows(s) {
        let _ = writeln!(out, "{k:<26}{v}");
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn write_trace(path: &Path, points: &[nlinv::TracePoint]) -> Result<(), CliError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut csv = CsvTrace::new(BufWriter::new(file));
    for p in points {
        csv.record(p);
    }
    csv.finish().map(drop).map_err(io_err(path))
}

/// Runs one saturation and writes `trace.csv`, `stats.txt`, `report.json`
/// and, on refutation, `proof.txt` and `circuit.txt` into `opts.out`.
pub fn run(opts: &RunOptions) -> Result<RunReport, CliError> {
    let problem = opts.load()?;
    run_problem(&problem, opts)
}

fn run_problem(problem: &CircuitProblem, opts: &RunOptions) -> Result<RunReport, CliError> {
    let out = &opts.out;
    fs::create_dir_all(out).map_err(io_err(out))?;
    let config = ProverConfig {
        rule: opts.rule,
        pick_given: opts.pick_given,
        limits: opts.limits,
        ..ProverConfig::default()
    };
    let syn = synthesize(problem, config);
    let stats = syn.prover.stats().clone();

    let mut artifacts = Artifacts {
        trace: out.join("trace.csv"),
        stats: out.join("stats.txt"),
        proof: None,
        circuit: None,
    };
    write_trace(&artifacts.trace, syn.prover.trace())?;
    write(&artifacts.stats, &render_stats(&stats))?;

    let mut circuit_verified = None;
    if let Outcome::Refutation(id) = syn.outcome {
        if let Some(proof) = syn.prover.extract_proof(id) {
            let path = out.join("proof.txt");
            write(&path, &proof.render(&syn.encoding.symbols))?;
            artifacts.proof = Some(path);
        }
        let text = match &syn.circuit {
            Some(Ok(c)) => {
                let ok = verify_circuit(c, problem);
                circuit_verified = Some(ok);
                format!("{}verified {ok}\n", c.render(problem))
            }
            Some(Err(e)) => {
                circuit_verified = Some(false);
                format!("extraction failed: {e}\n")
            }
            None => String::new(),
        };
        let path = out.join("circuit.txt");
        write(&path, &text)?;
        artifacts.circuit = Some(path);
    }

    let report = RunReport {
        problem: problem.name.clone(),
        rule_config: opts.rule,
        outcome: syn.outcome,
        exit_code: exit_code(syn.outcome),
        stats,
        circuit_verified,
        artifacts,
        meta: RunMeta {
            pick_given: opts.pick_given,
            budget: problem.budget,
            limits: opts.limits,
            denial: opts.denial,
            seed: None,
        },
    };
    write(&out.join("report.json"), &report.to_json())?;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub metric: &'static str,
    pub ur: String,
    pub hyper: String,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub ur: RunReport,
    pub hyper: RunReport,
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    /// Worst of the two exit codes.
    pub fn exit_code(&self) -> i32 {
        self.ur.exit_code.max(self.hyper.exit_code)
    }

    pub fn row(&self, metric: &str) -> Option<&CompareRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }
}

/// Ratios are only meaningful when both runs stopped for the same reason.
pub fn comparable(a: Outcome, b: Outcome) -> bool {
    match (a, b) {
        (Outcome::Refutation(_), Outcome::Refutation(_)) => true,
        (Outcome::LimitHit(x), Outcome::LimitHit(y)) => x == y,
        _ => false,
    }
}

pub fn compare_rows(ur: &RunReport, hyper: &RunReport) -> Vec<CompareRow> {
    let ratios = comparable(ur.outcome, hyper.outcome);
    let counts = |s: &Stats| {
        [
            ("given_count", s.given_count),
            ("clauses_generated", s.clauses_generated),
            ("clauses_kept", s.clauses_kept),
            ("clauses_forward_subsumed", s.clauses_forward_subsumed),
            ("subsumed_by_sos", s.subsumed_by_sos),
            ("sos_size_final", s.sos_size_final),
            ("sos_size_peak", s.sos_size_peak),
        ]
    };
    let ratio = |u: f64, h: f64| (ratios && u > 0.0).then(|| h / u);
    let mut rows = vec![CompareRow {
        metric: "exit_code",
        ur: ur.exit_code.to_string(),
        hyper: hyper.exit_code.to_string(),
        ratio: None,
    }];
    for ((metric, u), (_, h)) in counts(&ur.stats).into_iter().zip(counts(&hyper.stats)) {
        rows.push(CompareRow {
            metric,
            ur: u.to_string(),
            hyper: h.to_string(),
            ratio: ratio(u as f64, h as f64),
        });
    }
    let (u, h) = (ur.stats.cpu_seconds, hyper.stats.cpu_seconds);
    rows.push(CompareRow {
        metric: "user_cpu_seconds",
        ur: format!("{u:.3}"),
        hyper: format!("{h:.3}"),
        ratio: ratio(u, h),
    });
    rows
}

pub fn render_compare_csv(rows: &[CompareRow]) -> String {
    let mut s = format!("{COMPARE_HEADER}\n");
    for r in rows {
        let ratio = r.ratio.map(|x| format!("{x:.4}")).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{}", r.metric, r.ur, r.hyper, ratio);
    }
    s
}

/// Runs UR and hyper concurrently with the same limits, into `out/ur` and
/// `out/hyper`, and writes `out/compare.csv`.
pub fn compare(opts: &RunOptions) -> Result<CompareReport, CliError> {
    let problem = opts.load()?;
    let with = |rule: RuleConfig, dir: &str| RunOptions {
        rule: RuleConfig {
            rule: rule.rule,
            ur_polarity: opts.rule.ur_polarity,
        },
        out: opts.out.join(dir),
        ..opts.clone()
    };
    let (ur_opts, hyper_opts) = (
        with(RuleConfig::ur(), "ur"),
        with(RuleConfig::hyper(), "hyper"),
    );
    let (ur, hyper) = std::thread::scope(|s| {
        let h = s.spawn(|| run_problem(&problem, &hyper_opts));
        let u = run_problem(&problem, &ur_opts);
        (u, h.join().expect("hyper run panicked"))
    });
    let (ur, hyper) = (ur?, hyper?);
    let rows = compare_rows(&ur, &hyper);
    let path = opts.out.join("compare.csv");
    write(&path, &render_compare_csv(&rows))?;
    Ok(CompareReport { ur, hyper, rows })
}
