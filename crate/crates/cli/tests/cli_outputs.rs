use std::fs;
use std::process::Command;

use nlinv::saturation::TRACE_HEADER;
use nlinv::{Limits, Outcome, RuleConfig};
use nlinv_cli::{compare, run, RunOptions, RunReport, COMPARE_HEADER};

fn nlinv(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nlinv"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn golden_headers() {
    assert_eq!(TRACE_HEADER, "iteration,sos_size,given_id,given_weight");
    assert_eq!(COMPARE_HEADER, "metric,ur,hyper,ratio_hyper_over_ur");
}

#[test]
fn run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&RunOptions::new("ninv:2:2", RuleConfig::ur(), dir.path())).unwrap();
    assert!(matches!(r.outcome, Outcome::Refutation(_)));
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.circuit_verified, Some(true));

    let trace = fs::read_to_string(&r.artifacts.trace).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some(TRACE_HEADER));
    assert_eq!(lines.count() as u64, r.stats.given_count);

    let stats = fs::read_to_string(&r.artifacts.stats).unwrap();
    assert!(stats.starts_with("clauses generated"));
    assert!(stats.contains(&format!("{}", r.stats.clauses_generated)));

    let circuit = fs::read_to_string(r.artifacts.circuit.as_ref().unwrap()).unwrap();
    assert!(circuit.ends_with("verified true\n"), "{circuit}");
    assert!(r.artifacts.proof.as_ref().unwrap().exists());

    let json = fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert_eq!(RunReport::from_json(&json).unwrap(), r);
}

#[test]
fn report_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let mut opts = RunOptions::new("ninv:2:1", RuleConfig::hyper(), dir.path());
    opts.limits = Limits::unbounded().with_max_given(3);
    let r = run(&opts).unwrap();
    assert_eq!(RunReport::from_json(&r.to_json()).unwrap(), r);
    assert_eq!(r.meta.budget, 1);
    assert_eq!(r.artifacts.circuit, None);
}

#[test]
fn compare_writes_one_row_per_metric() {
    let dir = tempfile::tempdir().unwrap();
    let c = compare(&RunOptions::new("ninv:2:2", RuleConfig::ur(), dir.path())).unwrap();
    let csv = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(COMPARE_HEADER));
    let metrics: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(
        metrics,
        [
            "exit_code",
            "given_count",
            "clauses_generated",
            "clauses_kept",
            "clauses_forward_subsumed",
            "subsumed_by_sos",
            "sos_size_final",
            "sos_size_peak",
            "user_cpu_seconds",
        ]
    );
    let g = c.row("clauses_generated").unwrap();
    let want = c.hyper.stats.clauses_generated as f64 / c.ur.stats.clauses_generated as f64;
    assert!((g.ratio.unwrap() - want).abs() < 1e-12);
    assert!(dir.path().join("ur/trace.csv").exists());
    assert!(dir.path().join("hyper/trace.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = |args: &[&str]| {
        let mut v = args.to_vec();
        v.extend(["--out", out]);
        nlinv(&v).0
    };
    assert_eq!(code(&["run", "--problem", "identity:3"]), 0);
    assert_eq!(code(&["run", "--rule", "ur", "--problem", "ninv:2:1"]), 1);
    assert_eq!(
        code(&["run", "--problem", "ninv:2:2", "--max-given", "1"]),
        2
    );
    assert_eq!(code(&["run", "--problem", "no-such-problem"]), 3);
    assert_eq!(
        code(&["run", "--problem", "ninv:2:2", "--pick-given", "ratio:0"]),
        3
    );
    assert_eq!(nlinv(&["--help"]).0, 0);
}

#[test]
fn oracle_subcommand() {
    let (code, text) = nlinv(&["oracle", "--problem", "2inv"]);
    assert_eq!(code, 0);
    assert!(text.contains("# not gates: 2"), "{text}");
    let (code, _) = nlinv(&["oracle", "--problem", "ninv:3:1"]);
    assert_eq!(code, 1);
}
