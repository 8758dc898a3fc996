use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlinv::circuits::{brute_force_search, OracleResult};
use nlinv::{InferenceRule, Limits, PickGiven, RuleConfig, UrPolarity};
use nlinv_cli::{
    compare, parse_pick_given, render_compare_csv, rule_name, run, CliError, Denial, RunOptions,
    RunReport, EXIT_ERROR,
};

#[derive(Parser)]
#[command(
    name = "nlinv",
    version,
    about = "Hyper/UR saturation prover for negation-limited inverter synthesis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one strategy.
    Run(RunArgs),
    /// Run UR and hyper under identical limits and tabulate the ratios.
    Compare(CommonArgs),
    /// Decide the problem with the brute-force oracle.
    Oracle {
        #[arg(long)]
        problem: String,
        #[arg(long, value_enum, default_value = "table-derived")]
        denial: DenialArg,
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "hyper")]
    rule: RuleArg,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Built-in (`2inv`, `bcd`, `ninv:N:K`, `identity:N`) or problem file.
    #[arg(long)]
    problem: String,
    #[arg(long, value_enum, default_value = "both")]
    ur_polarity: PolarityArg,
    /// `weight`, `fifo` or `ratio:<r>`.
    #[arg(long, default_value = "weight", value_parser = parse_pick_given)]
    pick_given: PickGiven,
    #[arg(long)]
    max_given: Option<u64>,
    #[arg(long)]
    max_seconds: Option<f64>,
    #[arg(long)]
    max_weight: Option<u32>,
    /// Overrides the problem's NOT budget.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, value_enum, default_value = "table-derived")]
    denial: DenialArg,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Hyper,
    Ur,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolarityArg {
    Both,
    Pos,
    Neg,
}

#[derive(Clone, Copy, ValueEnum)]
enum DenialArg {
    TableDerived,
    PaperLiteral,
}

impl From<DenialArg> for Denial {
    fn from(d: DenialArg) -> Self {
        match d {
            DenialArg::TableDerived => Denial::TableDerived,
            DenialArg::PaperLiteral => Denial::PaperLiteral,
        }
    }
}

impl CommonArgs {
    fn options(&self, rule: InferenceRule) -> RunOptions {
        let ur_polarity = match self.ur_polarity {
            PolarityArg::Both => UrPolarity::Both,
            PolarityArg::Pos => UrPolarity::PositiveOnly,
            PolarityArg::Neg => UrPolarity::NegativeOnly,
        };
        RunOptions {
            problem: self.problem.clone(),
            rule: RuleConfig { rule, ur_polarity },
            pick_given: self.pick_given,
            limits: Limits {
                max_given: self.max_given,
                max_seconds: self.max_seconds,
                max_weight: self.max_weight,
                max_retained: None,
            },
            budget: self.budget,
            denial: self.denial.into(),
            out: self.out.clone(),
        }
    }
}

fn summary(r: &RunReport) {
    println!(
        "{} {}: {:?} after {} given clauses, {} generated, {} kept",
        r.problem,
        rule_name(r.rule_config.rule),
        r.outcome,
        r.stats.given_count,
        r.stats.clauses_generated,
        r.stats.clauses_kept
    );
    if let Some(ok) = r.circuit_verified {
        println!("circuit verified: {ok}");
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run(a) => {
            let rule = match a.rule {
                RuleArg::Hyper => InferenceRule::Hyper,
                RuleArg::Ur => InferenceRule::Ur,
            };
            let report = run(&a.common.options(rule))?;
            summary(&report);
            Ok(report.exit_code)
        }
        Command::Compare(c) => {
            let report = compare(&c.options(InferenceRule::Ur))?;
            summary(&report.ur);
            summary(&report.hyper);
            print!("{}", render_compare_csv(&report.rows));
            Ok(report.exit_code())
        }
        Command::Oracle {
            problem,
            denial,
            budget,
        } => {
            let mut opts = RunOptions::new(problem, RuleConfig::default(), ".");
            opts.denial = denial.into();
            opts.budget = budget;
            let p = opts.load()?;
            match brute_force_search(&p)? {
                OracleResult::Witness(c) => {
                    print!("{}", c.render(&p));
                    Ok(0)
                }
                OracleResult::Unsat => {
                    println!("no circuit within {} NOT gates", p.budget);
                    Ok(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_ERROR as u8),
            };
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("nlinv: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
