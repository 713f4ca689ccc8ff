use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ruleforge::corpus::{bundled, bundled_names, load_problem, Problem, TransformKind};
use ruleforge::policy::QTable;
use ruleforge::transfer::transfer_matrix;
use ruleforge::{parse_rule, run, LearnConfig, LearnError, Rule};

#[derive(Parser)]
#[command(name = "ruleforge", version, about = "Operator-driven rule learning with a reusable Q policy")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a program for a problem file or bundled problem name.
    Learn {
        problem: String,
        #[command(flatten)]
        tuning: Tuning,
        #[command(flatten)]
        files: RunFiles,
    },
    /// Learn with a previously saved policy imported before the first step.
    Transfer {
        policy: PathBuf,
        problem: String,
        #[command(flatten)]
        tuning: Tuning,
        #[command(flatten)]
        files: RunFiles,
    },
    /// Check a program file against a problem's evidence.
    Eval { problem: String, program: PathBuf },
    /// Run a benchmark suite and print a CSV summary.
    Bench {
        suite: String,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Tuning {
    #[arg(long, env = "RULEFORGE_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Stop when the deviation of recent program optimalities falls below this.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    q0: Option<f64>,
    #[arg(long)]
    retrain_period: Option<usize>,
    #[arg(long)]
    budget_steps: Option<usize>,
    #[arg(long)]
    beta1: Option<f64>,
    #[arg(long)]
    beta2: Option<f64>,
    /// Programs considered for pairwise unions, 0 for all.
    #[arg(long)]
    pair_cap: Option<usize>,
}

#[derive(Args)]
struct RunFiles {
    #[arg(long)]
    save_policy: Option<PathBuf>,
    #[arg(long)]
    load_policy: Option<PathBuf>,
    /// Write the step trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    User(String),
    Internal(String),
}

impl Failure {
    fn user(e: impl std::fmt::Display) -> Failure {
        Failure::User(e.to_string())
    }
}

impl Tuning {
    fn apply(&self, cfg: &mut LearnConfig) -> Result<(), Failure> {
        let pairs: [(&str, Option<String>); 12] = [
            ("seed", self.seed.map(|v| v.to_string())),
            ("max_steps", self.max_steps.map(|v| v.to_string())),
            ("epsilon", self.epsilon.map(|v| v.to_string())),
            ("window", self.window.map(|v| v.to_string())),
            ("alpha", self.alpha.map(|v| v.to_string())),
            ("gamma", self.gamma.map(|v| v.to_string())),
            ("q0", self.q0.map(|v| v.to_string())),
            ("retrain_period", self.retrain_period.map(|v| v.to_string())),
            ("budget_steps", self.budget_steps.map(|v| v.to_string())),
            ("beta1", self.beta1.map(|v| v.to_string())),
            ("beta2", self.beta2.map(|v| v.to_string())),
            ("pair_cap", self.pair_cap.map(|v| v.to_string())),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, &v).map_err(Failure::user)?;
            }
        }
        cfg.validate().map_err(Failure::user)
    }
}

/// A path that exists is loaded; otherwise a bundled name, with or
/// without a `.prob` suffix.
fn resolve_problem(arg: &str) -> Result<Problem, Failure> {
    if Path::new(arg).exists() {
        return load_problem(arg).map_err(Failure::user);
    }
    let name = Path::new(arg).file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    if bundled_names().iter().any(|n| n == name) {
        return bundled(name).map_err(Failure::user);
    }
    load_problem(arg).map_err(Failure::user)
}

fn learn_error(e: LearnError) -> Failure {
    Failure::user(e)
}

/// Stdout writes that tolerate a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn cmd_learn(problem: &str, tuning: &Tuning, files: &RunFiles, policy: Option<&Path>) -> Result<(), Failure> {
    let problem = resolve_problem(problem)?;
    let mut cfg = problem.learn_config(&LearnConfig::default()).map_err(Failure::user)?;
    tuning.apply(&mut cfg)?;
    let imported = match policy.or(files.load_policy.as_deref()) {
        Some(p) => Some(QTable::import(p).map_err(|e| Failure::User(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let started = Instant::now();
    let result = run(&problem, &cfg, imported.as_ref()).map_err(learn_error)?;
    let elapsed = started.elapsed();
    if result.ranking.is_empty() {
        return Err(Failure::Internal("run finished with an empty program population".into()));
    }

    let best = result.best_rules();
    // Coverage is recomputed rather than read from the population.
    let scorer = problem.scorer(&cfg);
    let score = scorer.score(&best);
    let complete = score.coverage.pos() == problem.pos.len() && score.coverage.neg() == 0;
    let mut report = String::new();
    let _ = writeln!(report, "problem: {}", problem.name);
    let _ = writeln!(report, "status: {}", if complete { "complete" } else { "incomplete" });
    let _ = writeln!(report, "program:");
    for r in &best {
        let _ = writeln!(report, "  {r}");
    }
    let _ = writeln!(report, "opt: {}", score.opt);
    let _ = writeln!(report, "cov+: {}/{}", score.coverage.pos(), problem.pos.len());
    let _ = writeln!(report, "cov-: {}/{}", score.coverage.neg(), problem.neg.len());
    let _ = writeln!(report, "steps: {}", result.steps);
    let _ = writeln!(report, "seed: {}", cfg.seed);
    let _ = writeln!(report, "config: {}", cfg.echo());
    emit(&report);
    emit(&format!("wall_time_ms: {}\n", elapsed.as_millis()));

    if let Some(path) = &files.out {
        write_file(path, &report)?;
    }
    if let Some(path) = &files.trace {
        write_file(path, &result.trace_csv())?;
    }
    if let Some(path) = &files.save_policy {
        result.q_table.export(path).map_err(|e| Failure::User(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn read_program(path: &Path) -> Result<Vec<Rule>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::User(format!("{}: {e}", path.display())))?;
    let mut rules = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let rule = parse_rule(line).map_err(|e| Failure::User(format!("{}:{}: {e}", path.display(), i + 1)))?;
        rules.push(rule);
    }
    if rules.is_empty() {
        return Err(Failure::User(format!("{}: program file has no rules", path.display())));
    }
    Ok(rules)
}

/// `Ok(true)` when the program is complete and consistent.
fn cmd_eval(problem: &str, program: &Path) -> Result<bool, Failure> {
    let problem = resolve_problem(problem)?;
    let rules = read_program(program)?;
    let refs: Vec<&Rule> = rules.iter().collect();
    let cfg = problem.learn_config(&LearnConfig::default()).map_err(Failure::user)?;
    let report = problem.scorer(&cfg).coverage(&refs);
    for (i, e) in problem.pos.iter().enumerate() {
        let ok = report.covered_pos.contains(&i);
        emit(&format!("pos {:>3} {}  {e}\n", i + 1, if ok { "covered" } else { "missed " }));
    }
    for (i, e) in problem.neg.iter().enumerate() {
        let hit = report.covered_neg.contains(&i);
        emit(&format!("neg {:>3} {}  {e}\n", i + 1, if hit { "covered" } else { "clear  " }));
    }
    emit(&format!("cov+: {}/{}\ncov-: {}/{}\n", report.pos(), problem.pos.len(), report.neg(), problem.neg.len()));
    Ok(report.pos() == problem.pos.len() && report.neg() == 0)
}

fn cmd_bench(suite: &str, seeds: u64, tuning: &Tuning, out: Option<&Path>) -> Result<(), Failure> {
    if suite != "transfer" {
        return Err(Failure::User(format!("unknown suite `{suite}` (available: transfer)")));
    }
    if seeds == 0 {
        return Err(Failure::User("--seeds must be at least 1".into()));
    }
    let mut cfg = LearnConfig::default();
    tuning.apply(&mut cfg)?;
    if seeds == 1 {
        eprintln!("warning: one seed per cell, p-values omitted");
    }
    let base = tuning.seed.unwrap_or(0);
    let seed_list: Vec<u64> = (1..=seeds).map(|s| base + s).collect();
    let matrix = transfer_matrix(&TransformKind::ALL, &seed_list, &cfg).map_err(learn_error)?;
    let csv = matrix.to_csv();
    match out {
        Some(path) => write_file(path, &csv)?,
        None => emit(&csv),
    }
    eprintln!(
        "cells not worse with reuse: {}/{}, mean reduction {:.1}%",
        matrix.cells_not_worse(),
        matrix.cells.len(),
        100.0 * matrix.mean_reduction()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Command::Learn { problem, tuning, files } => cmd_learn(problem, tuning, files, None).map(|_| ExitCode::SUCCESS),
        Command::Transfer { policy, problem, tuning, files } => {
            cmd_learn(problem, tuning, files, Some(policy)).map(|_| ExitCode::SUCCESS)
        }
        Command::Eval { problem, program } => {
            cmd_eval(problem, program).map(|ok| if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Bench { suite, seeds, tuning, out } => {
            cmd_bench(suite, *seeds, tuning, out.as_deref()).map(|_| ExitCode::SUCCESS)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
