//! `zvp`: validate instances, run the variational and equilibrium solvers,
//! check normal-function properties and generate seeded corpora.

mod run;
mod text;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use zvp_core::generate::corpus;
use zvp_core::report::{TAU_AXIOM, TAU_INV, TAU_QUAD, TAU_ROUNDTRIP};
use zvp_core::{Selector, Tolerances};

use run::{exit_code_for, run_text, Options, Report};

#[derive(Parser)]
#[command(name = "zvp", version, about = "Variational points and equilibria on finite almost metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct TolArgs {
    /// Slack allowed in axiom and certificate inequalities.
    #[arg(long, global = true, default_value_t = TAU_AXIOM)]
    tau_axiom: f64,
    /// Target accuracy of adaptive quadrature.
    #[arg(long, global = true, default_value_t = TAU_QUAD)]
    tau_quad: f64,
    /// Accepted error of integral inverses and quadrature cross-checks.
    #[arg(long, global = true, default_value_t = TAU_INV)]
    tau_inv: f64,
    /// Accepted error when recovering d from the derived metric.
    #[arg(long, global = true, default_value_t = TAU_ROUNDTRIP)]
    tau_roundtrip: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of every object in a scenario, or of a bare space file.
    Validate(RunArgs),
    /// Run the theorem selected by --theorem or by the scenario.
    Solve(RunArgs),
    /// Normality, integral property suite and derived-metric checks.
    Properties(RunArgs),
    /// Write a seeded corpus of scenarios to a directory.
    Generate(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file, or a directory of `.json` scenarios.
    #[arg(long)]
    scenario: PathBuf,
    /// JSON report path (a directory when --scenario is a directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the scenario's selector (solve only).
    #[arg(long)]
    theorem: Option<Selector>,
    /// Seed of the property-suite samples.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of property-suite samples.
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    /// Worker threads for directory input (0 = all cores).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Points per space.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Number of scenarios.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Selector recorded in each scenario.
    #[arg(long, default_value = "zvp")]
    theorem: Selector,
}

fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn write(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn run_file(path: &Path, forced: Option<Selector>, opts: &Options) -> Report {
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    match fs::read_to_string(path) {
        Ok(text) => run_text(&text, label, forced, opts),
        Err(e) => {
            let err = zvp_core::Error::Malformed(format!("cannot read {}: {e}", path.display()));
            Report::from_error(label, &err, opts.tol)
        }
    }
}

fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("cannot read {}: {e}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Worst exit code wins; input errors outrank precondition errors, which
/// outrank check failures.
fn combine(codes: impl Iterator<Item = i32>) -> i32 {
    codes.max_by_key(|&c| match c {
        2 => 3,
        3 => 2,
        c => c,
    })
    .unwrap_or(0)
}

fn run(args: RunArgs, forced: Option<Selector>, opts: &Options) -> Result<i32, String> {
    if !args.scenario.is_dir() {
        let report = run_file(&args.scenario, forced, opts);
        print!("{}", text::render(&report));
        if let Some(out) = &args.out {
            write(out, &to_json(&report))?;
        }
        return Ok(report.exit_code);
    }
    let files = scenario_files(&args.scenario)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build().map_err(|e| e.to_string())?;
    let reports: Vec<Report> = pool.install(|| files.par_iter().map(|p| run_file(p, forced, opts)).collect());
    if let Some(out) = &args.out {
        fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
        for (path, report) in files.iter().zip(&reports) {
            write(&out.join(path.file_name().expect("file")), &to_json(report))?;
        }
    }
    for r in &reports {
        print!("{}", text::render(r));
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("{} scenarios: {passed} pass, {} fail", reports.len(), reports.len() - passed);
    Ok(combine(reports.iter().map(|r| r.exit_code)))
}

fn generate(args: GenArgs) -> Result<i32, String> {
    let scenarios = match corpus(args.seed, args.n as usize, args.count as usize, args.theorem) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(exit_code_for(&e));
        }
    };
    fs::create_dir_all(&args.out).map_err(|e| format!("cannot create {}: {e}", args.out.display()))?;
    for s in &scenarios {
        let name = s.name.clone().expect("generated scenarios are named");
        write(&args.out.join(format!("{name}.json")), &(s.to_json() + "\n"))?;
    }
    println!("wrote {} scenarios to {}", scenarios.len(), args.out.display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = Tolerances {
        axiom: cli.tol.tau_axiom,
        quad: cli.tol.tau_quad,
        inv: cli.tol.tau_inv,
        roundtrip: cli.tol.tau_roundtrip,
    };
    let result = match cli.command {
        Command::Validate(a) => {
            let opts = Options { tol, seed: a.seed, count: a.count };
            run(a, Some(Selector::Validate), &opts)
        }
        Command::Properties(a) => {
            let opts = Options { tol, seed: a.seed, count: a.count };
            run(a, Some(Selector::Properties), &opts)
        }
        Command::Solve(a) => {
            let opts = Options { tol, seed: a.seed, count: a.count };
            let forced = a.theorem;
            run(a, forced, &opts)
        }
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
