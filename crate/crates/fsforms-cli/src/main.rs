//! Command-line runner: verify symbolic identity suites, run lattice
//! experiments, and list what is registered.
//!
//! Exit codes: 0 all cases pass; 1 at least one case fails; 2 unknown
//! suite/experiment or unparseable configuration; 3 internal error while
//! evaluating; 4 near-degenerate lattice solve.

use clap::{Parser, Subcommand, ValueEnum};
use fsforms::lattice::experiments::{run_experiment, ExperimentParams, EXPERIMENTS};
use fsforms::lattice::LatticeError;
use fsforms::{Engine, Report, SuiteRegistry, Verdict};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "fsforms",
    version,
    about = "Verify graded field-space calculus identities and run 1-D lattice gauge experiments",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable, one line per case.
    Text,
    /// The full report as pretty-printed JSON.
    Json,
    /// Columns: suite, case, verdict, residual.
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every identity of a registered suite.
    Verify {
        /// Suite name (see `fsforms list`).
        suite: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the rendered report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Worker threads for case evaluation (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run a lattice experiment and report its invariant checks.
    Lattice {
        /// Experiment name (see `fsforms list`).
        experiment: String,
        /// JSON file with experiment parameters (seed, sites, boundary).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the random seed from the configuration.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the base site count from the configuration.
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the rendered report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List registered suites, lattice experiments, and algebra generators.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            suite,
            format,
            output,
            jobs,
        } => verify(&suite, format, output.as_deref(), jobs),
        Command::Lattice {
            experiment,
            config,
            seed,
            sites,
            format,
            output,
        } => lattice(&experiment, config.as_deref(), seed, sites, format, output.as_deref()),
        Command::List => list(),
    }
}

fn verify(suite: &str, format: Format, output: Option<&std::path::Path>, jobs: Option<usize>) -> ExitCode {
    if let Some(n) = jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("fsforms: could not configure {n} worker threads: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    let registry = match SuiteRegistry::load() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fsforms: could not load suite definitions: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if !registry.names().contains(&suite) {
        eprintln!(
            "fsforms: unknown suite `{suite}` (registered: {})",
            registry.names().join(", ")
        );
        return ExitCode::from(EXIT_USAGE);
    }
    let engine = Engine::standard();
    let report = match registry.run(&engine, suite) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fsforms: internal error while running `{suite}`: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    emit(&report, format, output)
}

fn lattice(
    experiment: &str,
    config: Option<&std::path::Path>,
    seed: Option<u64>,
    sites: Option<usize>,
    format: Format,
    output: Option<&std::path::Path>,
) -> ExitCode {
    let mut params = match config {
        None => ExperimentParams::default(),
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("fsforms: could not read config {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            match serde_json::from_str(&text) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("fsforms: could not parse config {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            }
        }
    };
    if let Some(s) = seed {
        params.seed = s;
    }
    if let Some(n) = sites {
        params.sites = Some(n);
    }
    let report = match run_experiment(experiment, &params) {
        Ok(r) => r,
        Err(e @ LatticeError::Config(_)) => {
            eprintln!("fsforms: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e @ LatticeError::Degenerate { .. }) => {
            eprintln!("fsforms: {e}");
            return ExitCode::from(EXIT_DEGENERATE);
        }
    };
    emit(&report, format, output)
}

fn list() -> ExitCode {
    let mut out = String::new();
    out.push_str("suites:\n");
    match SuiteRegistry::load() {
        Ok(registry) => {
            for name in registry.names() {
                let count = registry.cases(name).map(|c| c.len()).unwrap_or(0);
                out.push_str(&format!("  {name} ({count} cases)\n"));
            }
        }
        Err(e) => {
            eprintln!("fsforms: could not load suite definitions: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    out.push_str("experiments:\n");
    for name in EXPERIMENTS {
        out.push_str(&format!("  {name}\n"));
    }
    out.push_str("generators:\n");
    let engine = Engine::standard();
    let mut atoms: Vec<_> = engine.context().atoms().collect();
    atoms.sort_by(|a, b| a.symbol.cmp(&b.symbol));
    for atom in atoms {
        let deg = atom.bidegree();
        out.push_str(&format!("  {} (f={}, s={})\n", atom.symbol, deg.f, deg.s));
    }
    print!("{out}");
    ExitCode::SUCCESS
}

fn emit(report: &Report, format: Format, output: Option<&std::path::Path>) -> ExitCode {
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match output {
        None => print!("{rendered}"),
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("fsforms: could not write {}: {e}", path.display());
                return ExitCode::from(EXIT_INTERNAL);
            }
        }
    }
    if report.cases.iter().any(|c| c.verdict == Verdict::Error) {
        ExitCode::from(EXIT_INTERNAL)
    } else if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
