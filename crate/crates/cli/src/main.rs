mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use pbe_core::operators::OperatorKind;
use pbe_core::Exec;

use commands::{CliResult, DsFilter, StatesMode};
use report::Report;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "pbe",
    version,
    about = "Workbench for finite pseudo-BE algebras"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; 1 runs everything on the calling thread.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one axiom system, reporting the first failing tuple of each axiom.
    Check {
        algebra: PathBuf,
        #[arg(long, default_value = "pseudo-BE")]
        system: String,
    },
    /// Every structural property at once.
    Classify { algebra: PathBuf },
    /// Deductive systems, optionally restricted to one class.
    #[command(group(ArgGroup::new("class").args(["normal", "fantastic", "involutive", "prime", "maximal"])))]
    Ds {
        algebra: PathBuf,
        #[arg(long)]
        normal: bool,
        #[arg(long)]
        fantastic: bool,
        #[arg(long)]
        involutive: bool,
        #[arg(long)]
        prime: bool,
        #[arg(long)]
        maximal: bool,
    },
    /// Quotient of a distributive algebra by a deductive system.
    Quotient {
        algebra: PathBuf,
        #[arg(long)]
        ds: String,
    },
    /// Bosbach states: vertices of the state polytope, or verification of a state file.
    #[command(group(ArgGroup::new("mode").args(["vertices", "verify"])))]
    States {
        algebra: PathBuf,
        #[arg(long)]
        vertices: bool,
        #[arg(long)]
        verify: Option<PathBuf>,
        /// Restrict to state-morphisms (with --verify: fail unless it is one).
        #[arg(long)]
        morphism: bool,
    },
    /// Measures: extreme rays of the measure cone, or verification of a measure file.
    #[command(group(ArgGroup::new("mode").args(["rays", "verify"])))]
    Measures {
        algebra: PathBuf,
        #[arg(long)]
        rays: bool,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Internal states of type I or II and state-morphism operators.
    #[command(group(ArgGroup::new("mode").args(["enumerate", "verify"])))]
    Internal {
        algebra: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: OperatorKind,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Pseudo-valuations: extreme rays of the valuation cone, or verification of a file.
    #[command(group(ArgGroup::new("mode").args(["rays", "verify"])))]
    Valuations {
        algebra: PathBuf,
        #[arg(long)]
        rays: bool,
        #[arg(long)]
        verify: Option<PathBuf>,
        /// Restrict to commutative pseudo-valuations (with --verify: fail unless commutative).
        #[arg(long)]
        commutative: bool,
    },
    /// Homomorphisms between two algebras.
    #[command(group(ArgGroup::new("mode").args(["enumerate", "iso", "verify"])))]
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        iso: bool,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Enumerate pseudo-BE algebras of one size up to isomorphism.
    Find {
        #[arg(long)]
        size: usize,
        /// Required property, repeatable (pseudo-BCK, BE, proper, condition-A, ...).
        #[arg(long)]
        require: Vec<String>,
        #[arg(long)]
        limit: Option<usize>,
        /// Test complete tables instead of pruning partial ones.
        #[arg(long)]
        audit: bool,
        /// Write every model to DIR/<hash>.alg.
        #[arg(long, value_name = "DIR")]
        emit: Option<PathBuf>,
    },
    /// Check the structural theorems on every model up to the given size.
    Meta {
        #[arg(long)]
        max_size: usize,
        /// Report counterexamples without failing.
        #[arg(long)]
        allow_counterexamples: bool,
    },
}

fn parse_kind(s: &str) -> Result<OperatorKind, String> {
    s.parse()
}

fn run(command: Command, exec: Exec) -> CliResult<Report> {
    match command {
        Command::Check { algebra, system } => commands::check(&algebra, &system),
        Command::Classify { algebra } => commands::classify_cmd(&algebra),
        Command::Ds {
            algebra,
            normal,
            fantastic,
            involutive,
            prime,
            maximal,
        } => {
            let filter = [
                (normal, DsFilter::Normal),
                (fantastic, DsFilter::Fantastic),
                (involutive, DsFilter::Involutive),
                (prime, DsFilter::Prime),
                (maximal, DsFilter::Maximal),
            ]
            .into_iter()
            .find_map(|(on, f)| on.then_some(f));
            commands::ds(&algebra, filter, exec)
        }
        Command::Quotient { algebra, ds } => commands::quotient_cmd(&algebra, &ds),
        Command::States {
            algebra,
            vertices: _,
            verify,
            morphism,
        } => {
            let mode = match verify {
                Some(f) => StatesMode::Verify(f),
                None if morphism => StatesMode::Morphisms,
                None => StatesMode::Vertices,
            };
            commands::states(&algebra, mode, morphism)
        }
        Command::Measures {
            algebra, verify, ..
        } => commands::measures(&algebra, verify),
        Command::Internal {
            algebra,
            kind,
            verify,
            ..
        } => commands::internal(&algebra, kind, verify, exec),
        Command::Valuations {
            algebra,
            verify,
            commutative,
            ..
        } => commands::valuations(&algebra, verify, commutative),
        Command::Hom {
            source,
            target,
            iso,
            verify,
            ..
        } => commands::hom(&source, &target, iso, verify, exec),
        Command::Find {
            size,
            require,
            limit,
            audit,
            emit,
        } => commands::find(size, &require, limit, audit, emit, exec),
        Command::Meta {
            max_size,
            allow_counterexamples,
        } => commands::meta(max_size, allow_counterexamples, exec),
    }
}

#[cfg(feature = "parallel")]
fn run_with_workers(command: Command, workers: Option<usize>) -> CliResult<Report> {
    match workers {
        None => run(command, Exec::default()),
        Some(1) => run(command, Exec::Sequential),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| commands::CliError::Input(format!("--workers: {e}")))?;
            pool.install(|| run(command, Exec::Parallel))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn run_with_workers(command: Command, _workers: Option<usize>) -> CliResult<Report> {
    run(command, Exec::Sequential)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers == Some(0) {
        eprintln!("pbe: error: --workers must be at least 1");
        return ExitCode::from(2);
    }
    match run_with_workers(cli.command, cli.workers) {
        Ok(report) => {
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            print!("{text}");
            ExitCode::from(u8::from(report.failed))
        }
        Err(e) => {
            eprintln!("pbe: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
