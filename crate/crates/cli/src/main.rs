mod algebra;
mod field;
mod input;
mod phi;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "triharmonic",
    version,
    about = "Harmonic and lamellar fields from 3D commutative algebras"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Global {
    /// Seed for every random choice (probe points, solver restarts).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Exact rational arithmetic where the input allows it.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    pub exact: bool,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Structure constants of a member of the algebra family.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// φ-harmonic pairs (algebra, affine map).
    #[command(subcommand)]
    Phi(PhiCmd),
    /// Vector fields: verification and grid sampling.
    #[command(subcommand)]
    Field(FieldCmd),
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Derived constants, associativity and the representation homomorphism.
    Check(algebra::CheckArgs),
}

#[derive(Subcommand)]
enum PhiCmd {
    /// Search for the unknown half of a φ-harmonic pair.
    Solve(phi::SolveArgs),
    /// Exact harmonicity residuals of a given pair.
    Verify(phi::VerifyArgs),
}

#[derive(Subcommand)]
enum FieldCmd {
    Verify(field::VerifyArgs),
    Gen(field::GenArgs),
}

pub enum Outcome {
    Pass,
    CheckFailed,
    NoSolution,
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("TRIHARMONIC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        anyhow::anyhow!("TRIHARMONIC_THREADS must be a positive integer, got {raw:?}")
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    configure_threads()?;
    let g = &cli.global;
    if !(g.tolerance > 0.0 && g.tolerance.is_finite()) {
        anyhow::bail!("--tolerance must be positive");
    }
    match cli.command {
        Command::Algebra(AlgebraCmd::Check(a)) => algebra::check(&a, g),
        Command::Phi(PhiCmd::Solve(a)) => phi::solve(&a, g),
        Command::Phi(PhiCmd::Verify(a)) => phi::verify(&a, g),
        Command::Field(FieldCmd::Verify(a)) => field::verify(&a, g),
        Command::Field(FieldCmd::Gen(a)) => field::gen(&a, g),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(2),
        Ok(Outcome::NoSolution) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
