use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fetransform::experiments::{emit_report, refinement_sweep, run_study, SolverKind, StudyConfig, StudyKind};
use fetransform::reference_element::ElementFamily;

#[derive(Parser, Debug)]
#[command(name = "fetransform", version, about = "Mapped non-affine triangular finite elements: refinement studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a refinement study and write a CSV plus a plot script.
    Study {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, value_enum)]
        family: Family,
        /// Finest mesh; the sweep is N = 2, 4, 8, ... up to this value.
        #[arg(long, default_value_t = 32)]
        nmax: usize,
        #[arg(long)]
        out: PathBuf,
        /// Use the original, unscaled derivative degrees of freedom.
        #[arg(long)]
        unscaled: bool,
        #[arg(long, value_enum, default_value_t = Solver::Dense)]
        solver: Solver,
        /// Relative residual tolerance for conjugate gradients.
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Conditioning,
    Projection,
    Laplace,
    Plate,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    Lagrange3,
    Hermite,
    Morley,
    Argyris,
    Bell,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Solver {
    Cg,
    Dense,
}

impl From<Kind> for StudyKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Conditioning => StudyKind::Conditioning,
            Kind::Projection => StudyKind::Projection,
            Kind::Laplace => StudyKind::Laplace,
            Kind::Plate => StudyKind::Plate,
        }
    }
}

impl From<Family> for ElementFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Lagrange3 => ElementFamily::Lagrange(3),
            Family::Hermite => ElementFamily::Hermite,
            Family::Morley => ElementFamily::Morley,
            Family::Argyris => ElementFamily::Argyris,
            Family::Bell => ElementFamily::Bell,
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let Command::Study {
        kind,
        family,
        nmax,
        out,
        unscaled,
        solver,
        tol,
    } = cli.command;
    let ns = refinement_sweep(nmax);
    anyhow::ensure!(!ns.is_empty(), "--nmax must be at least 2");
    let config = StudyConfig {
        ns,
        scaled: !unscaled,
        solver: match solver {
            Solver::Cg => SolverKind::Cg,
            Solver::Dense => SolverKind::Direct,
        },
        tol,
    };
    let family = ElementFamily::from(family);
    let start = Instant::now();
    let result = run_study(kind.into(), family, &config).with_context(|| format!("{kind:?} study for {family} failed"))?;
    let rates = result.successive_rates();
    for (k, (n, v)) in result.ns.iter().zip(&result.values).enumerate() {
        let rate = if k > 0 { format!("{:.3}", rates[k - 1]) } else { "-".into() };
        println!("{family:>10} N={n:<3} dofs={:<6} {}={v:.6e} rate={rate}", result.dofs[k], result.metric);
    }
    if let Ok(fit) = result.fitted_rate() {
        println!("fitted rate {fit:.3} ({:.1}s)", start.elapsed().as_secs_f64());
    }
    let stem = format!("{}_{}", format!("{kind:?}").to_lowercase(), family);
    for path in emit_report(&[result], &out, &stem)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
