//! `archdam`: optimize, inspect and rank arch dam designs.

mod artifacts;
mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::GridAxis;

/// Log verbosity filter, e.g. `ARCHDAM_LOG=debug`.
const LOG_ENV: &str = "ARCHDAM_LOG";

#[derive(Parser)]
#[command(name = "archdam", version, about = "Shape optimization of parabolic double-curvature arch dams")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DesignInput {
    /// 20 comma-separated values, a JSON array, or `reference`
    #[arg(long, conflicts_with = "design_file", required_unless_present = "design_file")]
    design: Option<String>,
    /// File holding the design in either textual form
    #[arg(long)]
    design_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the optimizer on the dam problem and write the archive
    Optimize {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `mocss.seed`
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides `output.directory`
        #[arg(long)]
        out: Option<PathBuf>,
        /// Evaluate on a single thread
        #[arg(long)]
        serial: bool,
    },
    /// Evaluate one design and print the result as JSON
    Evaluate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        design: DesignInput,
    },
    /// Tabulate crown thickness, radii, central angle and overhang over depth
    EvaluateGeometry {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        design: DesignInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Principal stresses and criterion margins at every sample point
    StressField {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        design: DesignInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the failure criterion over a grid of principal stresses (MPa)
    WwSurface {
        #[arg(long)]
        config: Option<PathBuf>,
        /// `lo:hi:n`, or a single value
        #[arg(long, allow_hyphen_values = true, default_value = "-35:2:75")]
        sigma1: GridAxis,
        #[arg(long, allow_hyphen_values = true, default_value = "-35:2:75")]
        sigma2: GridAxis,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        sigma3: GridAxis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank archive designs for each weighting scenario
    Decide {
        #[arg(long)]
        archive: PathBuf,
        /// JSON list of `{name, weights}`; defaults to scenarios A to E
        #[arg(long)]
        scenarios: Option<PathBuf>,
        /// Keep infeasible designs and designs with a positive margin
        #[arg(long)]
        no_filter: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the optimizer on an analytic test problem and score the front
    Benchmark {
        /// sch, zdt1 or zdt2; overrides `problem.kind`
        #[arg(long)]
        problem: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        serial: bool,
    },
}

fn dispatch(cli: Cli) -> Result<(), error::CliError> {
    match cli.command {
        Command::Optimize { config, seed, out, serial } => commands::optimize(&config, seed, out, serial),
        Command::Evaluate { config, design } => commands::evaluate(config.as_deref(), &design.into()),
        Command::EvaluateGeometry { config, design, out } => {
            commands::evaluate_geometry(config.as_deref(), &design.into(), out.as_deref())
        }
        Command::StressField { config, design, out } => {
            commands::stress_field(config.as_deref(), &design.into(), out.as_deref())
        }
        Command::WwSurface {
            config,
            sigma1,
            sigma2,
            sigma3,
            out,
        } => commands::ww_surface(config.as_deref(), [sigma1, sigma2, sigma3], out.as_deref()),
        Command::Decide {
            archive,
            scenarios,
            no_filter,
            out,
        } => commands::decide(&archive, scenarios.as_deref(), no_filter, out.as_deref()),
        Command::Benchmark {
            problem,
            config,
            seed,
            out,
            serial,
        } => commands::benchmark(problem.as_deref(), config.as_deref(), seed, out, serial),
    }
}

impl From<DesignInput> for commands::DesignSource {
    fn from(d: DesignInput) -> Self {
        match (d.design, d.design_file) {
            (Some(text), _) => commands::DesignSource::Inline(text),
            (None, Some(path)) => commands::DesignSource::File(path),
            (None, None) => unreachable!("clap requires one design source"),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
