//! `coxbuild`: invariants of Coxeter systems and regular buildings from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxbuild_core::cache::CACHE_DIR_ENV;
use coxbuild_core::coxeter::Limits;
use coxbuild_core::report::{
    parse_input, parse_lambda, parse_p_grid, render_machine, render_text, run_report, ReportOptions, Stage,
    DEFAULT_P_GRID,
};
use coxbuild_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "coxbuild", version, about = "Invariants of Coxeter systems and regular right-angled buildings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Finite/affine/other type and hyperbolicity.
    Classify,
    /// Nerve, pseudomanifold verdict, Davis chamber and cohomological dimension.
    Nerve,
    /// Growth series, entropy and thickness-weighted growth rate.
    Growth,
    /// Critical exponents and the convergence table over the p-grid.
    Exponents,
    /// Conformal-dimension bounds for the building boundary.
    Confdim,
    /// Explicit-building checks: sphere counts, chain identities, norm inequality.
    VerifyOracle,
    /// Every section.
    Report {
        /// Also run the explicit-building checks.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Machine,
}

#[derive(Args, Debug)]
struct Common {
    /// Input document (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Enumeration depth for growth tables and partial sums.
    #[arg(long, global = true, default_value_t = 12)]
    depth: usize,
    /// Radius of the explicit building.
    #[arg(long, global = true, default_value_t = 4)]
    radius: usize,
    /// Comma-separated exponents p > 1, as integers, decimals or fractions a/b.
    #[arg(long, global = true, default_value = DEFAULT_P_GRID)]
    p_grid: String,
    /// Visual parameter: a number > 1, or `bourdon` for exp(e_q).
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// Known conformal dimension of the apartment boundary.
    #[arg(long, global = true)]
    apartment_confdim: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for the enumeration cache; no caching when absent.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    /// Cap on group elements or chambers held in memory.
    #[arg(long, global = true, env = "COXBUILD_MAX_ELEMENTS")]
    max_elements: Option<usize>,
    /// Enumerate on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Random chains per exponent in the norm-inequality check.
    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,
    /// Record wall-clock time per stage.
    #[arg(long, global = true)]
    timings: bool,
}

fn stages(cmd: Command) -> Vec<Stage> {
    match cmd {
        Command::Classify => vec![Stage::Classify],
        Command::Nerve => vec![Stage::Nerve],
        Command::Growth => vec![Stage::Growth],
        Command::Exponents => vec![Stage::Growth, Stage::Exponents],
        Command::Confdim => vec![Stage::Confdim],
        Command::VerifyOracle => vec![Stage::Oracle],
        Command::Report { oracle } => {
            let mut s = Stage::FULL.to_vec();
            if oracle {
                s.push(Stage::Oracle);
            }
            s
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    let c = &cli.common;
    let path = c.input.as_ref().ok_or_else(|| Error::InvalidArgument("--input FILE is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("cannot read {}: {e}", path.display())))?;
    let input = parse_input(&text)?;
    let mut limits = Limits::default();
    if let Some(n) = c.max_elements {
        limits.max_elements = n;
    }
    if c.sequential {
        limits = limits.sequential();
    }
    let opts = ReportOptions {
        depth: c.depth,
        radius: c.radius,
        p_grid: parse_p_grid(&c.p_grid)?,
        lambda: c.lambda.as_deref().map(parse_lambda).transpose()?,
        apartment_confdim: c.apartment_confdim,
        limits,
        cache_dir: c.cache_dir.clone(),
        timings: c.timings,
        oracle_trials: c.trials,
    };
    let (report, cache) = run_report(&input, &stages(cli.command), &opts)?;
    if c.cache_dir.is_some() {
        eprintln!("cache: {cache:?}");
    }
    Ok(match c.format {
        Format::Text => render_text(&report),
        Format::Machine => render_machine(&report) + "\n",
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::ResourceExceeded(_) | Error::RadiusExceeded { .. } = e {
                eprintln!("hint: lower --depth/--radius or raise --max-elements (env COXBUILD_MAX_ELEMENTS)");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
