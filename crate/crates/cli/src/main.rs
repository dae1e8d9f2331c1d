//! `zetawalk` command-line front end: writes product, trend, density, walk,
//! lattice, typicality and geometric-product data as CSV or JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "zetawalk",
    version,
    about = "Random Riemann-zeta walks and their characteristic functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
pub struct OutputArgs {
    /// Output file (must not exist); stdout if omitted
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
pub enum Command {
    /// Cl(t) with its trend factor and fluctuation envelope on [t-min, t-max]
    Eval {
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, value_parser = parse_s)]
        s: f64,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..))]
        points: u64,
        #[arg(long, default_value_t = 1e-10, value_parser = parse_positive)]
        tol: f64,
    },
    /// Trend constant C_{p;s} for one p or a p-grid `start:stop:step`
    Trend {
        #[arg(long, value_parser = parse_s)]
        s: f64,
        #[arg(long, value_parser = parse_p, conflicts_with = "p_grid", required_unless_present = "p_grid")]
        p: Option<f64>,
        #[arg(long, value_parser = parse_p_grid)]
        p_grid: Option<PGrid>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long, default_value_t = 1e-10, value_parser = parse_positive)]
        tol: f64,
    },
    /// Density by Fourier inversion, optionally with the Lévy/Cauchy trend density
    Pdf {
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, value_parser = parse_s)]
        s: f64,
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        omega_min: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        omega_max: f64,
        #[arg(long, default_value_t = 801, value_parser = clap::value_parser!(u64).range(2..))]
        points: u64,
        #[arg(long, default_value_t = 1e-6, value_parser = parse_positive)]
        tol: f64,
        /// Add the trend density column (s = 1 or s = 2 only)
        #[arg(long)]
        trend: bool,
    },
    /// Histogram of simulated walk endpoints
    Sample {
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, value_parser = parse_s)]
        s: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        walks: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bin width
        #[arg(long, default_value_t = 0.02, value_parser = parse_positive)]
        bins: f64,
    },
    /// Exact atoms of the N-step walk
    Lattice {
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, value_parser = parse_s)]
        s: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1e-12)]
        merge_eps: f64,
    },
    /// Typicality statistics of a coefficient sequence
    Typicality {
        #[arg(long, value_enum)]
        source: Source,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0, value_parser = parse_s)]
        s: f64,
        /// Reference nonzero frequency (default: 6/π² for mobius, p for sampled, 1 otherwise)
        #[arg(long, value_parser = parse_p)]
        p_ref: Option<f64>,
        /// Nonzero probability of a sampled sequence
        #[arg(long, value_parser = parse_p)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
    /// Geometric-walk products against their closed forms
    Power {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Base of the general Morrison product
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 1001, value_parser = clap::value_parser!(u64).range(2..))]
        points: u64,
        #[arg(long, default_value_t = 1e-12, value_parser = parse_positive)]
        tol: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Series,
    Quadrature,
    Closed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Mobius,
    Liouville,
    Ones,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum KindArg {
    EulerSinc,
    Cantor,
    MorrisonP23,
    MorrisonGeneral,
}

fn parse_number(text: &str) -> Result<f64, String> {
    let value = match text.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a
                .trim()
                .parse()
                .map_err(|_| format!("`{text}` is not a number or fraction"))?;
            let b: f64 = b
                .trim()
                .parse()
                .map_err(|_| format!("`{text}` is not a number or fraction"))?;
            a / b
        }
        None => text
            .trim()
            .parse()
            .map_err(|_| format!("`{text}` is not a number or fraction"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}

fn parse_p(text: &str) -> Result<f64, String> {
    let p = parse_number(text)?;
    if p > 0.0 && p <= 1.0 {
        Ok(p)
    } else {
        Err(format!("p = {p} is outside the domain (0, 1]"))
    }
}

fn parse_s(text: &str) -> Result<f64, String> {
    let s = parse_number(text)?;
    if s > 0.5 {
        Ok(s)
    } else {
        Err(format!("s = {s} must exceed 1/2"))
    }
}

fn parse_positive(text: &str) -> Result<f64, String> {
    let x = parse_number(text)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{x} must be positive"))
    }
}

/// Inclusive p-grid parsed from `start:stop:step`.
#[derive(Clone, Debug)]
pub struct PGrid(pub Vec<f64>);

fn parse_p_grid(text: &str) -> Result<PGrid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, h] = parts[..] else {
        return Err(format!("`{text}` is not of the form start:stop:step"));
    };
    let (a, b, h) = (parse_p(a)?, parse_p(b)?, parse_positive(h)?);
    if b < a {
        return Err(format!("grid stop {b} is below its start {a}"));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok(PGrid((0..=n).map(|i| a + h * i as f64).collect()))
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("ZETAWALK_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("ZETAWALK_THREADS = `{v}` is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let table = match commands::run(&cli.command) {
        Ok(t) => t,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(commands::Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match output::emit(
        &table,
        cli.out.out.as_deref(),
        cli.out.format == Format::Json,
    ) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
