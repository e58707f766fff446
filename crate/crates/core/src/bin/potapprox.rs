use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use potapprox::cli::{execute, RunConfig, CHECKS};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Mesh,
    Green,
    Leja,
    Approx,
    Jackson,
    Exponents,
    Verify,
    Cache,
}

/// Polynomial approximation and pluripotential regularity on planar compact sets.
#[derive(Debug, Parser)]
#[command(name = "potapprox", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Verification matrix, for `verify` only.
    which: Option<String>,
    /// Set-spec file; an optional `[run]` table supplies defaults.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    #[arg(long, value_name = "DIR")]
    cache: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    degree: Option<usize>,
    /// Comma-separated shell scales.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    scales: Option<Vec<f64>>,
    /// Comma-separated Jackson orders.
    #[arg(long = "ell", value_name = "LIST", value_delimiter = ',')]
    ells: Option<Vec<f64>>,
    #[arg(long, value_name = "R")]
    resolution: Option<f64>,
    /// Test function: cauchy(re[,im]), poly(c0,c1,..), abs, conj(k).
    #[arg(long, value_name = "F")]
    function: Option<String>,
    /// Restrict to these named sets (repeatable or comma-separated).
    #[arg(long = "set", value_name = "NAME", value_delimiter = ',')]
    sets: Vec<String>,
    /// Treat every verification as expected to fail.
    #[arg(long)]
    expect_fail: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = args.command.to_possible_value().unwrap().get_name().to_string();
    match (&args.command, &args.which) {
        (Command::Verify, Some(w)) if CHECKS.contains(&w.as_str()) => {}
        (Command::Verify, w) => {
            eprintln!(
                "error: verify needs one of {} (got {})",
                CHECKS.join(", "),
                w.as_deref().unwrap_or("nothing")
            );
            return ExitCode::from(2);
        }
        (_, Some(w)) => {
            eprintln!("error: unexpected argument `{w}`");
            return ExitCode::from(2);
        }
        _ => {}
    }
    let mut cfg = RunConfig::new(&args.config, &command, &args.out);
    cfg.which = args.which;
    cfg.degree = args.degree;
    cfg.scales = args.scales;
    if let Some(e) = args.ells {
        cfg.ells = e;
    }
    if let Some(r) = args.resolution {
        cfg.resolution = r;
    }
    if let Some(f) = args.function {
        cfg.function = f;
    }
    cfg.sets = args.sets;
    cfg.cache_dir = args.cache;
    cfg.expect_fail = args.expect_fail;
    match execute(cfg) {
        Ok(out) => {
            print!("{}", out.summary);
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
