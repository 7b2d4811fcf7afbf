use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use k3nodal_cli::commands::{self, CliError, FibrationCheck, SeriesKind};

#[derive(Parser)]
#[command(name = "k3nodal", version, about = "Exact nodal-curve counts for K3-fibered threefolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print q-expansion coefficients 0..=N, one "n: value" per line.
    Series { kind: SeriesKind, n: usize },
    /// Invariants or theta series of a lattice such as "H + -E8".
    Lattice {
        expr: String,
        #[arg(long, conflicts_with = "theta")]
        invariants: bool,
        #[arg(long, value_name = "N")]
        theta: Option<usize>,
    },
    /// Generating function of virtual nodal-curve counts for a fibration config.
    Count {
        config: PathBuf,
        n: usize,
        /// Flip the overall sign.
        #[arg(long)]
        hm_sign: bool,
        /// Write the JSON report here ("-" for stdout, replacing the table).
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Numerical checks on a fibration config.
    Fibration {
        config: PathBuf,
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Structural validation.
    Validate,
    /// Number of singular fibers.
    Euler,
    /// Weil-Petersson degree and local defects.
    Defect,
    /// Node count and expected dimensions for a class of square C2 and genus g.
    Dims {
        #[arg(allow_hyphen_values = true)]
        c2: i64,
        g: i64,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Series { kind, n } => commands::series(kind, n),
        Command::Lattice { expr, theta, .. } => commands::lattice(&expr, theta),
        Command::Count { config, n, hm_sign, json } => {
            let out = commands::count(&config, n, hm_sign)?;
            match json {
                Some(p) if p.as_os_str() == "-" => Ok(out.report.to_json()),
                Some(p) => {
                    std::fs::write(&p, out.report.to_json())
                        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display())))?;
                    Ok(out.table)
                }
                None => Ok(out.table),
            }
        }
        Command::Fibration { config, check } => {
            let check = match check {
                Check::Validate => FibrationCheck::Validate,
                Check::Euler => FibrationCheck::Euler,
                Check::Defect => FibrationCheck::Defect,
                Check::Dims { c2, g } => FibrationCheck::Dims { c_squared: c2, genus: g },
            };
            commands::fibration(&config, check)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
