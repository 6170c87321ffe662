use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fp_selberg::cli::kzreport::{kz_report, Fraction};
use fp_selberg::cli::table::{emit_table, Format};
use fp_selberg::cli::verify::{run_verify, GridSpec, Suite};
use fp_selberg::cli::IntRange;

/// Exact F_p-Selberg integrals, their closed forms, and KZ solutions mod p.
///
/// Set FPS_WORKERS to bound the number of worker threads used by sweeps.
#[derive(Parser)]
#[command(name = "fp-selberg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a parameter grid and check an identity on every cell; prints a JSON report.
    Verify {
        suite: Suite,
        /// Primes to use, as `A..B` (inclusive) or a single value.
        #[arg(long)]
        p: Option<IntRange>,
        #[arg(long)]
        n: Option<IntRange>,
        #[arg(long)]
        c: Option<IntRange>,
        #[arg(long)]
        a: Option<IntRange>,
        #[arg(long)]
        b: Option<IntRange>,
    },
    /// Tabulate S_n(a, b, c) over a <= p-1-(n-1)c and b < p with region labels.
    Table {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Also emit the vanishing rows a > p-1-(n-1)c.
        #[arg(long)]
        full: bool,
    },
    /// Build the F_p-hypergeometric KZ solution and check it; prints a JSON report.
    Kz {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        m2: u64,
        #[arg(long)]
        n: u64,
        /// NUM/DEN with both parts prime to p.
        #[arg(long, allow_hyphen_values = true)]
        kappa: Fraction,
    },
}

fn configure_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var("FPS_WORKERS") else { return Ok(()) };
    let workers: usize = raw.parse().map_err(|_| format!("FPS_WORKERS={raw:?} is not a positive integer"))?;
    if workers == 0 {
        return Err("FPS_WORKERS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(workers).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_workers() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Verify { suite, p, n, c, a, b } => {
            run_verify(suite, &GridSpec { p, n, c, a, b }).map(|r| (r.to_json(), r.success()))
        }
        Command::Table { p, n, c, format, full } => emit_table(p, n, c, format, full).map(|t| (t, true)),
        Command::Kz { p, m1, m2, n, kappa } => kz_report(p, m1, m2, n, kappa)
            .map(|r| (serde_json::to_string_pretty(&r).expect("report serializes"), r.success())),
    };
    match result {
        Ok((out, ok)) => {
            println!("{}", out.trim_end());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
