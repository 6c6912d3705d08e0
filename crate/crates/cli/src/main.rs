use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use signfourier::envelopes::EST1_MAX_D;
use signfourier::orthopoly::sign_gram;
use signfourier::table::{build_class_table, build_dense_table};
use signfourier::theorem1::{theorem1_report, verify_classes, ReportOptions};
use signfourier::theorem2::{check_query, shift_report, ShiftQuery};
use signfourier::{
    render_pgm, sigma_exact, write_report, Error, Format, GramKind, Modulus, RenderMode,
    RenderSpec, Report, SigmaTable, SignGram, Threads,
};

const THREADS_ENV: &str = "SIGNFOURIER_THREADS";

#[derive(Parser)]
#[command(name = "signfourier", version, about = "Sign correlations of the rounded cosine basis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print Sigma_{a,b} for one pair.
    Sigma {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        /// Print the full record as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write the Sigma table as CSV.
    Table {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: PathBuf,
        /// Full (n-1)x(n-1) matrix even for prime n.
        #[arg(long)]
        dense: bool,
        /// Worker threads, a positive integer or `auto`.
        #[arg(long)]
        threads: Option<String>,
    },
    /// Check the prime-modulus estimates and write per-class reports.
    Thm1 {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = EST1_MAX_D)]
        max_d: u64,
        /// Largest truncation order of the Fourier reconstruction.
        #[arg(long, default_value_t = 10_000)]
        ell_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check shifts by multiples of n/p for composite n.
    Thm2 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        a: i64,
        /// Single shift; every admissible c when omitted.
        #[arg(long, allow_negative_numbers = true)]
        c: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a Legendre or Chebyshev sign-Gram matrix as CSV.
    Ortho {
        #[arg(long)]
        kind: GramKind,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a table or Gram matrix as a binary PGM.
    Render(RenderArgs),
}

#[derive(Args)]
struct RenderArgs {
    /// Table or Gram CSV written by `table` or `ortho`.
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    input: Option<PathBuf>,
    /// Build the Sigma table for this modulus instead of reading one.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    tau: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value = "grayscale")]
    mode: RenderMode,
    /// Draw large entries light instead of dark.
    #[arg(long)]
    no_invert: bool,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::ConvergenceFailure { .. } => Failure::Runtime(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn resolve_threads(flag: Option<&str>) -> Result<Threads, Error> {
    match flag {
        Some(s) => s.parse(),
        None => match std::env::var(THREADS_ENV) {
            Ok(s) if !s.trim().is_empty() => s.trim().parse(),
            _ => Ok(Threads::Auto),
        },
    }
}

fn emit<R: Report + ?Sized>(report: &R, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => write_report(report, Format::from_path(path), path)?,
        None => print!("{}", report.to_json()?),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sigma { n, a, b, json } => {
            let record = sigma_exact(a, b, &Modulus::new(n)?);
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&record).map_err(|e| Failure::Runtime(e.to_string()))?
                );
            } else {
                println!("{}", record.sigma);
            }
        }
        Command::Table {
            n,
            out,
            dense,
            threads,
        } => {
            let n = Modulus::new(n)?;
            let threads = resolve_threads(threads.as_deref())?;
            let table = if dense || !n.is_prime() {
                build_dense_table(&n, threads)
            } else {
                build_class_table(&n, threads)?
            };
            write_report(&table, Format::Csv, &out)?;
        }
        Command::Thm1 {
            n,
            max_d,
            ell_max,
            out,
        } => {
            let n = Modulus::new(n)?;
            n.require_prime()?;
            let opts = ReportOptions::with_max_order(ell_max);
            let top = max_d.min((n.get() - 1) / 2);
            let reports = (1..=top as i64)
                .map(|d| theorem1_report(&n, 1, d, &opts))
                .collect::<Result<Vec<_>, _>>()?;
            emit(reports.as_slice(), out.as_deref())?;
            let violations = verify_classes(&n, max_d)?;
            for v in &violations {
                eprintln!("FAIL {} at c = {}: {}", v.check, v.c, v.detail);
            }
            if !violations.is_empty() {
                return Err(Failure::Verification(format!(
                    "{} envelope violations for n = {n}",
                    violations.len()
                )));
            }
            eprintln!("ok: all {} classes of n = {n} within the pinned envelopes", n.get() - 1);
        }
        Command::Thm2 { n, p, a, c, out } => {
            let n = Modulus::new(n)?;
            let shifts: Vec<i64> = match c {
                Some(c) => vec![c],
                None => (1 - p as i64..p as i64).filter(|&c| c != 0).collect(),
            };
            let queries = shifts
                .iter()
                .map(|&c| ShiftQuery::new(&n, p, a, c))
                .collect::<Result<Vec<_>, _>>()?;
            let reports = queries
                .iter()
                .map(shift_report)
                .collect::<Result<Vec<_>, _>>()?;
            emit(reports.as_slice(), out.as_deref())?;
            if p == 2 {
                eprintln!("p = 2: no class prediction, raw sums only");
                return Ok(());
            }
            let mut failed = 0;
            for q in &queries {
                let check = check_query(q)?;
                if !check.passes() {
                    failed += 1;
                    eprintln!(
                        "FAIL c = {}: partition {} equispaced {} class residual {:.3} envelope {:.3}",
                        q.c(),
                        check.partition_exact,
                        check.equispaced,
                        check.max_class_residual,
                        check.envelope_ratio
                    );
                }
            }
            if failed > 0 {
                return Err(Failure::Verification(format!("{failed} shift queries failed")));
            }
            eprintln!("ok: {} shift queries within the pinned envelopes", queries.len());
        }
        Command::Ortho { kind, size, out } => {
            write_report(&sign_gram(kind, size)?, Format::Csv, &out)?;
        }
        Command::Render(args) => {
            let spec = RenderSpec {
                tau: args.tau,
                gamma: args.gamma,
                mode: args.mode,
                invert: !args.no_invert,
            };
            let bytes = match (&args.input, args.n) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                        path: path.clone(),
                        source,
                    })?;
                    let head = text.lines().next().unwrap_or_default();
                    if head.starts_with("legendre") || head.starts_with("chebyshev") {
                        render_pgm(&SignGram::from_csv(&text)?, &spec)?
                    } else {
                        render_pgm(&SigmaTable::from_csv(&text)?, &spec)?
                    }
                }
                (None, Some(n)) => {
                    let n = Modulus::new(n)?;
                    let table = signfourier::table::build_table(&n, resolve_threads(None)?);
                    render_pgm(&table, &spec)?
                }
                (None, None) => return Err(Failure::Usage("need --input or --n".into())),
            };
            signfourier::report::write_bytes(&bytes, &args.out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `signfourier --help` for usage");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
