//! `dyntc`: command-line front end of the harness.
//!
//! ```text
//! dyntc gen    --n 16 --length 100 --profile mixed --seed 1 > t.trace
//! dyntc replay t.trace --backend divcon --check --sweep-stride 1
//! dyntc bench  --n 32,64,128 --profile mixed --backend divcon,log --reps 3
//! dyntc audit  t.trace --backend log --sweep-stride 10
//! ```
//!
//! Exit status is 0 on success, 1 on a mismatch or failed audit (with a
//! first output line starting `MISMATCH` or `AUDIT`), and 2 on other errors.

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dyntc::{Backend, GraphOptions};
use dyntc_harness::audit::audit_trace;
use dyntc_harness::bench::{self, BenchConfig};
use dyntc_harness::{generate, replay, BenchRecord, HarnessError, Profile, ReplayConfig, Trace};

#[derive(Parser)]
#[command(
    name = "dyntc",
    version,
    about = "Dynamic transitive closure workloads, replays and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded trace.
    Gen {
        /// Number of vertices.
        #[arg(long)]
        n: usize,
        /// Operations after the initial INIT line.
        #[arg(long, default_value_t = 100)]
        length: usize,
        /// mixed, incremental, decremental or dag-mixed.
        #[arg(long, default_value = "mixed")]
        profile: Profile,
        /// Generator seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (standard output if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a trace and emit one CSV record per operation.
    Replay {
        /// Trace file, or `-` for standard input.
        trace: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
        /// Compare with the oracle backend.
        #[arg(long)]
        check: bool,
        /// With --check, compare all pairs every this many operations (0: never).
        #[arg(long, default_value_t = 0)]
        sweep_stride: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Measure backends over several vertex counts.
    Bench {
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
        n: Vec<usize>,
        /// Workload profile.
        #[arg(long, default_value = "mixed")]
        profile: Profile,
        /// Comma-separated backends (may be empty).
        #[arg(long, value_delimiter = ',', default_value = "divcon")]
        backend: Vec<String>,
        /// Traces per backend and vertex count.
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Operations per trace.
        #[arg(long, default_value_t = 200)]
        length: usize,
        /// Base seed of traces and primes.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Buffering exponent of the counting backend.
        #[arg(long, default_value_t = dyntc::dag_counter::DEFAULT_EPSILON)]
        epsilon: f64,
        /// Explicit prime of the counting backend.
        #[arg(long)]
        prime: Option<u64>,
        /// Leaf size of the divide-and-conquer backend.
        #[arg(long, default_value_t = 1)]
        leaf_size: usize,
        /// Write the per-operation CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write aggregates and slopes here instead of standard error.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Replay a trace with oracle sweeps and internal audits.
    Audit {
        /// Trace file, or `-` for standard input.
        trace: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
        /// Sweep and audit every this many operations.
        #[arg(long, alias = "stride", default_value_t = 1)]
        sweep_stride: usize,
    },
}

#[derive(Args)]
struct BackendArgs {
    /// log, divcon, dag or oracle.
    #[arg(long, default_value = "divcon")]
    backend: Backend,
    /// Seed of the counting backend's random prime.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Buffering exponent of the counting backend.
    #[arg(long, default_value_t = dyntc::dag_counter::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Explicit prime of the counting backend.
    #[arg(long)]
    prime: Option<u64>,
    /// Leaf size of the divide-and-conquer backend.
    #[arg(long, default_value_t = 1)]
    leaf_size: usize,
}

impl BackendArgs {
    fn options(&self) -> GraphOptions {
        GraphOptions {
            seed: self.seed,
            epsilon: self.epsilon,
            prime: self.prime,
            leaf_size: self.leaf_size,
        }
    }
}

fn read_trace(path: &PathBuf) -> anyhow::Result<Trace> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(text.parse()?)
}

fn output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen {
            n,
            length,
            profile,
            seed,
            out,
        } => {
            let trace = generate(n, length, profile, seed)?;
            let mut w = output(out.as_ref())?;
            write!(w, "{trace}")?;
            w.flush()?;
        }
        Command::Replay {
            trace,
            backend,
            check,
            sweep_stride,
            csv,
        } => {
            let trace = read_trace(&trace)?;
            let cfg = ReplayConfig {
                check,
                sweep_stride,
                options: backend.options(),
                ..ReplayConfig::new(backend.backend)
            };
            let mut records = Vec::new();
            let summary = replay(&trace, &cfg, |r| records.push(r.to_csv()))?;
            let mut w = output(csv.as_ref())?;
            writeln!(w, "{}", BenchRecord::CSV_HEADER)?;
            for line in records {
                writeln!(w, "{line}")?;
            }
            w.flush()?;
            if csv.is_some() {
                println!(
                    "OK ops={} queries={} checked={} sweeps={} work_units={}",
                    summary.ops,
                    summary.queries,
                    summary.checked_queries,
                    summary.sweeps,
                    summary.work_units
                );
            }
        }
        Command::Bench {
            n,
            profile,
            backend,
            reps,
            length,
            seed,
            epsilon,
            prime,
            leaf_size,
            csv,
            summary,
        } => {
            let backends = backend
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse())
                .collect::<dyntc::Result<Vec<Backend>>>()?;
            let cfg = BenchConfig {
                ns: n,
                profile,
                backends,
                reps,
                length,
                seed,
                options: GraphOptions {
                    seed,
                    epsilon,
                    prime,
                    leaf_size,
                },
            };
            let mut w = output(csv.as_ref())?;
            writeln!(w, "{}", BenchRecord::CSV_HEADER)?;
            let mut io_err = None;
            let report = bench::run(&cfg, |r| {
                if let Err(e) = writeln!(w, "{}", r.to_csv()) {
                    io_err.get_or_insert(e);
                }
            })?;
            if let Some(e) = io_err {
                return Err(e.into());
            }
            w.flush()?;
            match summary {
                Some(p) => fs::write(&p, report.summary())
                    .with_context(|| format!("writing {}", p.display()))?,
                None => eprint!("{}", report.summary()),
            }
        }
        Command::Audit {
            trace,
            backend,
            sweep_stride,
        } => {
            let trace = read_trace(&trace)?;
            let s = audit_trace(&trace, backend.backend, sweep_stride, backend.options())?;
            println!(
                "OK ops={} checked={} sweeps={} audits={}",
                s.ops, s.checked_queries, s.sweeps, s.audits
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<HarnessError>() {
            Some(h @ (HarnessError::Mismatch(_) | HarnessError::Audit { .. })) => {
                println!("{h}");
                ExitCode::from(1)
            }
            _ => {
                println!("ERROR {e:#}");
                ExitCode::from(2)
            }
        },
    }
}
