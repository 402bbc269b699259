use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cvent::cli::{self, Axis, Family, SweepSpec};
use cvent::{bell_swap_report, purification_scan, verify, ConvergeOptions, SwapOutcome};

const EXIT_USAGE: u8 = 1;
const EXIT_UNCONVERGED: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cvent",
    version,
    about = "Entanglement of continuous-variable bipartite states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy of entanglement of one state.
    Entangle {
        #[command(subcommand)]
        state: StateArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Entropy over a two-parameter grid, written as CSV.
    Sweep(SweepArgs),
    /// Entanglement swapping between two copies of a state.
    Swap {
        #[command(subcommand)]
        protocol: SwapArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Run the acceptance checks and print a pass/fail table.
    Verify,
}

#[derive(Args, Clone, Copy)]
struct SolverArgs {
    /// Significant figures required of the trace and the entropy.
    #[arg(long, global = true, default_value_t = 5)]
    tol_sigfigs: u32,
    /// Largest matrix side tried before giving up.
    #[arg(long, global = true, default_value_t = cvent::spectra::DEFAULT_MAX_SIDE)]
    max_side: usize,
}

impl SolverArgs {
    fn options(self) -> ConvergeOptions {
        ConvergeOptions {
            tol_sigfigs: self.tol_sigfigs,
            max_side: self.max_side,
            ..ConvergeOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum StateArgs {
    /// Partially correlated state built from two Gaussian wavepackets.
    Bell {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        x1: Option<f64>,
        #[arg(long)]
        x2: Option<f64>,
    },
    /// Two-mode cat state.
    Cat {
        #[arg(long)]
        a0_sq: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
    },
    /// Two-mode squeezed state.
    Squeezed {
        #[arg(long)]
        r: Option<f64>,
    },
    /// Outer pair after swapping two partially correlated states.
    SwapBell {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Outer pair after swapping two cat states.
    SwapCat {
        #[arg(long)]
        a0_sq: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
}

impl StateArgs {
    fn split(&self) -> (Family, Vec<(&'static str, Option<f64>)>) {
        match *self {
            StateArgs::Bell {
                alpha,
                beta,
                sigma,
                x1,
                x2,
            } => (
                Family::Bell,
                vec![
                    ("alpha", alpha),
                    ("beta", beta),
                    ("sigma", sigma),
                    ("x1", x1),
                    ("x2", x2),
                ],
            ),
            StateArgs::Cat { a0_sq, d } => (Family::Cat, vec![("a0_sq", a0_sq), ("d", d)]),
            StateArgs::Squeezed { r } => (Family::Squeezed, vec![("r", r)]),
            StateArgs::SwapBell {
                alpha,
                beta,
                sigma,
                c,
                a,
                b,
                mu,
            } => (
                Family::SwapBell,
                vec![
                    ("alpha", alpha),
                    ("beta", beta),
                    ("sigma", sigma),
                    ("c", c),
                    ("a", a),
                    ("b", b),
                    ("mu", mu),
                ],
            ),
            StateArgs::SwapCat { a0_sq, d, a, b, mu } => (
                Family::SwapCat,
                vec![("a0_sq", a0_sq), ("d", d), ("a", a), ("b", b), ("mu", mu)],
            ),
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// key=value file with family, axis1, axis2, tolerance_sigfigs and fixed parameters.
    #[arg(long, conflicts_with_all = ["family", "axis1", "axis2", "fixed"])]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    /// name:min:max:steps
    #[arg(long, allow_hyphen_values = true)]
    axis1: Option<Axis>,
    /// name:min:max:steps
    #[arg(long, allow_hyphen_values = true)]
    axis2: Option<Axis>,
    /// Fixed parameter as name=value; repeatable.
    #[arg(long, value_parser = parse_fixed, allow_hyphen_values = true)]
    fixed: Vec<(String, f64)>,
    #[arg(long, default_value_t = 5)]
    tol_sigfigs: u32,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_fixed(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected name=value")?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("'{v}' is not a number"))?;
    Ok((cli::normalize_name(k), v))
}

#[derive(Subcommand)]
enum SwapArgs {
    /// Swap two partially correlated states and compare entropies.
    Bell {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
    },
    /// Swap two cat states over a square grid of measurement outcomes.
    Cat {
        #[arg(long, default_value_t = 0.3)]
        a0_sq: f64,
        #[arg(long, default_value_t = 1.0)]
        d: f64,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        /// Outcomes span [-range, range] on both axes.
        #[arg(long, default_value_t = 2.0)]
        range: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(parsed.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, String> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("{}: {e}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn exit_for(converged: bool) -> u8 {
    if converged {
        0
    } else {
        EXIT_UNCONVERGED
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Entangle { state, solver } => {
            let (family, given) = state.split();
            let overrides: BTreeMap<String, f64> = given
                .into_iter()
                .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
                .collect();
            let r =
                cli::evaluate(family, &overrides, &solver.options()).map_err(|e| e.to_string())?;
            println!("family={family} {}", cli::format_report(&r));
            Ok(exit_for(r.converged))
        }
        Command::Sweep(args) => sweep(args),
        Command::Swap { protocol, solver } => swap(protocol, solver.options()),
        Command::Verify => {
            let outcomes = verify::run_all();
            print!("{}", verify::format_table(&outcomes));
            Ok(if outcomes.iter().all(|o| o.passed) {
                0
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

fn sweep(args: SweepArgs) -> Result<u8, String> {
    let spec = match &args.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            cli::parse_sweep_config(&text).map_err(|e| e.to_string())?
        }
        None => {
            let spec = SweepSpec {
                family: args.family.ok_or("--family is required without --config")?,
                axis1: args
                    .axis1
                    .clone()
                    .ok_or("--axis1 is required without --config")?,
                axis2: args
                    .axis2
                    .clone()
                    .ok_or("--axis2 is required without --config")?,
                fixed: args.fixed.iter().cloned().collect(),
                tolerance_sigfigs: args.tol_sigfigs,
            };
            spec.validate().map_err(|e| e.to_string())?;
            spec
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err("--jobs must be at least 1".into());
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| e.to_string())?;
    let rows = pool
        .install(|| cli::run_sweep(&spec))
        .map_err(|e| e.to_string())?;
    cli::write_csv(&rows, output(args.out.as_ref())?).map_err(|e| e.to_string())?;
    Ok(exit_for(rows.iter().all(|r| r.converged)))
}

fn swap(protocol: SwapArgs, opts: ConvergeOptions) -> Result<u8, String> {
    match protocol {
        SwapArgs::Bell {
            alpha,
            beta,
            c,
            sigma,
            a,
            b,
            mu,
        } => {
            let outcome = SwapOutcome::new(a, b, mu).map_err(|e| e.to_string())?;
            let r = bell_swap_report(alpha, beta, c, outcome, sigma, &opts)
                .map_err(|e| e.to_string())?;
            println!(
                "e_initial_alpha={} e_initial_beta={} e_swapped={} converged={}",
                cli::fmt_num(r.e_initial_alpha),
                cli::fmt_num(r.e_initial_beta),
                cli::fmt_num(r.e_swapped),
                r.converged
            );
            Ok(exit_for(r.converged))
        }
        SwapArgs::Cat {
            a0_sq,
            d,
            mu,
            range,
            steps,
            out,
        } => {
            if steps == 0 || !(range.is_finite() && range >= 0.0) {
                return Err("--steps must be positive and --range finite and non-negative".into());
            }
            let (a0, _) = cvent::cat_amplitudes(a0_sq).map_err(|e| e.to_string())?;
            let grid = Axis::new("a", -range, range, steps).values();
            let reports =
                purification_scan(a0, d, mu, &grid, &grid, &opts).map_err(|e| e.to_string())?;
            let mut w = output(out.as_ref())?;
            let io = |e: io::Error| e.to_string();
            writeln!(w, "a,b,e_initial,e_swapped,gain,converged,trace_rel_err").map_err(io)?;
            for r in &reports {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    cli::fmt_num(r.outcome.a),
                    cli::fmt_num(r.outcome.b),
                    cli::fmt_num(r.e_initial),
                    cli::fmt_num(r.e_swapped),
                    cli::fmt_num(r.gain),
                    r.converged,
                    cli::fmt_num(r.trace_relative_error.unwrap_or(f64::NAN))
                )
                .map_err(io)?;
            }
            w.flush().map_err(io)?;
            Ok(exit_for(reports.iter().all(|r| r.converged)))
        }
    }
}
