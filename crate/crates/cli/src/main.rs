use clap::{Args, Parser, Subcommand};
use memcompute::bench::{bench_csv, loglog_fit, run_bench, scaling_sweep, BenchConfig, DEFAULT_SEED};
use memcompute::cvm::{analyzer_spectrum_with_budget, sample_chain, samples_csv, CvmChain};
use memcompute::dcram::{run_schedule, DcramOptions};
use memcompute::overhead::{overhead_census, series_readout, SeriesChain};
use memcompute::spectral::{
    self, full_spectrum_with_budget, recover_subset, recover_subset_with, spectrum_window, GridSpec, Method,
    DEFAULT_BUDGET_SAMPLES,
};
use memcompute::tm::TmSpec;
use memcompute::umm::{encode_utm, run_umm};
use memcompute::{Error, IntegerSet};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

const EXIT_TRUE: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_FALSE: u8 = 3;

#[derive(Parser)]
#[command(name = "memcompute", version, about = "Memcomputing models and subset-sum solvers")]
struct Cli {
    /// Cap on data-parallel worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest sample count allowed for a full in-memory transform.
    #[arg(long, global = true, env = "MEMCOMPUTE_BUDGET_SAMPLES")]
    budget_samples: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide (and optionally solve) subset sum for one target.
    Solve(SolveArgs),
    /// Write subset counts over a window as CSV.
    Spectrum(SpectrumArgs),
    /// Time goertzel against dp over a size sweep.
    Bench(BenchArgs),
    /// Run a Turing machine embedded in a memcomputing machine.
    Umm(UmmArgs),
    /// Run the matrix-machine subset-sum schedule.
    Dcram(DcramArgs),
    /// Read the spectrum of a simulated multiplier chain.
    Cvm(CvmArgs),
    /// Report the information overhead of a set.
    Overhead(SetArgs),
}

#[derive(Args)]
struct SetArgs {
    /// Integer set: one value per line (`#` comments) or a JSON array.
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    allow_duplicates: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, allow_hyphen_values = true)]
    target: i64,
    #[arg(long, default_value = "goertzel")]
    method: Method,
    /// Also produce one subset summing to the target.
    #[arg(long)]
    recover: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Inclusive `lo:hi`; defaults to `-f_max:f_max`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// `goertzel` streams each bin, `fft` transforms once within the sample budget.
    #[arg(long, default_value = "goertzel")]
    method: Method,
    /// `csv` or `json`.
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Sizes as `lo:hi` or a comma list.
    #[arg(long, default_value = "8:16")]
    sizes: String,
    #[arg(long, default_value_t = 1000)]
    max_abs: i64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Seconds after which a method stops being run at larger sizes.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    /// Time goertzel at fixed `n` over N scaled 1x..16x instead, reporting a log-log fit.
    #[arg(long)]
    scaling: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct UmmArgs {
    /// Turing machine description (JSON).
    #[arg(long)]
    tm: PathBuf,
    /// Input tape, one character per symbol.
    #[arg(long, default_value = "")]
    tape: String,
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
}

#[derive(Args)]
struct DcramArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, allow_hyphen_values = true)]
    target: i64,
    /// Step-trace CSV `iteration,row,column,value`.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Largest set size the schedule accepts; the block grows like `2^n`.
    #[arg(long, default_value_t = memcompute::dcram::DEFAULT_MAX_N)]
    max_n: usize,
}

#[derive(Args)]
struct CvmArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Chain samples CSV `k,t,re,im`.
    #[arg(long)]
    emit_samples: Option<PathBuf>,
    /// Analyzer output CSV `f,count`.
    #[arg(long)]
    emit_spectrum: Option<PathBuf>,
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { code: EXIT_RESOURCE, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn load_set(args: &SetArgs) -> Result<IntegerSet, Failure> {
    IntegerSet::from_file(&args.set, args.allow_duplicates)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.set.display())))
}

fn parse_window(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::usage(format!("window must be lo:hi, got {text:?}"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(Failure::usage(format!("window {lo}:{hi} is empty")));
    }
    Ok((lo, hi))
}

fn window_or_full(window: &Option<String>, grid: GridSpec) -> Result<(i64, i64), Failure> {
    match window {
        Some(w) => parse_window(w),
        None => Ok((-(grid.f_max as i64), grid.f_max as i64)),
    }
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::usage(format!("sizes must be lo:hi or a comma list, got {text:?}"));
    if let Some((lo, hi)) = text.split_once(':') {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn cmd_solve(args: &SolveArgs, budget: u64) -> Outcome {
    let set = load_set(&args.set)?;
    let grid = GridSpec::for_set(&set);
    let start = Instant::now();
    let count = match args.method {
        Method::Fft => Some(full_spectrum_with_budget(&set, budget)?.get(args.target)),
        Method::Dp => None,
        m => spectral::count_subsets(&set, args.target, m)?,
    };
    let decision = match count {
        Some(c) => c > 0,
        None => spectral::solve_decision(&set, args.target, Method::Dp)?,
    };
    let subset = if args.recover && decision {
        let r = match args.method {
            Method::Goertzel => recover_subset(&set, args.target)?,
            m => recover_subset_with(&set, args.target, m)?,
        };
        r.map(|r| r.subset)
    } else {
        None
    };
    print_json(&json!({
        "decision": decision,
        "count": count,
        "subset": subset,
        "method": args.method.name(),
        "n": set.len(),
        "f_max": grid.f_max,
        "N": grid.samples,
        "elapsed_ms": start.elapsed().as_secs_f64() * 1e3,
    }));
    Ok(if decision { EXIT_TRUE } else { EXIT_FALSE })
}

fn cmd_spectrum(args: &SpectrumArgs, budget: u64) -> Outcome {
    let set = load_set(&args.set)?;
    let (lo, hi) = window_or_full(&args.window, GridSpec::for_set(&set))?;
    let spectrum = match args.method {
        Method::Goertzel => spectrum_window(&set, lo, hi)?,
        Method::Fft => full_spectrum_with_budget(&set, budget)?.restrict(lo, hi)?,
        m => return Err(Failure::usage(format!("spectrum supports goertzel or fft, not {}", m.name()))),
    };
    let text = match args.format.as_str() {
        "csv" => spectrum.to_csv(),
        "json" => format!("{}\n", serde_json::to_string_pretty(&spectrum.to_json_map()).expect("json values serialize")),
        other => return Err(Failure::usage(format!("unknown format {other:?}"))),
    };
    write_output(args.out.as_deref(), &text)?;
    Ok(EXIT_TRUE)
}

fn cmd_bench(args: &BenchArgs) -> Outcome {
    if let Some(n) = args.scaling {
        let points = scaling_sweep(n, args.max_abs, &[1, 2, 4, 8, 16], 3, args.seed)?;
        let fit = loglog_fit(&points)?;
        let text = format!("{}\n", serde_json::to_string_pretty(&json!({ "n": n, "points": points, "fit": fit })).expect("json"));
        write_output(args.out.as_deref(), &text)?;
        return Ok(EXIT_TRUE);
    }
    if args.timeout.is_nan() || args.timeout < 0.0 {
        return Err(Failure::usage("timeout must be nonnegative"));
    }
    let config = BenchConfig {
        sizes: parse_sizes(&args.sizes)?,
        max_abs: args.max_abs,
        signed: true,
        seed: args.seed,
        timeout: Duration::from_secs_f64(args.timeout),
    };
    let rows = run_bench(&config).map_err(|e| match e {
        Error::OutOfRange(m) => Failure::usage(m),
        e => e.into(),
    })?;
    write_output(args.out.as_deref(), &bench_csv(&rows))?;
    Ok(EXIT_TRUE)
}

fn cmd_umm(args: &UmmArgs) -> Outcome {
    let text = std::fs::read_to_string(&args.tm).map_err(|e| Failure::usage(format!("{}: {e}", args.tm.display())))?;
    let tm = TmSpec::from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", args.tm.display())))?;
    let input = TmSpec::tape_from_str(&args.tape);
    let embedded = encode_utm(&tm, &input).map_err(|e| Failure::usage(e.to_string()))?;
    let run = run_umm(embedded.machine.clone(), args.max_steps)?;
    let config = embedded.config_of(&run.machine);
    print_json(&json!({
        "halted": run.halted,
        "steps": run.steps,
        "state": config.state,
        "head": config.head,
        "tape": config.tape_string(&tm.blank),
    }));
    Ok(EXIT_TRUE)
}

fn cmd_dcram(args: &DcramArgs) -> Outcome {
    let set = load_set(&args.set)?;
    let opts = DcramOptions { record_trace: args.trace.is_some(), max_n: args.max_n, ..DcramOptions::default() };
    let run = run_schedule(&set, args.target, opts)?;
    if let Some(path) = &args.trace {
        write_output(Some(path), &run.trace_csv())?;
    }
    let o = &run.outcome;
    print_json(&json!({
        "found": o.found,
        "iteration": o.iteration,
        "subsets": o.subsets,
        "iterations_run": o.iterations_run,
        "peak_cells": u64::try_from(o.peak_cells).unwrap_or(u64::MAX),
        "n": set.len(),
    }));
    Ok(if o.found { EXIT_TRUE } else { EXIT_FALSE })
}

fn cmd_cvm(args: &CvmArgs, budget: u64) -> Outcome {
    let set = load_set(&args.set)?;
    let chain = CvmChain::from_set(&set);
    let (lo, hi) = window_or_full(&args.window, chain.grid())?;
    let spectrum = analyzer_spectrum_with_budget(&chain, lo, hi, budget)?;
    if let Some(path) = &args.emit_samples {
        write_output(Some(path), &samples_csv(&sample_chain(&chain)))?;
    }
    if let Some(path) = &args.emit_spectrum {
        write_output(Some(path), &spectrum.to_csv())?;
    }
    print_json(&json!({
        "window": [lo, hi],
        "N": chain.grid().samples,
        "counts": spectrum.to_json_map(),
        "residual": spectrum.residual(),
    }));
    Ok(EXIT_TRUE)
}

fn cmd_overhead(args: &SetArgs) -> Outcome {
    let set = load_set(args)?;
    let (report, _) = overhead_census(&set)?;
    let series = series_readout(&SeriesChain::new(set.elements().to_vec())?);
    print_json(&json!({
        "n": report.n,
        "mass": report.mass,
        "support_size": report.support_size,
        "messages_per_cell": report.messages_per_cell,
        "self_information_bits": report.self_information_bits,
        "readout_count": series.readout_count,
        "pairwise_figure": series.pairwise_figure,
    }));
    Ok(EXIT_TRUE)
}

fn run(cli: Cli) -> Outcome {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::usage(format!("--threads: {e}")))?;
    }
    let budget = cli.budget_samples.unwrap_or(DEFAULT_BUDGET_SAMPLES);
    match &cli.command {
        Command::Solve(a) => cmd_solve(a, budget),
        Command::Spectrum(a) => cmd_spectrum(a, budget),
        Command::Bench(a) => cmd_bench(a),
        Command::Umm(a) => cmd_umm(a),
        Command::Dcram(a) => cmd_dcram(a),
        Command::Cvm(a) => cmd_cvm(a, budget),
        Command::Overhead(a) => cmd_overhead(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
