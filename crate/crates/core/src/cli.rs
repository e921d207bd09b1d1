//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, parse_methods, parse_rates, BenchConfig, BenchError, Method};
use crate::filters::{FilterSpec, FirWindow, IirDesign};
use crate::framing::Frame;
use crate::metrics::{format_value, snr_db};
use crate::reconstruct::{imat, recover_spline, sparse_test_signal, ImatParams, SplineBoundary};
use crate::sampling::{apply_mask, random_mask, uniform_mask};
use crate::wav_io::{read_wav_file, write_wav_file, AudioSignal};

/// Environment fallback for `bench --threads`.
pub const THREADS_ENV: &str = "RESAMPLE_BENCH_THREADS";

/// Rows in a `filters` response table.
pub const RESPONSE_ROWS: usize = 512;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "resample-bench", version, about = "Sampling and recovery benchmark for audio frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the method x rate matrix over a directory of WAV files.
    Bench(BenchArgs),
    /// Sample a sparse synthetic signal and compare spline and IMAT recovery.
    DemoSparse(DemoArgs),
    /// Print or write magnitude responses of anti-aliasing filter designs.
    Filters(FilterArgs),
    /// Run one method at one rate on a single WAV file.
    Recover(RecoverArgs),
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated rates in (0, 1].
    #[arg(long)]
    rates: Option<String>,
    /// Comma-separated method ids.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Leave elapsed_seconds empty so results are reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[arg(long, default_value_t = 64)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    rate: f64,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FilterKind {
    Fir,
    Iir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WindowArg {
    Rectangular,
    Hamming,
    Blackman,
    Kaiser,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesignArg {
    Butterworth,
    Chebyshev1,
}

#[derive(Debug, Args)]
struct FilterArgs {
    /// Single design to print. Without it the whole menu is written to --out.
    #[arg(long, value_enum)]
    kind: Option<FilterKind>,
    #[arg(long, default_value_t = 0.25)]
    cutoff: f64,
    #[arg(long, default_value_t = 63)]
    taps: usize,
    #[arg(long, value_enum, default_value_t = WindowArg::Hamming)]
    window: WindowArg,
    /// Kaiser window shape.
    #[arg(long, default_value_t = 8.6)]
    beta: f64,
    #[arg(long, default_value_t = 6)]
    order: usize,
    #[arg(long, value_enum, default_value_t = DesignArg::Butterworth)]
    design: DesignArg,
    /// Chebyshev passband ripple in dB.
    #[arg(long, default_value_t = 1.0)]
    ripple: f64,
    /// Output file for --kind, output directory otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RecoverArgs {
    input: PathBuf,
    #[arg(long)]
    method: Method,
    #[arg(long)]
    rate: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Config(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parse `args` (program name first), run the subcommand and return the
/// process exit code: 0 success, 1 usage error, 2 data error.
pub fn cli_main<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Bench(a) => cmd_bench(a),
        Command::DemoSparse(a) => cmd_demo(a),
        Command::Filters(a) => cmd_filters(a),
        Command::Recover(a) => cmd_recover(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            EXIT_DATA
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<BenchConfig, Failure> {
    match path {
        None => Ok(BenchConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            BenchConfig::parse(&text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

fn resolve_threads(flag: Option<usize>, config: Option<usize>) -> Result<Option<usize>, Failure> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| usage(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        _ => Ok(config),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let mut config = load_config(args.config.as_deref())?;
    if let Some(d) = args.dataset {
        config.dataset_dir = Some(d);
    }
    if let Some(o) = args.out {
        config.output_dir = o;
    }
    if let Some(r) = &args.rates {
        config.rates = parse_rates(r).map_err(usage)?;
    }
    if let Some(m) = &args.methods {
        config.methods = parse_methods(m).map_err(usage)?;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    config.no_timing |= args.no_timing;
    config.threads = resolve_threads(args.threads, config.threads)?;
    config.validate().map_err(usage)?;
    if config.dataset_dir.is_none() {
        return Err(Failure::Usage("no dataset: pass --dataset or set dataset_dir".into()));
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(data)?;
    let outcome = pool.install(|| bench::run_bench(&config))?;
    for (file, reason) in &outcome.skipped {
        eprintln!("skipped {file}: {reason}");
    }
    println!(
        "{} records written to {}",
        outcome.records.len(),
        config.output_dir.join("results.csv").display()
    );
    Ok(())
}

fn cell(v: f64) -> String {
    format_value(v)
}

fn cmd_demo(args: DemoArgs) -> Result<(), Failure> {
    if !(args.rate > 0.0 && args.rate <= 1.0) {
        return Err(Failure::Usage(format!("rate {} outside (0, 1]", args.rate)));
    }
    let n = args.n;
    let original: Vec<f64> = sparse_test_signal(n, args.k, args.seed).map_err(usage)?;
    let frame = Frame::new(original.clone());

    let uniform = uniform_mask(n, args.rate).map_err(usage)?;
    let uniform_obs = apply_mask(&frame, &uniform).map_err(data)?;
    let spline = recover_spline(&uniform_obs.data, &uniform, SplineBoundary::NotAKnot).map_err(data)?;

    let random = random_mask(n, args.rate, args.seed).map_err(usage)?;
    let random_obs = apply_mask(&frame, &random).map_err(data)?;
    let sparse = imat(&random_obs.data, &random, &ImatParams::default()).map_err(data)?;

    let kept_u = uniform.indicator();
    let kept_r = random.indicator();
    let mut csv = String::from("index,original,sampled,spline,random_sampled,imat\n");
    for i in 0..n {
        let u = if kept_u[i] { cell(original[i]) } else { String::new() };
        let r = if kept_r[i] { cell(original[i]) } else { String::new() };
        let _ = writeln!(csv, "{i},{},{u},{},{r},{}", cell(original[i]), cell(spline[i]), cell(sparse[i]));
    }
    emit(args.out.as_deref(), &csv)?;
    eprintln!(
        "spline (uniform) SNR {} dB, IMAT (random) SNR {} dB",
        cell(snr_db(&original, &spline).map_err(data)?),
        cell(snr_db(&original, &sparse).map_err(data)?)
    );
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| data(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `frequency,magnitude_db` on `f = i * 0.5 / RESPONSE_ROWS`.
pub fn response_table(spec: &FilterSpec<f64>) -> Result<String, crate::filters::FilterError> {
    let filter = spec.design()?;
    let mut out = String::from("frequency,magnitude_db\n");
    for i in 0..RESPONSE_ROWS {
        let f = i as f64 * 0.5 / RESPONSE_ROWS as f64;
        let db = 20.0 * filter.magnitude(f).log10();
        let _ = writeln!(out, "{},{}", format_value(f), format_value(db));
    }
    Ok(out)
}

fn window_of(args: &FilterArgs, w: WindowArg) -> FirWindow<f64> {
    match w {
        WindowArg::Rectangular => FirWindow::Rectangular,
        WindowArg::Hamming => FirWindow::Hamming,
        WindowArg::Blackman => FirWindow::Blackman,
        WindowArg::Kaiser => FirWindow::Kaiser { beta: args.beta },
    }
}

fn design_of(args: &FilterArgs, d: DesignArg) -> IirDesign<f64> {
    match d {
        DesignArg::Butterworth => IirDesign::Butterworth,
        DesignArg::Chebyshev1 => IirDesign::Chebyshev1 { ripple_db: args.ripple },
    }
}

fn cmd_filters(args: FilterArgs) -> Result<(), Failure> {
    let cutoff = args.cutoff;
    match args.kind {
        Some(FilterKind::Fir) => {
            let spec = FilterSpec::Fir { cutoff, window: window_of(&args, args.window), taps: args.taps };
            emit(args.out.as_deref(), &response_table(&spec).map_err(usage)?)
        }
        Some(FilterKind::Iir) => {
            let spec = FilterSpec::Iir { cutoff, design: design_of(&args, args.design), order: args.order };
            emit(args.out.as_deref(), &response_table(&spec).map_err(usage)?)
        }
        None => {
            let dir = args
                .out
                .clone()
                .ok_or_else(|| Failure::Usage("writing the filter menu needs --out DIR".into()))?;
            fs::create_dir_all(&dir).map_err(|e| data(format!("{}: {e}", dir.display())))?;
            let mut menu = Vec::new();
            for (name, w) in [
                ("rectangular", WindowArg::Rectangular),
                ("hamming", WindowArg::Hamming),
                ("blackman", WindowArg::Blackman),
                ("kaiser", WindowArg::Kaiser),
            ] {
                let spec = FilterSpec::Fir { cutoff, window: window_of(&args, w), taps: args.taps };
                menu.push((format!("fir_{name}_{}.csv", args.taps), spec));
            }
            for order in [2, 4, 6] {
                for (name, d) in [("butterworth", DesignArg::Butterworth), ("chebyshev1", DesignArg::Chebyshev1)] {
                    let spec = FilterSpec::Iir { cutoff, design: design_of(&args, d), order };
                    menu.push((format!("iir_{name}_{order}.csv"), spec));
                }
            }
            for (file, spec) in &menu {
                let table = response_table(spec).map_err(usage)?;
                emit(Some(&dir.join(file)), &table)?;
            }
            println!("{} response tables written to {}", menu.len(), dir.display());
            Ok(())
        }
    }
}

fn cmd_recover(args: RecoverArgs) -> Result<(), Failure> {
    let config = load_config(args.config.as_deref())?;
    if !(args.rate > 0.0 && args.rate <= 1.0) {
        return Err(Failure::Usage(format!("rate {} outside (0, 1]", args.rate)));
    }
    let config = BenchConfig { seed: args.seed, ..config };
    let signal: AudioSignal<f64> =
        read_wav_file(&args.input).map_err(|e| data(format!("{}: {e}", args.input.display())))?;
    let label = args.input.display().to_string();
    let result = bench::evaluate_signal(&label, &signal.samples, args.method, args.rate, &config)?;
    write_wav_file(&args.out, &AudioSignal::mono(result.samples, signal.sample_rate_hz))
        .map_err(|e| data(format!("{}: {e}", args.out.display())))?;
    println!(
        "{} {} rate {}: SNR {} dB, {} s",
        label,
        args.method,
        format_value(args.rate),
        format_value(result.snr_db),
        format_value(result.elapsed_seconds)
    );
    Ok(())
}
