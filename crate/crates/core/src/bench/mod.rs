//! Experiment orchestration: every file × method × rate, persisted to disk.

mod config;
mod method;
mod pipeline;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use rayon::prelude::*;
use thiserror::Error;

pub use config::{default_rates, parse_methods, parse_rates, BenchConfig, ConfigError, FilterOverrides};
pub use method::{AntiAlias, Method, Recovery, UnknownMethod};
pub use pipeline::{anti_alias_spec, run_pipeline, StageError};
pub use report::{
    format_rate, mean_snr_by_rate, normalized_times, results_csv, summary_text, timing_flatness, write_outputs,
    TIMING_FLATNESS_LIMIT,
};

use crate::framing::{merge_frames, split_frames, FramingError};
use crate::metrics::{snr_db, MetricsError};
use crate::sampling::frame_seed;
use crate::wav_io::{read_wav_file, write_wav_file, AudioSignal, WavError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no readable .wav files in {0}")]
    EmptyDataset(PathBuf),
    #[error("every file in the dataset failed")]
    AllFilesFailed,
    #[error("{file}: {source}")]
    Wav { file: String, source: WavError },
    #[error("{file}: {source}")]
    Framing { file: String, source: FramingError },
    #[error("{file}, frame {frame}, {method}: {source}")]
    Stage {
        file: String,
        frame: usize,
        method: Method,
        source: StageError,
    },
    #[error("{file}, {method}: {source}")]
    Metrics {
        file: String,
        method: Method,
        source: MetricsError,
    },
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// One result row: a whole file through one scheme at one rate.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub file: String,
    pub method: Method,
    pub rate: f64,
    pub snr_db: f64,
    /// Summed over frames. Zero when timing is disabled.
    pub elapsed_seconds: f64,
    pub seed: u64,
    pub pesq: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    /// `(file, reason)` for every file that was skipped.
    pub skipped: Vec<(String, String)>,
}

/// `.wav` files directly inside `dir`, sorted by file name.
pub fn list_dataset(dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("wav")))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(BenchError::EmptyDataset(dir.to_path_buf()));
    }
    Ok(files)
}

/// Reconstruction of a whole signal by one scheme at one rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalResult {
    pub samples: Vec<f64>,
    pub snr_db: f64,
    pub elapsed_seconds: f64,
}

/// Frame the signal, run every frame through `method` and merge.
/// Frames run in parallel on the current rayon pool.
pub fn evaluate_signal(
    file: &str,
    samples: &[f64],
    method: Method,
    rate: f64,
    config: &BenchConfig,
) -> Result<SignalResult, BenchError> {
    let frames = split_frames(samples, config.frame_len).map_err(|source| BenchError::Framing {
        file: file.to_string(),
        source,
    })?;
    let outcomes: Vec<_> = frames
        .par_iter()
        .map(|frame| {
            run_pipeline(frame, method, rate, frame_seed(config.seed, frame.index), config).map_err(|source| {
                BenchError::Stage {
                    file: file.to_string(),
                    frame: frame.index,
                    method,
                    source,
                }
            })
        })
        .collect::<Result<_, _>>()?;
    let elapsed_seconds = outcomes.iter().map(|(_, e)| e.elapsed_seconds).sum();
    let recovered: Vec<_> = outcomes.into_iter().map(|(f, _)| f).collect();
    let merged = merge_frames(&recovered, samples.len()).map_err(|source| BenchError::Framing {
        file: file.to_string(),
        source,
    })?;
    let snr = snr_db(samples, &merged).map_err(|source| BenchError::Metrics {
        file: file.to_string(),
        method,
        source,
    })?;
    Ok(SignalResult {
        samples: merged,
        snr_db: snr,
        elapsed_seconds,
    })
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| file_label(path))
}

/// Path of a recovered signal: `<out>/recovered/<stem>.<method>.<rate>.wav`.
pub fn recovered_path(output_dir: &Path, stem: &str, method: Method, rate: f64) -> PathBuf {
    output_dir
        .join("recovered")
        .join(format!("{stem}.{}.{}.wav", method.id(), format_rate(rate)))
}

/// Run an external scorer. `{ref}` and `{deg}` in the template are replaced
/// by the two paths; stdout must contain one float (the last numeric token
/// is taken).
pub fn run_pesq(template: &str, reference: &Path, degraded: &Path) -> Result<f64, String> {
    let args: Vec<String> = template
        .split_whitespace()
        .map(|a| {
            a.replace("{ref}", &reference.to_string_lossy())
                .replace("{deg}", &degraded.to_string_lossy())
        })
        .collect();
    let (program, rest) = args.split_first().ok_or("empty PESQ command")?;
    let out = Command::new(program)
        .args(rest)
        .output()
        .map_err(|e| format!("{program}: {e}"))?;
    if !out.status.success() {
        return Err(format!("{program} exited with {}", out.status));
    }
    let stdout = String::from_utf8_lossy(&out.stdout);
    stdout
        .split_whitespace()
        .rev()
        .find_map(|t| t.parse::<f64>().ok())
        .ok_or_else(|| format!("no number in PESQ output {:?}", stdout.trim()))
}

fn evaluate_file(path: &Path, config: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    let label = file_label(path);
    let stem = file_stem(path);
    let signal: AudioSignal<f64> = read_wav_file(path).map_err(|source| BenchError::Wav {
        file: label.clone(),
        source,
    })?;
    let (methods, rates) = config.normalized_grid();
    let write_audio = config.write_recovered || config.pesq_command.is_some();

    let reference_path = config.output_dir.join("reference").join(format!("{stem}.wav"));
    if config.pesq_command.is_some() {
        fs::create_dir_all(reference_path.parent().unwrap()).map_err(io_err(&reference_path))?;
        write_wav_file(&reference_path, &signal).map_err(|source| BenchError::Wav {
            file: label.clone(),
            source,
        })?;
    }

    let mut records = Vec::with_capacity(methods.len() * rates.len());
    for &method in &methods {
        for &rate in &rates {
            let result = evaluate_signal(&label, &signal.samples, method, rate, config)?;
            let mut pesq = None;
            if write_audio {
                let out = recovered_path(&config.output_dir, &stem, method, rate);
                fs::create_dir_all(out.parent().unwrap()).map_err(io_err(&out))?;
                let recovered = AudioSignal::mono(result.samples, signal.sample_rate_hz);
                write_wav_file(&out, &recovered).map_err(|source| BenchError::Wav {
                    file: label.clone(),
                    source,
                })?;
                if let Some(cmd) = &config.pesq_command {
                    match run_pesq(cmd, &reference_path, &out) {
                        Ok(score) => pesq = Some(score),
                        Err(e) => log::warn!("{label} {method} {rate}: PESQ failed: {e}"),
                    }
                }
            }
            records.push(BenchRecord {
                file: label.clone(),
                method,
                rate,
                snr_db: result.snr_db,
                elapsed_seconds: if config.no_timing { 0.0 } else { result.elapsed_seconds },
                seed: config.seed,
                pesq,
            });
        }
    }
    Ok(records)
}

/// Run the full matrix over `config.dataset_dir` and write every artifact
/// under `config.output_dir`. Unreadable or failing files are logged and
/// skipped; the run fails only if no file succeeds.
pub fn run_bench(config: &BenchConfig) -> Result<BenchOutcome, BenchError> {
    config.validate()?;
    let dir = config
        .dataset_dir
        .as_deref()
        .ok_or_else(|| ConfigError::Invalid("dataset_dir is not set".into()))?;
    let files = list_dataset(dir)?;
    fs::create_dir_all(&config.output_dir).map_err(io_err(&config.output_dir))?;

    let mut outcome = BenchOutcome::default();
    for path in &files {
        match evaluate_file(path, config) {
            Ok(records) => outcome.records.extend(records),
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                outcome.skipped.push((file_label(path), e.to_string()));
            }
        }
    }
    if outcome.records.is_empty() {
        return Err(BenchError::AllFilesFailed);
    }
    outcome
        .records
        .sort_by(|a, b| (&a.file, a.method).cmp(&(&b.file, b.method)).then(a.rate.total_cmp(&b.rate)));
    write_outputs(&config.output_dir, &outcome, config)?;
    Ok(outcome)
}
