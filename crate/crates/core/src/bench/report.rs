use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{io_err, BenchConfig, BenchError, BenchOutcome, BenchRecord, Method};
use crate::metrics::format_value;

/// Shortest decimal form of a rate for file names: `0.5`, `0.25`, `1`.
pub fn format_rate(rate: f64) -> String {
    let s = format!("{rate:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `file,method,rate,snr_db,elapsed_seconds,seed` with LF line endings and
/// six-decimal floats. With `no_timing` the elapsed column is left empty.
pub fn results_csv(records: &[BenchRecord], no_timing: bool) -> String {
    let mut out = String::from("file,method,rate,snr_db,elapsed_seconds,seed\n");
    for r in records {
        let elapsed = if no_timing { String::new() } else { format_value(r.elapsed_seconds) };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_field(&r.file),
            r.method.id(),
            format_value(r.rate),
            format_value(r.snr_db),
            elapsed,
            r.seed
        );
    }
    out
}

fn pesq_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("file,method,rate,pesq\n");
    for r in records {
        let score = r.pesq.map(format_value).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", csv_field(&r.file), r.method.id(), format_value(r.rate), score);
    }
    out
}

fn by_method_rate(
    records: &[BenchRecord],
) -> BTreeMap<Method, BTreeMap<u64, (f64, Vec<&BenchRecord>)>> {
    let mut map: BTreeMap<Method, BTreeMap<u64, (f64, Vec<&BenchRecord>)>> = BTreeMap::new();
    for r in records {
        // positive rates order the same as their bit patterns
        map.entry(r.method)
            .or_default()
            .entry(r.rate.to_bits())
            .or_insert_with(|| (r.rate, Vec::new()))
            .1
            .push(r);
    }
    map
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// `(rate, mean SNR over files)` for `method`, ascending in rate.
pub fn mean_snr_by_rate(records: &[BenchRecord], method: Method) -> Vec<(f64, f64)> {
    by_method_rate(records)
        .remove(&method)
        .map(|rates| {
            rates
                .into_values()
                .map(|(rate, rs)| (rate, mean(rs.iter().map(|r| r.snr_db))))
                .collect()
        })
        .unwrap_or_default()
}

fn mean_time_by_rate(records: &[BenchRecord], method: Method) -> Vec<(f64, f64)> {
    by_method_rate(records)
        .remove(&method)
        .map(|rates| {
            rates
                .into_values()
                .map(|(rate, rs)| (rate, mean(rs.iter().map(|r| r.elapsed_seconds))))
                .collect()
        })
        .unwrap_or_default()
}

/// Per method, mean elapsed time divided by the largest such mean.
pub fn normalized_times(records: &[BenchRecord]) -> Vec<(Method, f64)> {
    let means: Vec<(Method, f64)> = by_method_rate(records)
        .into_iter()
        .map(|(m, rates)| (m, mean(rates.values().flat_map(|(_, rs)| rs.iter().map(|r| r.elapsed_seconds)))))
        .collect();
    let max = means.iter().map(|(_, t)| *t).fold(0.0, f64::max);
    means
        .into_iter()
        .map(|(m, t)| (m, if max > 0.0 { t / max } else { 0.0 }))
        .collect()
}

/// Largest over smallest per-rate mean elapsed time for `method`.
pub fn timing_flatness(records: &[BenchRecord], method: Method) -> Option<f64> {
    let times = mean_time_by_rate(records, method);
    let max = times.iter().map(|(_, t)| *t).fold(f64::NEG_INFINITY, f64::max);
    let min = times.iter().map(|(_, t)| *t).fold(f64::INFINITY, f64::min);
    (times.len() >= 2 && min > 0.0).then(|| max / min)
}

/// Allowed spread of per-rate run time for the flatness observation.
pub const TIMING_FLATNESS_LIMIT: f64 = 3.0;

pub fn summary_text(outcome: &BenchOutcome, config: &BenchConfig) -> String {
    let records = &outcome.records;
    let mut files: Vec<&str> = records.iter().map(|r| r.file.as_str()).collect();
    files.dedup();
    let (methods, rates) = config.normalized_grid();

    let mut out = String::new();
    let _ = writeln!(out, "files: {}", files.len());
    let _ = writeln!(out, "records: {}", records.len());
    let _ = writeln!(out, "frame_len: {}", config.frame_len);
    let _ = writeln!(out, "seed: {}", config.seed);
    for (file, reason) in &outcome.skipped {
        let _ = writeln!(out, "skipped: {file}: {reason}");
    }

    let _ = writeln!(out, "\nmean SNR (dB) by rate");
    let _ = write!(out, "{:<12}", "method");
    for r in &rates {
        let _ = write!(out, " {:>10}", format_rate(*r));
    }
    out.push('\n');
    for &m in &methods {
        let _ = write!(out, "{:<12}", m.id());
        let series: BTreeMap<u64, f64> = mean_snr_by_rate(records, m)
            .into_iter()
            .map(|(r, s)| (r.to_bits(), s))
            .collect();
        for r in &rates {
            let cell = series.get(&r.to_bits()).map(|&v| {
                if v.is_finite() {
                    format!("{v:.2}")
                } else {
                    format_value(v)
                }
            });
            let _ = write!(out, " {:>10}", cell.unwrap_or_else(|| "-".into()));
        }
        out.push('\n');
    }

    if !config.no_timing {
        let _ = writeln!(out, "\nCPU time");
        let _ = writeln!(out, "{:<12} {:>14} {:>10} {:>10}", "method", "mean_seconds", "normalized", "max/min");
        let norm: BTreeMap<Method, f64> = normalized_times(records).into_iter().collect();
        for &m in &methods {
            let mean_t = mean(mean_time_by_rate(records, m).into_iter().map(|(_, t)| t));
            let flat = timing_flatness(records, m).map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:<12} {:>14.6} {:>10.4} {:>10}",
                m.id(),
                mean_t,
                norm.get(&m).copied().unwrap_or(0.0),
                flat
            );
        }
        if let Some(ratio) = timing_flatness(records, Method::UAfFft) {
            let verdict = if ratio <= TIMING_FLATNESS_LIMIT { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "\ntiming flatness (U-AF-FFT, max/min mean elapsed over rates): {ratio:.2} <= {TIMING_FLATNESS_LIMIT}: {verdict} (observational)"
            );
        }
    }
    out
}

/// Write `results.csv`, `plots/<method>.dat`, `summary.txt` and, when a
/// scorer is configured, `pesq.csv`.
pub fn write_outputs(dir: &Path, outcome: &BenchOutcome, config: &BenchConfig) -> Result<(), BenchError> {
    let write = |path: &Path, text: &str| fs::write(path, text).map_err(io_err(path));

    write(&dir.join("results.csv"), &results_csv(&outcome.records, config.no_timing))?;

    let plots = dir.join("plots");
    fs::create_dir_all(&plots).map_err(io_err(&plots))?;
    let (methods, _) = config.normalized_grid();
    for m in methods {
        let mut text = String::from("# rate snr_db\n");
        for (rate, snr) in mean_snr_by_rate(&outcome.records, m) {
            let _ = writeln!(text, "{} {}", format_value(rate), format_value(snr));
        }
        write(&plots.join(format!("{}.dat", m.id())), &text)?;
    }

    write(&dir.join("summary.txt"), &summary_text(outcome, config))?;
    if config.pesq_command.is_some() {
        write(&dir.join("pesq.csv"), &pesq_csv(&outcome.records))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(file: &str, method: Method, rate: f64, snr: f64, t: f64) -> BenchRecord {
        BenchRecord {
            file: file.into(),
            method,
            rate,
            snr_db: snr,
            elapsed_seconds: t,
            seed: 3,
            pesq: None,
        }
    }

    #[test]
    fn rate_formatting() {
        assert_eq!(format_rate(0.5), "0.5");
        assert_eq!(format_rate(1.0), "1");
        assert_eq!(format_rate(0.125), "0.125");
        assert_eq!(format_rate(0.1 + 0.2), "0.3");
    }

    #[test]
    fn csv_schema() {
        let rows = [
            rec("a.wav", Method::UAfFft, 1.0, f64::INFINITY, 0.25),
            rec("b,c.wav", Method::RSp, 0.5, 12.3456789, 0.0),
        ];
        assert_eq!(
            results_csv(&rows, false),
            "file,method,rate,snr_db,elapsed_seconds,seed\n\
             a.wav,U-AF-FFT,1.000000,inf,0.250000,3\n\
             \"b,c.wav\",R-Sp,0.500000,12.345679,0.000000,3\n"
        );
        assert!(results_csv(&rows, true).ends_with("12.345679,,3\n"));
    }

    #[test]
    fn chart_data() {
        let rows = [
            rec("a", Method::UAfFft, 0.5, 10.0, 1.0),
            rec("b", Method::UAfFft, 0.5, 20.0, 3.0),
            rec("a", Method::UAfFft, 0.2, 4.0, 2.0),
            rec("a", Method::RImati, 0.5, 1.0, 8.0),
        ];
        assert_eq!(mean_snr_by_rate(&rows, Method::UAfFft), vec![(0.2, 4.0), (0.5, 15.0)]);
        // U-AF-FFT mean elapsed 2.0, R-IMATI 8.0
        let norm = normalized_times(&rows);
        assert_eq!(norm, vec![(Method::UAfFft, 0.25), (Method::RImati, 1.0)]);
        assert!(norm.iter().all(|(_, v)| *v > 0.0 && *v <= 1.0));
        assert_eq!(timing_flatness(&rows, Method::UAfFft), Some(1.0));
        assert_eq!(timing_flatness(&rows, Method::RImati), None);
    }
}
