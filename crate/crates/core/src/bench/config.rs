//! Flat `key = value` configuration with dotted keys.
//!
//! ```text
//! # comment
//! dataset_dir = corpus/
//! rates = 0.1, 0.2, 0.5
//! methods = U-AF-FFT-Sp, R-IMATI
//! imat.alpha = 0.05
//! filter.fir_window = kaiser
//! ```

use std::path::PathBuf;

use thiserror::Error;

use super::method::Method;
use crate::filters::{FirWindow, IirDesign};
use crate::framing::DEFAULT_FRAME_LEN;
use crate::reconstruct::{ImatParams, SparseTransform, SplineBoundary};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("invalid value {value:?} for {key}: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOverrides {
    /// Fixed anti-aliasing cutoff. `None` means `rate / 2`.
    pub cutoff: Option<f64>,
    pub fir_window: FirWindow<f64>,
    pub fir_taps: usize,
    pub iir_design: IirDesign<f64>,
    pub iir_order: usize,
}

impl Default for FilterOverrides {
    fn default() -> Self {
        Self {
            cutoff: None,
            fir_window: FirWindow::Hamming,
            fir_taps: 63,
            iir_design: IirDesign::Butterworth,
            iir_order: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub dataset_dir: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub rates: Vec<f64>,
    pub methods: Vec<Method>,
    pub frame_len: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub filter: FilterOverrides,
    pub imat: ImatParams<f64>,
    pub spline: SplineBoundary,
    /// Timed repeats per measurement; the median is reported.
    pub timing_repeats: usize,
    /// Leave the timing column empty and skip timing in the summary.
    pub no_timing: bool,
    pub write_recovered: bool,
    /// External scorer, e.g. `pesq +16000 {ref} {deg}`.
    pub pesq_command: Option<String>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            dataset_dir: None,
            output_dir: PathBuf::from("bench_out"),
            rates: default_rates(),
            methods: Method::TABLE.to_vec(),
            frame_len: DEFAULT_FRAME_LEN,
            seed: 0,
            threads: None,
            filter: FilterOverrides::default(),
            imat: ImatParams::default(),
            spline: SplineBoundary::NotAKnot,
            timing_repeats: 1,
            no_timing: false,
            write_recovered: true,
            pesq_command: None,
        }
    }
}

/// `0.1, 0.2, ..., 0.9`.
pub fn default_rates() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn parse_num<N: std::str::FromStr>(key: &str, value: &str) -> Result<N, ConfigError>
where
    N::Err: std::fmt::Display,
{
    value.trim().parse().map_err(|e: N::Err| invalid(key, value, e.to_string()))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(invalid(key, value, "expected true/false")),
    }
}

pub fn parse_rates(value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num::<f64>("rates", s))
        .collect()
}

pub fn parse_methods(value: &str) -> Result<Vec<Method>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Method>().map_err(|e| invalid("methods", s, e.to_string())))
        .collect()
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut kaiser_beta = None;
        let mut ripple_db = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: n + 1 })?;
            let (key, value) = (key.trim(), value.trim());
            cfg.set(key, value, &mut kaiser_beta, &mut ripple_db)?;
        }
        if let Some(beta) = kaiser_beta {
            match cfg.filter.fir_window {
                FirWindow::Kaiser { .. } => cfg.filter.fir_window = FirWindow::Kaiser { beta },
                _ => return Err(ConfigError::Invalid("filter.kaiser_beta set but fir_window is not kaiser".into())),
            }
        }
        if let Some(r) = ripple_db {
            match cfg.filter.iir_design {
                IirDesign::Chebyshev1 { .. } => cfg.filter.iir_design = IirDesign::Chebyshev1 { ripple_db: r },
                _ => return Err(ConfigError::Invalid("filter.ripple_db set but iir_design is not chebyshev1".into())),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(
        &mut self,
        key: &str,
        value: &str,
        kaiser_beta: &mut Option<f64>,
        ripple_db: &mut Option<f64>,
    ) -> Result<(), ConfigError> {
        match key {
            "dataset_dir" => self.dataset_dir = Some(PathBuf::from(value)),
            "output_dir" => self.output_dir = PathBuf::from(value),
            "rates" => self.rates = parse_rates(value)?,
            "methods" => self.methods = parse_methods(value)?,
            "frame_len" => self.frame_len = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "threads" => self.threads = Some(parse_num(key, value)?),
            "timing.repeats" => self.timing_repeats = parse_num(key, value)?,
            "no_timing" => self.no_timing = parse_bool(key, value)?,
            "write_recovered" => self.write_recovered = parse_bool(key, value)?,
            "pesq_command" => self.pesq_command = Some(value.to_string()).filter(|s| !s.is_empty()),
            "filter.cutoff" => self.filter.cutoff = Some(parse_num(key, value)?),
            "filter.fir_taps" => self.filter.fir_taps = parse_num(key, value)?,
            "filter.iir_order" => self.filter.iir_order = parse_num(key, value)?,
            "filter.kaiser_beta" => *kaiser_beta = Some(parse_num(key, value)?),
            "filter.ripple_db" => *ripple_db = Some(parse_num(key, value)?),
            "filter.fir_window" => {
                self.filter.fir_window = match value.to_ascii_lowercase().as_str() {
                    "rectangular" => FirWindow::Rectangular,
                    "hamming" => FirWindow::Hamming,
                    "blackman" => FirWindow::Blackman,
                    "kaiser" => FirWindow::Kaiser { beta: 8.6 },
                    _ => return Err(invalid(key, value, "expected rectangular|hamming|blackman|kaiser")),
                }
            }
            "filter.iir_design" => {
                self.filter.iir_design = match value.to_ascii_lowercase().as_str() {
                    "butterworth" => IirDesign::Butterworth,
                    "chebyshev1" => IirDesign::Chebyshev1 { ripple_db: 1.0 },
                    _ => return Err(invalid(key, value, "expected butterworth|chebyshev1")),
                }
            }
            "imat.lambda" => self.imat.lambda = parse_num(key, value)?,
            "imat.alpha" => self.imat.alpha = parse_num(key, value)?,
            "imat.iterations" => self.imat.iterations = parse_num(key, value)?,
            "imat.beta" => {
                self.imat.beta = if value.eq_ignore_ascii_case("auto") {
                    None
                } else {
                    Some(parse_num(key, value)?)
                }
            }
            "imat.transform" => {
                self.imat.transform = match value.to_ascii_lowercase().as_str() {
                    "dft" => SparseTransform::Dft,
                    "dct" | "dct-ii" | "dct2" => SparseTransform::DctII,
                    _ => return Err(invalid(key, value, "expected dft|dct")),
                }
            }
            "spline.boundary" => {
                self.spline = match value.to_ascii_lowercase().as_str() {
                    "not-a-knot" | "not_a_knot" => SplineBoundary::NotAKnot,
                    "natural" => SplineBoundary::Natural,
                    _ => return Err(invalid(key, value, "expected not-a-knot|natural")),
                }
            }
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.rates.is_empty() {
            return Err(ConfigError::Invalid("rates must not be empty".into()));
        }
        if let Some(r) = self.rates.iter().find(|&&r| !(r > 0.0 && r <= 1.0)) {
            return Err(ConfigError::Invalid(format!("rate {r} outside (0, 1]")));
        }
        if self.methods.is_empty() {
            return Err(ConfigError::Invalid("methods must not be empty".into()));
        }
        if !self.frame_len.is_power_of_two() || self.frame_len < 4 {
            return Err(ConfigError::Invalid(format!(
                "frame_len {} must be a power of two >= 4",
                self.frame_len
            )));
        }
        if self.threads == Some(0) {
            return Err(ConfigError::Invalid("threads must be positive".into()));
        }
        if let Some(c) = self.filter.cutoff {
            if !(c > 0.0 && c <= 0.5) {
                return Err(ConfigError::Invalid(format!("filter.cutoff {c} outside (0, 0.5]")));
            }
        }
        if self.filter.fir_taps.is_multiple_of(2) {
            return Err(ConfigError::Invalid("filter.fir_taps must be odd".into()));
        }
        if self.filter.iir_order == 0 {
            return Err(ConfigError::Invalid("filter.iir_order must be positive".into()));
        }
        self.imat
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }

    /// Methods and rates in canonical order without duplicates.
    pub fn normalized_grid(&self) -> (Vec<Method>, Vec<f64>) {
        let mut methods = self.methods.clone();
        methods.sort();
        methods.dedup();
        let mut rates = self.rates.clone();
        rates.sort_by(f64::total_cmp);
        rates.dedup();
        (methods, rates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = BenchConfig::parse("").unwrap();
        assert_eq!(cfg.rates.len(), 9);
        assert_eq!(cfg.methods.len(), 6);
        assert_eq!(cfg.frame_len, 1024);
        assert_eq!(cfg.filter.fir_taps, 63);
        assert_eq!(cfg.filter.iir_order, 6);
        assert_eq!(cfg.imat.iterations, 300);
    }

    #[test]
    fn parses_dotted_keys() {
        let cfg = BenchConfig::parse(
            "# corpus\n\
             dataset_dir = data\n\
             rates = 0.25, 0.5\n\
             methods = R-IMAT,U-AF-IIR-Sp\n\
             seed = 7\n\
             imat.alpha = 0.1\n\
             imat.beta = 2.5\n\
             imat.transform = dct\n\
             filter.fir_window = kaiser   # inline comment\n\
             filter.kaiser_beta = 5\n\
             filter.iir_design = chebyshev1\n\
             filter.ripple_db = 0.5\n\
             spline.boundary = natural\n",
        )
        .unwrap();
        assert_eq!(cfg.dataset_dir, Some(PathBuf::from("data")));
        assert_eq!(cfg.rates, vec![0.25, 0.5]);
        assert_eq!(cfg.methods, vec![Method::RImat, Method::UAfIirSp]);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.imat.alpha, 0.1);
        assert_eq!(cfg.imat.beta, Some(2.5));
        assert_eq!(cfg.imat.transform, SparseTransform::DctII);
        assert_eq!(cfg.filter.fir_window, FirWindow::Kaiser { beta: 5.0 });
        assert_eq!(cfg.filter.iir_design, IirDesign::Chebyshev1 { ripple_db: 0.5 });
        assert_eq!(cfg.spline, SplineBoundary::Natural);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(BenchConfig::parse("rates"), Err(ConfigError::Syntax { line: 1 }));
        assert_eq!(BenchConfig::parse("colour = red"), Err(ConfigError::UnknownKey("colour".into())));
        assert!(matches!(BenchConfig::parse("rates = 0.5, 1.5"), Err(ConfigError::Invalid(_))));
        assert!(matches!(BenchConfig::parse("frame_len = 1000"), Err(ConfigError::Invalid(_))));
        assert!(matches!(BenchConfig::parse("seed = -1"), Err(ConfigError::InvalidValue { .. })));
        assert!(matches!(BenchConfig::parse("methods = FOO"), Err(ConfigError::InvalidValue { .. })));
        assert!(matches!(BenchConfig::parse("filter.kaiser_beta = 3"), Err(ConfigError::Invalid(_))));
        assert!(matches!(BenchConfig::parse("imat.lambda = 2"), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn grid_is_canonical() {
        let cfg = BenchConfig {
            rates: vec![0.5, 0.1, 0.5],
            methods: vec![Method::RSp, Method::UAfFftSp, Method::RSp],
            ..BenchConfig::default()
        };
        let (m, r) = cfg.normalized_grid();
        assert_eq!(m, vec![Method::UAfFftSp, Method::RSp]);
        assert_eq!(r, vec![0.1, 0.5]);
    }
}
