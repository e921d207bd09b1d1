//! One frame through one sampling/recovery scheme.

use thiserror::Error;

use super::config::BenchConfig;
use super::method::{AntiAlias, Method, Recovery};
use crate::filters::{apply_filter, FilterError, FilterSpec};
use crate::framing::Frame;
use crate::metrics::{energies, snr_from_energies, timed_median, EvalResult};
use crate::reconstruct::{imat, imati, recover_lowpass, recover_spline, ImatParams, ReconstructError};
use crate::sampling::{apply_mask, random_mask, uniform_mask, SampleMask, SamplingError};
use crate::scalar::Real;

#[derive(Debug, Error, PartialEq)]
pub enum StageError {
    #[error("anti-aliasing: {0}")]
    Filter(#[from] FilterError),
    #[error("sampling: {0}")]
    Sampling(#[from] SamplingError),
    #[error("recovery: {0}")]
    Reconstruct(#[from] ReconstructError),
}

/// Anti-aliasing filter a uniform scheme uses at `rate`, or `None` when the
/// cutoff reaches Nyquist and there is nothing to remove.
pub fn anti_alias_spec<T: Real>(method: Method, rate: f64, config: &BenchConfig) -> Option<FilterSpec<T>> {
    let cutoff = config.filter.cutoff.unwrap_or(rate * 0.5);
    if cutoff >= 0.5 {
        return None;
    }
    let cutoff = T::lit(cutoff);
    let f = &config.filter;
    Some(match method.anti_alias()? {
        AntiAlias::FftBrickwall => FilterSpec::FftBrickwall { cutoff },
        AntiAlias::Fir => FilterSpec::Fir {
            cutoff,
            window: f.fir_window.cast(),
            taps: f.fir_taps,
        },
        AntiAlias::Iir => FilterSpec::Iir {
            cutoff,
            design: f.iir_design.cast(),
            order: f.iir_order,
        },
    })
}

fn imat_params<T: Real>(config: &BenchConfig) -> ImatParams<T> {
    let p = &config.imat;
    ImatParams {
        lambda: T::lit(p.lambda),
        beta: p.beta.map(T::lit),
        alpha: T::lit(p.alpha),
        iterations: p.iterations,
        transform: p.transform,
    }
}

fn sample_and_recover<T: Real>(
    frame: &Frame<T>,
    method: Method,
    rate: f64,
    seed: u64,
    config: &BenchConfig,
) -> Result<Vec<T>, StageError> {
    let n = frame.len();
    let input = match anti_alias_spec::<T>(method, rate, config) {
        Some(spec) => frame.with_data(apply_filter(&frame.data, &spec.design()?)?),
        None => frame.clone(),
    };
    let mask: SampleMask = if method.is_uniform() {
        uniform_mask(n, rate)?
    } else {
        random_mask(n, rate, seed)?
    };
    let sampled = apply_mask(&input, &mask)?;
    let out = match method.recovery() {
        Recovery::Spline => recover_spline(&sampled.data, &mask, config.spline)?,
        Recovery::Lowpass => recover_lowpass(&sampled.data, &mask)?,
        Recovery::Imat => imat(&sampled.data, &mask, &imat_params(config))?,
        Recovery::Imati => imati(&sampled.data, &mask, &imat_params(config), config.spline)?,
    };
    Ok(out)
}

/// Run `method` on one frame at `rate`.
///
/// Uniform schemes filter, sample on the uniform grid and recover; random
/// schemes sample with the mask drawn from `seed` and recover. The SNR is
/// taken against the unfiltered input over the frame's valid samples. The
/// elapsed time covers filtering, sampling and recovery (median of
/// `config.timing_repeats` runs) but not the metric.
///
/// A frame whose valid region is silent scores `+inf` when reproduced
/// exactly and `-inf` otherwise.
pub fn run_pipeline<T: Real>(
    frame: &Frame<T>,
    method: Method,
    rate: f64,
    seed: u64,
    config: &BenchConfig,
) -> Result<(Frame<T>, EvalResult), StageError> {
    let (out, elapsed) = if config.no_timing {
        (sample_and_recover(frame, method, rate, seed, config), 0.0)
    } else {
        timed_median(config.timing_repeats, || sample_and_recover(frame, method, rate, seed, config))
    };
    let out = frame.with_data(out?);
    let (signal, error) = energies(frame.valid(), out.valid()).expect("frames share a length");
    let snr = if signal == T::zero() && error != T::zero() {
        f64::NEG_INFINITY
    } else {
        snr_from_energies(signal, error).to_f64_lossy()
    };
    Ok((
        out,
        EvalResult {
            snr_db: snr,
            elapsed_seconds: elapsed,
            samples_evaluated: frame.valid_len,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::sparse_test_signal;
    use crate::signals::{tone_sum, Tone};

    fn config() -> BenchConfig {
        BenchConfig::default()
    }

    #[test]
    fn full_rate_fft_scheme_is_identity() {
        let frame = Frame::new(crate::signals::lowpass_test_signal::<f64>(1024, 4, 0.4, 3));
        for m in [Method::UAfFft, Method::UAfFftSp, Method::RImat, Method::RImati] {
            let (out, eval) = run_pipeline(&frame, m, 1.0, 0, &config()).unwrap();
            if m == Method::UAfFft || m == Method::RImat || m == Method::RImati {
                assert_eq!(out, frame, "{m}");
                assert_eq!(eval.snr_db, f64::INFINITY, "{m}");
            } else {
                assert!(eval.snr_db > 200.0, "{m}");
            }
        }
    }

    #[test]
    fn fft_spline_scheme_on_in_band_tone() {
        // on a bin centre, so the brick-wall passes it untouched
        let frame = Frame::new(tone_sum::<f64>(1024, &[Tone { freq: 102.0 / 1024.0, amplitude: 0.8, phase: 0.3 }]));
        let (_, eval) = run_pipeline(&frame, Method::UAfFftSp, 0.5, 0, &config()).unwrap();
        assert!(eval.snr_db >= 30.0, "{}", eval.snr_db);
    }

    #[test]
    fn random_spline_fails_on_sparse_signal() {
        let frame = Frame::new(sparse_test_signal::<f64>(1024, 64, 7).unwrap());
        let (_, eval) = run_pipeline(&frame, Method::RSp, 0.5, 7, &config()).unwrap();
        assert!(eval.snr_db < 5.0, "{}", eval.snr_db);
    }

    #[test]
    fn snr_ignores_padding() {
        let mut frame = Frame::new(tone_sum::<f64>(256, &[Tone { freq: 0.05, amplitude: 0.5, phase: 0.0 }]));
        for v in &mut frame.data[200..] {
            *v = 0.0;
        }
        frame.valid_len = 200;
        let (_, eval) = run_pipeline(&frame, Method::UAfFirSp, 0.5, 0, &config()).unwrap();
        assert_eq!(eval.samples_evaluated, 200);
        assert!(eval.snr_db.is_finite());
    }

    #[test]
    fn silent_frame_conventions() {
        let frame = Frame::new(vec![0.0f64; 64]);
        let cfg = BenchConfig { frame_len: 64, ..config() };
        let (_, eval) = run_pipeline(&frame, Method::UAfFft, 0.5, 0, &cfg).unwrap();
        assert_eq!(eval.snr_db, f64::INFINITY);
    }

    #[test]
    fn stage_errors_propagate() {
        let frame = Frame::new(vec![0.5f64; 1000]);
        assert!(matches!(
            run_pipeline(&frame, Method::UAfFft, 0.5, 0, &config()),
            Err(StageError::Filter(FilterError::NonPowerOfTwoLength(1000)))
        ));
        let frame = Frame::new(vec![0.5f64; 16]);
        assert!(matches!(
            run_pipeline(&frame, Method::RSp, 0.05, 0, &config()),
            Err(StageError::Sampling(SamplingError::TooFewSamples { .. }))
        ));
    }

    #[test]
    fn no_timing_reports_zero() {
        let frame = Frame::new(vec![0.25f64; 64]);
        let cfg = BenchConfig { no_timing: true, ..config() };
        let (_, eval) = run_pipeline(&frame, Method::RSp, 0.5, 1, &cfg).unwrap();
        assert_eq!(eval.elapsed_seconds, 0.0);
    }
}
