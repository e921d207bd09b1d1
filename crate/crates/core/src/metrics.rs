//! Objective evaluation: SNR and wall-clock timing.

use std::time::Instant;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("reference has {reference} samples, estimate has {estimate}")]
    LengthMismatch { reference: usize, estimate: usize },
    #[error("reference signal is all zero")]
    ZeroReference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    /// Decibels; `+inf` when the estimate is exact.
    pub snr_db: f64,
    pub elapsed_seconds: f64,
    pub samples_evaluated: usize,
}

/// `20 log10(||x|| / ||x - x_hat||)`, or `+inf` when the two are identical.
pub fn snr_db<T: Real>(reference: &[T], estimate: &[T]) -> Result<T, MetricsError> {
    let (signal, error) = energies(reference, estimate)?;
    if signal == T::zero() {
        return Err(MetricsError::ZeroReference);
    }
    Ok(snr_from_energies(signal, error))
}

/// `(||x||^2, ||x - x_hat||^2)`.
pub fn energies<T: Real>(reference: &[T], estimate: &[T]) -> Result<(T, T), MetricsError> {
    if reference.len() != estimate.len() {
        return Err(MetricsError::LengthMismatch {
            reference: reference.len(),
            estimate: estimate.len(),
        });
    }
    Ok(reference
        .iter()
        .zip(estimate)
        .fold((T::zero(), T::zero()), |(s, e), (&x, &y)| (s + x * x, e + (x - y) * (x - y))))
}

/// SNR from accumulated squared norms, so per-frame sums can be combined.
pub fn snr_from_energies<T: Real>(signal: T, error: T) -> T {
    if error == T::zero() {
        T::infinity()
    } else {
        T::lit(10.0) * (signal / error).log10()
    }
}

/// Fixed-precision rendering used in reports: six decimals, `inf`/`-inf`.
pub fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// Run `action` once under a monotonic clock.
pub fn timed<R>(action: impl FnOnce() -> R) -> (R, f64) {
    let start = Instant::now();
    let result = action();
    (result, start.elapsed().as_secs_f64())
}

/// Run `action` `repeats` times (at least once) and report the last result
/// with the median elapsed time.
pub fn timed_median<R>(repeats: usize, mut action: impl FnMut() -> R) -> (R, f64) {
    let repeats = repeats.max(1);
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let (r, t) = timed(&mut action);
        times.push(t);
        last = Some(r);
    }
    (last.expect("at least one repeat"), median(&mut times))
}

/// Median of a non-empty slice (mean of the middle pair for even lengths).
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_estimate_is_infinite() {
        let x = [0.3, -1.0, 2.0];
        assert_eq!(snr_db(&x, &x).unwrap(), f64::INFINITY);
        assert_eq!(format_value(f64::INFINITY), "inf");
    }

    #[test]
    fn zero_estimate_is_zero_db() {
        let x = [0.3f64, -1.0, 2.0];
        assert!(snr_db(&x, &[0.0; 3]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn hand_evaluated() {
        let snr: f64 = snr_db(&[1.0, 0.0], &[0.9, 0.0]).unwrap();
        assert!((snr - 20.0).abs() < 1e-9);
        assert_eq!(format_value(snr), "20.000000");
    }

    #[test]
    fn errors() {
        assert_eq!(
            snr_db(&[1.0f64], &[1.0, 2.0]),
            Err(MetricsError::LengthMismatch { reference: 1, estimate: 2 })
        );
        assert_eq!(snr_db(&[0.0f64; 4], &[1.0; 4]), Err(MetricsError::ZeroReference));
    }

    #[test]
    fn timing_is_transparent() {
        let (v, t) = timed(|| ());
        assert_eq!(v, ());
        assert!((0.0..0.01).contains(&t));
        let f = || (0..1000u64).map(|i| i * i).sum::<u64>();
        assert_eq!(timed(f).0, f());
    }

    #[test]
    fn median_of_repeats() {
        let mut calls = 0;
        let (r, t) = timed_median(5, || {
            calls += 1;
            calls
        });
        assert_eq!(calls, 5);
        assert_eq!(r, 5);
        assert!(t >= 0.0);
        assert_eq!(median(&mut [5.0, 1.0, 3.0, 2.0, 4.0]), 3.0);
        assert_eq!(median(&mut [4.0, 1.0]), 2.5);
    }

    proptest! {
        #[test]
        fn scale_invariant(
            x in proptest::collection::vec(-1.0f64..1.0, 2..64),
            noise in proptest::collection::vec(-0.1f64..0.1, 64),
            c in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
        ) {
            prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
            let est: Vec<f64> = x.iter().zip(&noise).map(|(a, b)| a + b).collect();
            prop_assume!(x != est);
            let base = snr_db(&x, &est).unwrap();
            let cx: Vec<f64> = x.iter().map(|v| v * c).collect();
            let ce: Vec<f64> = est.iter().map(|v| v * c).collect();
            prop_assert!((snr_db(&cx, &ce).unwrap() - base).abs() < 1e-9);
        }

        #[test]
        fn frame_energies_add_up(
            x in proptest::collection::vec(-1.0f64..1.0, 1..3000),
            seed in proptest::collection::vec(-0.2f64..0.2, 3000),
        ) {
            use crate::framing::split_frames;
            let est: Vec<f64> = x.iter().zip(&seed).map(|(a, b)| a + b).collect();
            prop_assume!(x.iter().any(|v| *v != 0.0));
            let fx = split_frames(&x, 1024).unwrap();
            let fe = split_frames(&est, 1024).unwrap();
            let (mut s, mut e) = (0.0, 0.0);
            for (a, b) in fx.iter().zip(&fe) {
                let (si, ei) = energies(a.valid(), b.valid()).unwrap();
                s += si;
                e += ei;
            }
            let whole = snr_db(&x, &est).unwrap();
            prop_assert!((snr_from_energies(s, e) - whole).abs() < 1e-9);
        }
    }
}
