//! Frame recovery from sampled observations.

mod imat;
mod spline;

use num_complex::Complex;
use thiserror::Error;

use crate::filters::{fft_lowpass, FilterError};
use crate::rng;
use crate::sampling::SampleMask;
use crate::scalar::Real;
use crate::transform::{Fft, TransformError};

pub use imat::{imat, imati, ImatParams, SparseTransform};
pub use spline::{spline_interpolate, CubicSpline, SplineBoundary, SplineError};

#[derive(Debug, Error, PartialEq)]
pub enum ReconstructError {
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("invalid iteration parameters: {0}")]
    InvalidParams(String),
    #[error("sparsity {k} must be below half the length {n}")]
    InvalidSparsity { k: usize, n: usize },
    #[error("frame length {got} does not match mask length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("mask keeps no samples")]
    EmptyMask,
}

/// Classical low-pass recovery: scale the zero-filled frame by `1/rate` and
/// brick-wall it at `rate / 2`.
pub fn recover_lowpass<T: Real>(sampled: &[T], mask: &SampleMask) -> Result<Vec<T>, ReconstructError> {
    if mask.frame_len() != sampled.len() {
        return Err(ReconstructError::LengthMismatch {
            expected: mask.frame_len(),
            got: sampled.len(),
        });
    }
    let rate = T::lit(mask.rate());
    let mut zero_filled = vec![T::zero(); sampled.len()];
    for &i in mask.kept() {
        zero_filled[i] = sampled[i] / rate;
    }
    Ok(fft_lowpass(&zero_filled, rate * T::lit(0.5))?)
}

/// Spline recovery from the samples at the mask's kept positions.
pub fn recover_spline<T: Real>(
    sampled: &[T],
    mask: &SampleMask,
    boundary: SplineBoundary,
) -> Result<Vec<T>, ReconstructError> {
    if mask.frame_len() != sampled.len() {
        return Err(ReconstructError::LengthMismatch {
            expected: mask.frame_len(),
            got: sampled.len(),
        });
    }
    let values: Vec<T> = mask.kept().iter().map(|&i| sampled[i]).collect();
    Ok(spline_interpolate(mask.kept(), &values, sampled.len(), boundary)?)
}

/// Support and amplitudes behind a [`sparse_test_signal`].
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSpectrum {
    /// DFT bins in `1..n/2`, in draw order.
    pub bins: Vec<usize>,
    /// Time-domain cosine amplitude per bin.
    pub amplitudes: Vec<f64>,
}

/// Draw the support of a `k`-sparse real signal of length `n`.
///
/// Bins are drawn without replacement from `1..n/2` (no DC or Nyquist bin),
/// amplitudes uniformly from `[-1, -0.1] U [0.1, 1]`.
pub fn sparse_spectrum(n: usize, k: usize, seed: u64) -> Result<SparseSpectrum, ReconstructError> {
    if 2 * k >= n {
        return Err(ReconstructError::InvalidSparsity { k, n });
    }
    let mut rng = rng::seeded(seed);
    let bins = rng::choose_distinct(&mut rng, (1..n / 2).collect(), k);
    let amplitudes = bins
        .iter()
        .map(|_| {
            let magnitude = rng::uniform(&mut rng, 0.1, 1.0);
            if rng::below(&mut rng, 2) == 0 {
                magnitude
            } else {
                -magnitude
            }
        })
        .collect();
    Ok(SparseSpectrum { bins, amplitudes })
}

/// A real signal whose DFT has exactly `2k` nonzero bins: the conjugate
/// symmetric spectrum `X[p] = X[n-p] = a n / 2` over the drawn support, so
/// each bin contributes `a cos(2 pi p t / n)`.
pub fn sparse_test_signal<T: Real>(n: usize, k: usize, seed: u64) -> Result<Vec<T>, ReconstructError> {
    let support = sparse_spectrum(n, k, seed)?;
    let fft = Fft::<T>::new(n)?;
    let mut spectrum = vec![Complex::new(T::zero(), T::zero()); n];
    let half_n = T::from_usize_lossy(n) / T::lit(2.0);
    for (&p, &a) in support.bins.iter().zip(&support.amplitudes) {
        let v = Complex::new(T::lit(a) * half_n, T::zero());
        spectrum[p] = v;
        spectrum[n - p] = v;
    }
    fft.inverse(&mut spectrum)?;
    Ok(spectrum.into_iter().map(|c| c.re).collect())
}
