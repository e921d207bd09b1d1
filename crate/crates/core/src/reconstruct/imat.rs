//! Iterative recovery with an exponentially decaying hard threshold.
//!
//! Each iteration does a relaxed data-consistency step on the observed
//! samples followed by hard thresholding in a sparsifying transform:
//!
//! ```text
//! x <- x + lambda * P(y - x)
//! X  = F(x);  X[k] = 0 where |X[k]| < beta * exp(-alpha * k)
//! x  = F^-1(X)
//! ```
//!
//! `P` keeps only the observed indices (IMAT) or spreads the observed
//! residual over the whole frame by cubic-spline interpolation (IMATI).
//! The returned estimate has the observed samples written back in place.

use num_complex::Complex;

use super::spline::{spline_interpolate, SplineBoundary};
use super::ReconstructError;
use crate::sampling::SampleMask;
use crate::scalar::Real;
use crate::transform::{Dct, Fft};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SparseTransform {
    #[default]
    Dft,
    DctII,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImatParams<T> {
    /// Relaxation factor of the consistency step, in `(0, 2)`.
    pub lambda: T,
    /// Initial threshold. `None` uses the largest transform magnitude of the
    /// zero-filled observation.
    pub beta: Option<T>,
    /// Threshold decay per iteration.
    pub alpha: T,
    pub iterations: usize,
    pub transform: SparseTransform,
}

impl<T: Real> Default for ImatParams<T> {
    fn default() -> Self {
        Self {
            lambda: T::one(),
            beta: None,
            alpha: T::lit(0.05),
            iterations: 300,
            transform: SparseTransform::Dft,
        }
    }
}

impl<T: Real> ImatParams<T> {
    pub fn validate(&self) -> Result<(), ReconstructError> {
        let bad = |msg: String| Err(ReconstructError::InvalidParams(msg));
        if !(self.lambda > T::zero() && self.lambda < T::lit(2.0)) {
            return bad(format!("lambda {} outside (0, 2)", self.lambda));
        }
        if let Some(beta) = self.beta {
            if !beta.is_finite() || beta <= T::zero() {
                return bad(format!("beta {beta} must be positive"));
            }
        }
        if !self.alpha.is_finite() || self.alpha <= T::zero() {
            return bad(format!("alpha {} must be positive", self.alpha));
        }
        if self.iterations == 0 {
            return bad("iterations must be at least 1".into());
        }
        Ok(())
    }

    /// Threshold used on iteration `k` given the resolved initial threshold.
    pub fn threshold(&self, beta: T, k: usize) -> T {
        beta * (-self.alpha * T::from_usize_lossy(k)).exp()
    }
}

enum Basis<T> {
    Dft(Fft<T>),
    Dct(Dct<T>),
}

impl<T: Real> Basis<T> {
    fn new(kind: SparseTransform, len: usize) -> Result<Self, ReconstructError> {
        Ok(match kind {
            SparseTransform::Dft => Basis::Dft(Fft::new(len)?),
            SparseTransform::DctII => Basis::Dct(Dct::new(len)?),
        })
    }

    fn max_magnitude(&self, x: &[T]) -> Result<T, ReconstructError> {
        let max = match self {
            Basis::Dft(fft) => fft.forward_real(x)?.iter().map(|c| c.norm()).fold(T::zero(), T::max),
            Basis::Dct(dct) => dct.forward(x)?.iter().map(|c| c.abs()).fold(T::zero(), T::max),
        };
        Ok(max)
    }

    /// Zero every coefficient with magnitude below `threshold`, in place.
    fn hard_threshold(&self, x: &mut [T], threshold: T, scratch: &mut Vec<Complex<T>>) -> Result<(), ReconstructError> {
        match self {
            Basis::Dft(fft) => {
                scratch.clear();
                scratch.extend(x.iter().map(|&v| Complex::new(v, T::zero())));
                fft.forward(scratch)?;
                for c in scratch.iter_mut() {
                    if c.norm() < threshold {
                        *c = Complex::new(T::zero(), T::zero());
                    }
                }
                fft.inverse(scratch)?;
                for (v, c) in x.iter_mut().zip(scratch.iter()) {
                    *v = c.re;
                }
            }
            Basis::Dct(dct) => {
                let mut coeffs = dct.forward(x)?;
                for c in coeffs.iter_mut() {
                    if c.abs() < threshold {
                        *c = T::zero();
                    }
                }
                x.copy_from_slice(&dct.inverse(&coeffs)?);
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Consistency {
    Masked,
    Interpolated(SplineBoundary),
}

fn iterate<T: Real>(
    sampled: &[T],
    mask: &SampleMask,
    params: &ImatParams<T>,
    consistency: Consistency,
) -> Result<Vec<T>, ReconstructError> {
    params.validate()?;
    let n = sampled.len();
    if mask.frame_len() != n {
        return Err(ReconstructError::LengthMismatch {
            expected: mask.frame_len(),
            got: n,
        });
    }
    if mask.is_empty() {
        return Err(ReconstructError::EmptyMask);
    }
    let kept = mask.kept();
    let basis = Basis::new(params.transform, n)?;

    // observation restricted to the mask
    let mut observed = vec![T::zero(); n];
    for &i in kept {
        observed[i] = sampled[i];
    }
    let beta = match params.beta {
        Some(b) => b,
        None => basis.max_magnitude(&observed)?,
    };
    if beta == T::zero() {
        return Ok(observed);
    }

    let mut x = vec![T::zero(); n];
    let mut residual = vec![T::zero(); kept.len()];
    let mut scratch = Vec::with_capacity(n);
    for k in 0..params.iterations {
        for (r, &i) in residual.iter_mut().zip(kept) {
            *r = observed[i] - x[i];
        }
        match consistency {
            Consistency::Masked => {
                for (&r, &i) in residual.iter().zip(kept) {
                    x[i] += params.lambda * r;
                }
            }
            Consistency::Interpolated(boundary) => {
                let spread = spline_interpolate(kept, &residual, n, boundary)?;
                for (v, s) in x.iter_mut().zip(spread) {
                    *v += params.lambda * s;
                }
            }
        }
        basis.hard_threshold(&mut x, params.threshold(beta, k), &mut scratch)?;
    }
    for &i in kept {
        x[i] = observed[i];
    }
    Ok(x)
}

/// Recover a frame from the masked samples of `sampled`.
pub fn imat<T: Real>(sampled: &[T], mask: &SampleMask, params: &ImatParams<T>) -> Result<Vec<T>, ReconstructError> {
    iterate(sampled, mask, params, Consistency::Masked)
}

/// IMAT with the residual spread by cubic-spline interpolation each
/// iteration. Needs at least four observed samples.
pub fn imati<T: Real>(
    sampled: &[T],
    mask: &SampleMask,
    params: &ImatParams<T>,
    boundary: SplineBoundary,
) -> Result<Vec<T>, ReconstructError> {
    iterate(sampled, mask, params, Consistency::Interpolated(boundary))
}
