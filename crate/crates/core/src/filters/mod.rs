//! Anti-aliasing and recovery low-pass filters.
//!
//! Three realizations are available: an FFT brick-wall that zeroes every bin
//! above the cutoff, windowed-sinc linear-phase FIR designs and
//! bilinear-transformed Butterworth / Chebyshev-I IIR cascades.
//!
//! Cutoffs are normalized frequencies in cycles per sample, so `0.5` is
//! Nyquist.

mod fir;
mod iir;

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;
use crate::transform::{Fft, TransformError};

pub use fir::{design_fir, window_coefficient};
pub use iir::design_iir;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FilterError {
    #[error("frame length {0} is not a power of two")]
    NonPowerOfTwoLength(usize),
    #[error("invalid filter spec: {0}")]
    InvalidSpec(String),
}

impl From<TransformError> for FilterError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::NonPowerOfTwoLength(n) => FilterError::NonPowerOfTwoLength(n),
            TransformError::LengthMismatch { got, .. } => FilterError::NonPowerOfTwoLength(got),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FirWindow<T> {
    Rectangular,
    Hamming,
    Blackman,
    Kaiser { beta: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IirDesign<T> {
    Butterworth,
    Chebyshev1 { ripple_db: T },
}

impl<T: Real> FirWindow<T> {
    pub fn cast<U: Real>(self) -> FirWindow<U> {
        match self {
            FirWindow::Rectangular => FirWindow::Rectangular,
            FirWindow::Hamming => FirWindow::Hamming,
            FirWindow::Blackman => FirWindow::Blackman,
            FirWindow::Kaiser { beta } => FirWindow::Kaiser {
                beta: U::lit(beta.to_f64_lossy()),
            },
        }
    }
}

impl<T: Real> IirDesign<T> {
    pub fn cast<U: Real>(self) -> IirDesign<U> {
        match self {
            IirDesign::Butterworth => IirDesign::Butterworth,
            IirDesign::Chebyshev1 { ripple_db } => IirDesign::Chebyshev1 {
                ripple_db: U::lit(ripple_db.to_f64_lossy()),
            },
        }
    }
}

/// Declarative description of a low-pass filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterSpec<T> {
    FftBrickwall {
        cutoff: T,
    },
    Fir {
        cutoff: T,
        window: FirWindow<T>,
        taps: usize,
    },
    Iir {
        cutoff: T,
        design: IirDesign<T>,
        order: usize,
    },
}

impl<T: Real> FilterSpec<T> {
    pub fn cutoff(&self) -> T {
        match *self {
            FilterSpec::FftBrickwall { cutoff }
            | FilterSpec::Fir { cutoff, .. }
            | FilterSpec::Iir { cutoff, .. } => cutoff,
        }
    }

    /// Copy of this spec with a different cutoff.
    pub fn with_cutoff(mut self, new_cutoff: T) -> Self {
        match &mut self {
            FilterSpec::FftBrickwall { cutoff }
            | FilterSpec::Fir { cutoff, .. }
            | FilterSpec::Iir { cutoff, .. } => *cutoff = new_cutoff,
        }
        self
    }

    pub fn design(&self) -> Result<DesignedFilter<T>, FilterError> {
        match self {
            FilterSpec::FftBrickwall { cutoff } => {
                check_cutoff(*cutoff)?;
                Ok(DesignedFilter {
                    spec: *self,
                    realization: Realization::Brickwall,
                })
            }
            FilterSpec::Fir { .. } => design_fir(self),
            FilterSpec::Iir { .. } => design_iir(self),
        }
    }
}

pub(crate) fn check_cutoff<T: Real>(cutoff: T) -> Result<(), FilterError> {
    if !(cutoff > T::zero() && cutoff <= T::lit(0.5)) {
        return Err(FilterError::InvalidSpec(format!("cutoff {cutoff} outside (0, 0.5]")));
    }
    Ok(())
}

/// Second-order section `(b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)`.
///
/// A first-order section is stored with `b2 = a2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad<T> {
    pub b0: T,
    pub b1: T,
    pub b2: T,
    pub a1: T,
    pub a2: T,
}

impl<T: Real> Biquad<T> {
    /// Transfer function evaluated at normalized frequency `freq`.
    pub fn response(&self, freq: T) -> Complex<T> {
        let w = T::TAU() * freq;
        let z1 = Complex::from_polar(T::one(), -w);
        let z2 = z1 * z1;
        let num = z1 * self.b1 + z2 * self.b2 + self.b0;
        let den = z1 * self.a1 + z2 * self.a2 + T::one();
        num / den
    }

    /// Roots of `z^2 + a1 z + a2`.
    pub fn poles(&self) -> [Complex<T>; 2] {
        let half = self.a1 / T::lit(2.0);
        let disc = Complex::new(half * half - self.a2, T::zero()).sqrt();
        [-disc - half, disc - half]
    }

    pub fn is_stable(&self) -> bool {
        self.poles().iter().all(|p| p.norm() < T::one())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Realization<T> {
    Brickwall,
    Fir(Vec<T>),
    Iir(Vec<Biquad<T>>),
}

/// A spec together with its realized coefficients. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignedFilter<T> {
    pub spec: FilterSpec<T>,
    pub realization: Realization<T>,
}

impl<T: Real> DesignedFilter<T> {
    pub fn fir_coeffs(&self) -> Option<&[T]> {
        match &self.realization {
            Realization::Fir(h) => Some(h),
            _ => None,
        }
    }

    pub fn biquads(&self) -> Option<&[Biquad<T>]> {
        match &self.realization {
            Realization::Iir(s) => Some(s),
            _ => None,
        }
    }

    /// Frequency response at normalized frequency `freq`. The FIR response
    /// includes its linear-phase delay term.
    pub fn response(&self, freq: T) -> Complex<T> {
        match &self.realization {
            Realization::Brickwall => {
                let gain = if freq.abs() <= self.spec.cutoff() { T::one() } else { T::zero() };
                Complex::new(gain, T::zero())
            }
            Realization::Fir(h) => {
                let w = T::TAU() * freq;
                h.iter()
                    .enumerate()
                    .map(|(k, &c)| Complex::from_polar(c, -w * T::from_usize_lossy(k)))
                    .fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v)
            }
            Realization::Iir(sections) => sections
                .iter()
                .fold(Complex::new(T::one(), T::zero()), |acc, s| acc * s.response(freq)),
        }
    }

    pub fn magnitude(&self, freq: T) -> T {
        self.response(freq).norm()
    }
}

/// Ideal low-pass through the DFT: bins with `|f| > cutoff` are zeroed, the
/// bin exactly at the cutoff is kept.
pub fn fft_lowpass<T: Real>(x: &[T], cutoff: T) -> Result<Vec<T>, FilterError> {
    let n = x.len();
    let fft = Fft::new(n)?;
    check_cutoff(cutoff)?;
    if cutoff >= T::lit(0.5) {
        return Ok(x.to_vec());
    }
    let mut spec = fft.forward_real(x)?;
    let nf = T::from_usize_lossy(n);
    let limit = cutoff * nf + nf * T::epsilon() * T::lit(4.0);
    for (k, bin) in spec.iter_mut().enumerate() {
        let folded = k.min(n - k);
        if T::from_usize_lossy(folded) > limit {
            *bin = Complex::new(T::zero(), T::zero());
        }
    }
    fft.inverse(&mut spec)?;
    Ok(spec.into_iter().map(|c| c.re).collect())
}

/// Run a designed filter over a sample sequence, returning the same length.
///
/// FIR output is advanced by the group delay `(taps - 1) / 2` so it lines up
/// with the input; edges see zero padding. IIR is a single causal pass of
/// transposed direct-form II biquads.
pub fn apply_filter<T: Real>(x: &[T], filter: &DesignedFilter<T>) -> Result<Vec<T>, FilterError> {
    match &filter.realization {
        Realization::Brickwall => fft_lowpass(x, filter.spec.cutoff()),
        Realization::Fir(h) => Ok(fir_same(x, h)),
        Realization::Iir(sections) => Ok(iir_cascade(x, sections)),
    }
}

fn fir_same<T: Real>(x: &[T], h: &[T]) -> Vec<T> {
    let n = x.len() as isize;
    let delay = (h.len() / 2) as isize;
    (0..n)
        .map(|i| {
            // y[i] = sum_k h[k] x[i + delay - k]
            let mut acc = T::zero();
            for (k, &c) in h.iter().enumerate() {
                let j = i + delay - k as isize;
                if (0..n).contains(&j) {
                    acc += c * x[j as usize];
                }
            }
            acc
        })
        .collect()
}

fn iir_cascade<T: Real>(x: &[T], sections: &[Biquad<T>]) -> Vec<T> {
    let mut y = x.to_vec();
    for s in sections {
        let (mut z1, mut z2) = (T::zero(), T::zero());
        for v in y.iter_mut() {
            let input = *v;
            let out = s.b0 * input + z1;
            z1 = s.b1 * input - s.a1 * out + z2;
            z2 = s.b2 * input - s.a2 * out;
            *v = out;
        }
    }
    y
}
