//! Radix-2 FFT and an FFT-backed orthonormal DCT-II.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("transform length {0} is not a power of two")]
    NonPowerOfTwoLength(usize),
    #[error("buffer length {got} does not match transform length {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Iterative in-place radix-2 decimation-in-time FFT of a fixed length.
#[derive(Debug, Clone)]
pub struct Fft<T> {
    len: usize,
    twiddles: Vec<Complex<T>>,
    bitrev: Vec<usize>,
}

impl<T: Real> Fft<T> {
    pub fn new(len: usize) -> Result<Self, TransformError> {
        if len == 0 || !len.is_power_of_two() {
            return Err(TransformError::NonPowerOfTwoLength(len));
        }
        let bits = len.trailing_zeros();
        let bitrev = (0..len)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        let twiddles = (0..len / 2)
            .map(|k| {
                let angle = -2.0 * std::f64::consts::PI * k as f64 / len as f64;
                Complex::new(T::lit(angle.cos()), T::lit(angle.sin()))
            })
            .collect();
        Ok(Self { len, twiddles, bitrev })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalized forward transform, `X[k] = sum x[n] e^{-2 pi i k n / N}`.
    pub fn forward(&self, buf: &mut [Complex<T>]) -> Result<(), TransformError> {
        self.process(buf, false)
    }

    /// Inverse transform including the `1/N` factor.
    pub fn inverse(&self, buf: &mut [Complex<T>]) -> Result<(), TransformError> {
        self.process(buf, true)?;
        let scale = T::one() / T::from_usize_lossy(self.len);
        for v in buf.iter_mut() {
            *v = *v * scale;
        }
        Ok(())
    }

    /// Forward transform of a real sequence.
    pub fn forward_real(&self, x: &[T]) -> Result<Vec<Complex<T>>, TransformError> {
        let mut buf: Vec<_> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.forward(&mut buf)?;
        Ok(buf)
    }

    fn process(&self, buf: &mut [Complex<T>], inverse: bool) -> Result<(), TransformError> {
        let n = self.len;
        if buf.len() != n {
            return Err(TransformError::LengthMismatch {
                expected: n,
                got: buf.len(),
            });
        }
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for j in 0..half {
                    let w = self.twiddles[j * stride];
                    let w = if inverse { w.conj() } else { w };
                    let a = buf[start + j];
                    let b = buf[start + j + half] * w;
                    buf[start + j] = a + b;
                    buf[start + j + half] = a - b;
                }
            }
            size *= 2;
        }
        Ok(())
    }
}

/// Orthonormal DCT-II and its inverse (DCT-III), computed through a
/// zero-padded FFT of twice the length.
#[derive(Debug, Clone)]
pub struct Dct<T> {
    len: usize,
    fft: Fft<T>,
    // e^{-i pi k / 2N}
    phase: Vec<Complex<T>>,
    scale: Vec<T>,
}

impl<T: Real> Dct<T> {
    pub fn new(len: usize) -> Result<Self, TransformError> {
        if len == 0 || !len.is_power_of_two() {
            return Err(TransformError::NonPowerOfTwoLength(len));
        }
        let fft = Fft::new(2 * len)?;
        let phase = (0..len)
            .map(|k| {
                let angle = -std::f64::consts::PI * k as f64 / (2 * len) as f64;
                Complex::new(T::lit(angle.cos()), T::lit(angle.sin()))
            })
            .collect();
        let s0 = T::lit((1.0 / len as f64).sqrt());
        let sk = T::lit((2.0 / len as f64).sqrt());
        let scale = (0..len).map(|k| if k == 0 { s0 } else { sk }).collect();
        Ok(Self {
            len,
            fft,
            phase,
            scale,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, x: &[T]) -> Result<Vec<T>, TransformError> {
        self.check(x.len())?;
        let mut buf = vec![Complex::new(T::zero(), T::zero()); 2 * self.len];
        for (b, &v) in buf.iter_mut().zip(x) {
            b.re = v;
        }
        self.fft.forward(&mut buf)?;
        Ok((0..self.len)
            .map(|k| self.scale[k] * (buf[k] * self.phase[k]).re)
            .collect())
    }

    pub fn inverse(&self, coeffs: &[T]) -> Result<Vec<T>, TransformError> {
        self.check(coeffs.len())?;
        let mut buf = vec![Complex::new(T::zero(), T::zero()); 2 * self.len];
        for k in 0..self.len {
            buf[k] = self.phase[k].conj() * (self.scale[k] * coeffs[k]);
        }
        // x[n] = Re sum_k V[k] e^{+2 pi i k n / 2N}
        self.fft.inverse(&mut buf)?;
        let two_n = T::from_usize_lossy(2 * self.len);
        Ok(buf[..self.len].iter().map(|v| v.re * two_n).collect())
    }

    fn check(&self, got: usize) -> Result<(), TransformError> {
        if got != self.len {
            return Err(TransformError::LengthMismatch {
                expected: self.len,
                got,
            });
        }
        Ok(())
    }
}
