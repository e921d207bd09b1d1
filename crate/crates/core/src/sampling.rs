//! Uniform and random sampling masks.

use thiserror::Error;

use crate::framing::Frame;
use crate::rng;
use crate::scalar::Real;

#[derive(Debug, Error, PartialEq)]
pub enum SamplingError {
    #[error("sampling rate {0} outside (0, 1]")]
    InvalidRate(f64),
    #[error("mask would keep {kept} of {frame_len} samples; at least {needed} required")]
    TooFewSamples {
        kept: usize,
        frame_len: usize,
        needed: usize,
    },
    #[error("mask length {mask} does not match frame length {frame}")]
    LengthMismatch { mask: usize, frame: usize },
}

/// Retained sample positions within one frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleMask {
    frame_len: usize,
    kept: Vec<usize>,
    rate_bits: u64,
}

impl SampleMask {
    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    /// Sorted, duplicate-free retained indices.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// The nominal rate the mask was requested at.
    pub fn rate(&self) -> f64 {
        f64::from_bits(self.rate_bits)
    }

    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.kept.len() == self.frame_len
    }

    /// Boolean membership per index.
    pub fn indicator(&self) -> Vec<bool> {
        let mut out = vec![false; self.frame_len];
        for &i in &self.kept {
            out[i] = true;
        }
        out
    }
}

fn check_rate(rate: f64) -> Result<(), SamplingError> {
    if rate > 0.0 && rate <= 1.0 {
        Ok(())
    } else {
        Err(SamplingError::InvalidRate(rate))
    }
}

// Tolerance for products like 49 * (1/49) landing just under an integer.
const FLOOR_SLACK: f64 = 1e-9;

/// Index `i` is kept iff `floor((i + 1) r) > floor(i r)`.
///
/// For `r = 1/M` that is every M-th sample (`M-1, 2M-1, ...`); for rational
/// `r > 0.5` it gives a periodic quasi-uniform pattern. The mask always holds
/// `floor(frame_len * r)` indices.
pub fn uniform_mask(frame_len: usize, rate: f64) -> Result<SampleMask, SamplingError> {
    check_rate(rate)?;
    let level = |j: usize| (j as f64 * rate + FLOOR_SLACK).floor();
    let kept: Vec<usize> = (0..frame_len).filter(|&i| level(i + 1) > level(i)).collect();
    if kept.is_empty() {
        return Err(SamplingError::TooFewSamples {
            kept: 0,
            frame_len,
            needed: 1,
        });
    }
    Ok(SampleMask {
        frame_len,
        kept,
        rate_bits: rate.to_bits(),
    })
}

/// Exactly `round(frame_len * rate)` indices drawn without replacement.
///
/// The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`. A
/// partial Fisher-Yates shuffle over `0..frame_len` picks the positions, each
/// swap index drawn by rejection sampling on `next_u64`; the picked positions
/// are then sorted. The result depends only on `(frame_len, rate, seed)`.
pub fn random_mask(frame_len: usize, rate: f64, seed: u64) -> Result<SampleMask, SamplingError> {
    check_rate(rate)?;
    let count = (frame_len as f64 * rate).round() as usize;
    let count = count.min(frame_len);
    if count < 2 {
        return Err(SamplingError::TooFewSamples {
            kept: count,
            frame_len,
            needed: 2,
        });
    }
    let mut kept = rng::choose_distinct(&mut rng::seeded(seed), (0..frame_len).collect(), count);
    kept.sort_unstable();
    Ok(SampleMask {
        frame_len,
        kept,
        rate_bits: rate.to_bits(),
    })
}

/// Per-frame seed: the base seed XOR the frame index.
pub fn frame_seed(base: u64, frame_index: usize) -> u64 {
    base ^ frame_index as u64
}

/// Keep the masked samples, zero everything else.
pub fn apply_mask<T: Real>(frame: &Frame<T>, mask: &SampleMask) -> Result<Frame<T>, SamplingError> {
    if mask.frame_len != frame.len() {
        return Err(SamplingError::LengthMismatch {
            mask: mask.frame_len,
            frame: frame.len(),
        });
    }
    let mut data = vec![T::zero(); frame.len()];
    for &i in &mask.kept {
        data[i] = frame.data[i];
    }
    Ok(frame.with_data(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_half_rate() {
        assert_eq!(uniform_mask(8, 0.5).unwrap().kept(), &[1, 3, 5, 7]);
    }

    #[test]
    fn uniform_full_rate() {
        assert_eq!(uniform_mask(8, 1.0).unwrap().kept(), &[0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn uniform_three_quarters() {
        // floor rule: levels 0, .75, 1.5, 2.25, 3, 3.75, ... increase at i = 1, 2, 3 of every 4
        let m = uniform_mask(8, 0.75).unwrap();
        assert_eq!(m.kept(), &[1, 2, 3, 5, 6, 7]);
        assert_eq!(m.len(), 6);
    }

    #[test]
    fn uniform_reciprocal_rates_have_exact_gaps() {
        for m in 2..=64usize {
            let mask = uniform_mask(1024, 1.0 / m as f64).unwrap();
            assert!(mask.kept().windows(2).all(|w| w[1] - w[0] == m), "M = {m}");
            assert_eq!(mask.kept()[0], m - 1);
        }
    }

    #[test]
    fn invalid_rates() {
        assert_eq!(uniform_mask(8, 0.0), Err(SamplingError::InvalidRate(0.0)));
        assert_eq!(uniform_mask(8, 1.5), Err(SamplingError::InvalidRate(1.5)));
        assert!(matches!(uniform_mask(8, f64::NAN), Err(SamplingError::InvalidRate(_))));
        assert!(matches!(uniform_mask(8, 0.1), Err(SamplingError::TooFewSamples { .. })));
        assert!(matches!(random_mask(8, 0.1, 0), Err(SamplingError::TooFewSamples { kept: 1, .. })));
    }

    #[test]
    fn random_full_rate_keeps_everything() {
        for seed in [0, 1, 42, u64::MAX] {
            assert!(random_mask(100, 1.0, seed).unwrap().is_full());
        }
    }

    #[test]
    fn random_count_contract() {
        assert_eq!(random_mask(1024, 0.25, 3).unwrap().len(), 256);
    }

    #[test]
    fn random_golden_mask() {
        let m = random_mask(16, 0.5, 42).unwrap();
        assert_eq!(m.kept(), GOLDEN_SEED_42);
        assert_eq!(random_mask(16, 0.5, 42).unwrap(), m);
        assert_ne!(random_mask(16, 0.5, 43).unwrap().kept(), GOLDEN_SEED_42);
    }

    const GOLDEN_SEED_42: &[usize] = &[0, 1, 5, 7, 8, 10, 12, 14];

    #[test]
    fn apply_mask_zero_fills() {
        let frame = Frame::new((4..12).map(|v| v as f64).collect());
        let mask = SampleMask {
            frame_len: 8,
            kept: vec![1, 3],
            rate_bits: 0.25f64.to_bits(),
        };
        let out = apply_mask(&frame, &mask).unwrap();
        assert_eq!(out.data, vec![0.0, 5.0, 0.0, 7.0, 0.0, 0.0, 0.0, 0.0]);

        let full = uniform_mask(8, 1.0).unwrap();
        assert_eq!(apply_mask(&frame, &full).unwrap(), frame);
        assert!(matches!(
            apply_mask(&Frame::new(vec![0.0; 4]), &full),
            Err(SamplingError::LengthMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn uniform_count_within_one(rate in 0.01f64..=1.0) {
            let m = uniform_mask(1024, rate).unwrap();
            prop_assert!((m.len() as f64 - rate * 1024.0).abs() <= 1.0);
            prop_assert!(m.kept().windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn random_count_exact(rate in 0.01f64..=1.0, seed: u64) {
            let m = random_mask(1024, rate, seed).unwrap();
            prop_assert!((m.len() as f64 - rate * 1024.0).abs() <= 0.5);
            prop_assert!(m.kept().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(*m.kept().last().unwrap() < 1024);
            prop_assert_eq!(random_mask(1024, rate, seed).unwrap(), m);
        }

        #[test]
        fn dropped_samples_are_zero(seed: u64, rate in 0.05f64..1.0) {
            let frame = Frame::new((0..256).map(|i| 1.0 + i as f64).collect::<Vec<f64>>());
            let mask = random_mask(256, rate, seed).unwrap();
            let out = apply_mask(&frame, &mask).unwrap();
            let keep = mask.indicator();
            let dropped: f64 = out.data.iter().zip(&keep).filter(|(_, &k)| !k).map(|(v, _)| v.abs()).sum();
            prop_assert_eq!(dropped, 0.0);
        }
    }
}
