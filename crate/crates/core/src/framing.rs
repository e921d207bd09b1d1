//! Fixed-length, non-overlapping framing.

use thiserror::Error;

use crate::scalar::Real;

pub const DEFAULT_FRAME_LEN: usize = 1024;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FramingError {
    #[error("cannot frame an empty signal")]
    EmptySignal,
    #[error("frame length must be positive")]
    ZeroFrameLen,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
}

/// One fixed-length segment of a signal. Samples past `valid_len` are padding.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T> {
    pub data: Vec<T>,
    pub index: usize,
    pub valid_len: usize,
}

impl<T: Real> Frame<T> {
    /// A fully valid frame wrapping `data`.
    pub fn new(data: Vec<T>) -> Self {
        let valid_len = data.len();
        Self {
            data,
            index: 0,
            valid_len,
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn valid(&self) -> &[T] {
        &self.data[..self.valid_len]
    }

    /// Same index and valid length, new contents.
    pub fn with_data(&self, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), self.data.len());
        Self {
            data,
            index: self.index,
            valid_len: self.valid_len,
        }
    }
}

/// Split `samples` into `ceil(n / frame_len)` frames, zero-padding the last.
pub fn split_frames<T: Real>(samples: &[T], frame_len: usize) -> Result<Vec<Frame<T>>, FramingError> {
    if frame_len == 0 {
        return Err(FramingError::ZeroFrameLen);
    }
    if samples.is_empty() {
        return Err(FramingError::EmptySignal);
    }
    Ok(samples
        .chunks(frame_len)
        .enumerate()
        .map(|(index, chunk)| {
            let mut data = chunk.to_vec();
            data.resize(frame_len, T::zero());
            Frame {
                data,
                index,
                valid_len: chunk.len(),
            }
        })
        .collect())
}

/// Concatenate the valid region of each frame. Frames must be ordered by
/// index starting at zero and their valid lengths must sum to `total_len`.
pub fn merge_frames<T: Real>(frames: &[Frame<T>], total_len: usize) -> Result<Vec<T>, FramingError> {
    let mut out = Vec::with_capacity(total_len);
    for (expected, frame) in frames.iter().enumerate() {
        if frame.index != expected {
            return Err(FramingError::LengthMismatch(format!(
                "frame at position {expected} has index {}",
                frame.index
            )));
        }
        if frame.valid_len > frame.data.len() {
            return Err(FramingError::LengthMismatch(format!(
                "frame {} valid_len {} exceeds data length {}",
                frame.index,
                frame.valid_len,
                frame.data.len()
            )));
        }
        out.extend_from_slice(frame.valid());
    }
    if out.len() != total_len {
        return Err(FramingError::LengthMismatch(format!(
            "frames hold {} valid samples, expected {total_len}",
            out.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ramp(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 + 1.0).collect()
    }

    #[test]
    fn exact_multiple() {
        let frames = split_frames(&ramp(2048), 1024).unwrap();
        assert_eq!(frames.len(), 2);
        assert!(frames.iter().all(|f| f.valid_len == 1024 && f.len() == 1024));
    }

    #[test]
    fn one_past_boundary() {
        let frames = split_frames(&ramp(1025), 1024).unwrap();
        assert_eq!(frames.len(), 2);
        assert_eq!(frames[1].valid_len, 1);
        assert_eq!(frames[1].data[0], 1025.0);
        assert!(frames[1].data[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tail_lengths() {
        let lens: Vec<_> = split_frames(&ramp(3000), 1024)
            .unwrap()
            .iter()
            .map(|f| f.valid_len)
            .collect();
        assert_eq!(lens, vec![1024, 1024, 3000 - 2048]);
    }

    #[test]
    fn errors() {
        assert_eq!(split_frames::<f64>(&[], 1024), Err(FramingError::EmptySignal));
        assert_eq!(split_frames(&[1.0f64], 0), Err(FramingError::ZeroFrameLen));
        let frames = split_frames(&ramp(10), 4).unwrap();
        assert!(matches!(merge_frames(&frames, 11), Err(FramingError::LengthMismatch(_))));
        assert!(matches!(merge_frames(&frames[1..], 6), Err(FramingError::LengthMismatch(_))));
    }

    #[test]
    fn single_short_frame() {
        let mut f = Frame::new(ramp(16));
        f.valid_len = 10;
        assert_eq!(merge_frames(&[f], 10).unwrap(), ramp(10));
    }

    proptest! {
        #[test]
        fn merge_inverts_split(n in 1usize..10_000, frame_len in prop::sample::select(vec![1usize, 7, 256, 1024])) {
            let x = ramp(n);
            let frames = split_frames(&x, frame_len).unwrap();
            prop_assert_eq!(frames.len(), n.div_ceil(frame_len));
            prop_assert_eq!(merge_frames(&frames, n).unwrap(), x);
        }
    }
}
