//! RIFF/WAVE PCM decoding and encoding.
//!
//! Decoding accepts 16- and 24-bit integer PCM with any channel count and
//! downmixes to mono by the arithmetic mean of the channels. Encoding always
//! emits the canonical 44-byte mono 16-bit header.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::scalar::Real;

const PCM_FORMAT_TAG: u16 = 1;
const HEADER_LEN: usize = 44;

#[derive(Debug, Error)]
pub enum WavError {
    #[error("malformed RIFF/WAVE container: {0}")]
    MalformedRiff(String),
    #[error("unsupported codec: format tag {0} (only PCM tag 1 is supported)")]
    UnsupportedCodec(u16),
    #[error("unsupported bit depth: {0}")]
    UnsupportedDepth(u16),
    #[error("sample {index} is not finite")]
    NonFiniteSample { index: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Decoded mono signal together with its source metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioSignal<T> {
    pub samples: Vec<T>,
    pub sample_rate_hz: u32,
    pub source_bit_depth: u16,
    pub source_channels: u16,
}

impl<T: Real> AudioSignal<T> {
    /// Mono signal as if it had been decoded from 16-bit PCM.
    pub fn mono(samples: Vec<T>, sample_rate_hz: u32) -> Self {
        Self {
            samples,
            sample_rate_hz,
            source_bit_depth: 16,
            source_channels: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
struct FmtChunk {
    format_tag: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn malformed(msg: impl Into<String>) -> WavError {
    WavError::MalformedRiff(msg.into())
}

fn parse_fmt(body: &[u8]) -> Result<FmtChunk, WavError> {
    if body.len() < 16 {
        return Err(malformed(format!("fmt chunk too short ({} bytes)", body.len())));
    }
    Ok(FmtChunk {
        format_tag: u16_at(body, 0),
        channels: u16_at(body, 2),
        sample_rate: u32_at(body, 4),
        bits_per_sample: u16_at(body, 14),
    })
}

/// Decode a RIFF/WAVE byte stream into a mono signal.
///
/// 16-bit samples map to `s / 32768`, 24-bit samples to `s / 8388608`.
/// Unknown chunks (`LIST`, `fact`, ...) are skipped. A chunk whose declared
/// size runs past the end of the buffer is rejected as malformed.
pub fn read_wav<T: Real>(bytes: &[u8]) -> Result<AudioSignal<T>, WavError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" {
        return Err(malformed("missing RIFF signature"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(malformed("missing WAVE form type"));
    }

    let mut fmt: Option<FmtChunk> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let start = pos + 8;
        let end = start
            .checked_add(size)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| {
                malformed(format!(
                    "chunk {:?} declares {} bytes but only {} remain",
                    String::from_utf8_lossy(id),
                    size,
                    bytes.len() - start
                ))
            })?;
        let body = &bytes[start..end];
        match id {
            b"fmt " => fmt = Some(parse_fmt(body)?),
            b"data" => data = Some(body),
            _ => {}
        }
        // chunks are word aligned
        pos = end + (size & 1);
    }

    let fmt = fmt.ok_or_else(|| malformed("missing fmt chunk"))?;
    let data = data.ok_or_else(|| malformed("missing data chunk"))?;

    if fmt.format_tag != PCM_FORMAT_TAG {
        return Err(WavError::UnsupportedCodec(fmt.format_tag));
    }
    let (width, scale) = match fmt.bits_per_sample {
        16 => (2usize, 32_768.0),
        24 => (3usize, 8_388_608.0),
        other => return Err(WavError::UnsupportedDepth(other)),
    };
    if fmt.channels == 0 {
        return Err(malformed("zero channels"));
    }
    if fmt.sample_rate == 0 {
        return Err(malformed("zero sample rate"));
    }

    let channels = fmt.channels as usize;
    let block = width * channels;
    let frames = data.len() / block;
    if frames == 0 {
        return Err(malformed("data chunk holds no complete sample frame"));
    }

    let denom = T::lit(scale * channels as f64);
    let samples = data
        .chunks_exact(block)
        .map(|frame| {
            let sum: i64 = frame
                .chunks_exact(width)
                .map(|s| match width {
                    2 => i16::from_le_bytes([s[0], s[1]]) as i64,
                    _ => (i32::from_le_bytes([0, s[0], s[1], s[2]]) >> 8) as i64,
                })
                .sum();
            T::lit(sum as f64) / denom
        })
        .collect();

    Ok(AudioSignal {
        samples,
        sample_rate_hz: fmt.sample_rate,
        source_bit_depth: fmt.bits_per_sample,
        source_channels: fmt.channels,
    })
}

/// Quantize one amplitude to a 16-bit PCM code.
///
/// Amplitudes are clamped to `[-1, 1]` and scaled by 32768 with the positive
/// end saturating at 32767, so every level produced by [`read_wav`] maps back
/// to its original code.
pub fn quantize_i16<T: Real>(sample: T) -> i16 {
    let clamped = sample.max(-T::one()).min(T::one());
    let scaled = (clamped * T::lit(32_768.0)).round();
    scaled.to_f64_lossy().clamp(-32_768.0, 32_767.0) as i16
}

/// Encode a signal as canonical mono PCM. Only a bit depth of 16 is accepted.
pub fn write_wav<T: Real>(signal: &AudioSignal<T>, bit_depth: u16) -> Result<Vec<u8>, WavError> {
    if bit_depth != 16 {
        return Err(WavError::UnsupportedDepth(bit_depth));
    }
    if let Some(index) = signal.samples.iter().position(|s| !s.is_finite()) {
        return Err(WavError::NonFiniteSample { index });
    }

    let data_len = signal.samples.len() * 2;
    let data_len_u32 = u32::try_from(data_len)
        .ok()
        .filter(|l| l.checked_add(36).is_some())
        .ok_or_else(|| malformed("signal too long for a RIFF container"))?;
    let rate = signal.sample_rate_hz;

    let mut out = Vec::with_capacity(HEADER_LEN + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len_u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT_TAG.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate.wrapping_mul(2)).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len_u32.to_le_bytes());
    for &s in &signal.samples {
        out.extend_from_slice(&quantize_i16(s).to_le_bytes());
    }
    Ok(out)
}

pub fn read_wav_file<T: Real>(path: impl AsRef<Path>) -> Result<AudioSignal<T>, WavError> {
    read_wav(&fs::read(path)?)
}

pub fn write_wav_file<T: Real>(path: impl AsRef<Path>, signal: &AudioSignal<T>) -> Result<(), WavError> {
    fs::write(path, write_wav(signal, 16)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pcm16(channels: u16, rate: u32, codes: &[i16]) -> Vec<u8> {
        let data_len = (codes.len() * 2) as u32;
        let mut b = Vec::new();
        b.extend_from_slice(b"RIFF");
        b.extend_from_slice(&(36 + data_len).to_le_bytes());
        b.extend_from_slice(b"WAVE");
        b.extend_from_slice(b"fmt ");
        b.extend_from_slice(&16u32.to_le_bytes());
        b.extend_from_slice(&1u16.to_le_bytes());
        b.extend_from_slice(&channels.to_le_bytes());
        b.extend_from_slice(&rate.to_le_bytes());
        b.extend_from_slice(&(rate * 2 * channels as u32).to_le_bytes());
        b.extend_from_slice(&(2 * channels).to_le_bytes());
        b.extend_from_slice(&16u16.to_le_bytes());
        b.extend_from_slice(b"data");
        b.extend_from_slice(&data_len.to_le_bytes());
        for c in codes {
            b.extend_from_slice(&c.to_le_bytes());
        }
        b
    }

    #[test]
    fn zero_sample() {
        let bytes = pcm16(1, 44_100, &[0]);
        assert_eq!(bytes.len(), 46);
        let sig: AudioSignal<f64> = read_wav(&bytes).unwrap();
        assert_eq!(sig.samples, vec![0.0]);
        assert_eq!(sig.sample_rate_hz, 44_100);
        assert_eq!(sig.source_bit_depth, 16);
    }

    #[test]
    fn full_scale_negative() {
        let sig: AudioSignal<f64> = read_wav(&pcm16(1, 48_000, &[i16::MIN])).unwrap();
        assert_eq!(sig.samples, vec![-1.0]);
    }

    #[test]
    fn stereo_downmix_is_mean() {
        let sig: AudioSignal<f64> = read_wav(&pcm16(2, 44_100, &[16_384, -16_384, 16_384, 0])).unwrap();
        assert_eq!(sig.samples, vec![0.0, 0.25]);
        assert_eq!(sig.source_channels, 2);
    }

    #[test]
    fn decodes_24_bit() {
        let mut b = pcm16(1, 8_000, &[]);
        // patch fmt to 24 bit and append two samples: -8388608 and 4194304
        b[34..36].copy_from_slice(&24u16.to_le_bytes());
        b[32..34].copy_from_slice(&3u16.to_le_bytes());
        b[40..44].copy_from_slice(&6u32.to_le_bytes());
        b.extend_from_slice(&[0x00, 0x00, 0x80, 0x00, 0x00, 0x40]);
        let sig: AudioSignal<f64> = read_wav(&b).unwrap();
        assert_eq!(sig.samples, vec![-1.0, 0.5]);
        assert_eq!(sig.source_bit_depth, 24);
    }

    #[test]
    fn skips_metadata_chunks() {
        let plain = pcm16(1, 44_100, &[100, -100]);
        let mut b = plain[..36].to_vec();
        b.extend_from_slice(b"LIST");
        b.extend_from_slice(&3u32.to_le_bytes());
        b.extend_from_slice(b"abc\0"); // odd size plus pad byte
        b.extend_from_slice(&plain[36..]);
        let a: AudioSignal<f64> = read_wav(&plain).unwrap();
        let c: AudioSignal<f64> = read_wav(&b).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn rejects_bad_containers() {
        assert!(matches!(read_wav::<f64>(b"RIFX"), Err(WavError::MalformedRiff(_))));
        let mut b = pcm16(1, 44_100, &[1]);
        b[8..12].copy_from_slice(b"AVI ");
        assert!(matches!(read_wav::<f64>(&b), Err(WavError::MalformedRiff(_))));

        let mut b = pcm16(1, 44_100, &[1]);
        b[20..22].copy_from_slice(&3u16.to_le_bytes());
        assert!(matches!(read_wav::<f64>(&b), Err(WavError::UnsupportedCodec(3))));

        let mut b = pcm16(1, 44_100, &[1]);
        b[34..36].copy_from_slice(&8u16.to_le_bytes());
        assert!(matches!(read_wav::<f64>(&b), Err(WavError::UnsupportedDepth(8))));

        // no data chunk at all
        let b = pcm16(1, 44_100, &[1]);
        assert!(matches!(read_wav::<f64>(&b[..36]), Err(WavError::MalformedRiff(_))));
    }

    #[test]
    fn rejects_truncated_data() {
        let mut b = pcm16(1, 44_100, &[1, 2, 3]);
        b.truncate(b.len() - 1);
        assert!(matches!(read_wav::<f64>(&b), Err(WavError::MalformedRiff(_))));
        // declared size near u32::MAX must not overflow
        let mut b = pcm16(1, 44_100, &[1]);
        b[40..44].copy_from_slice(&u32::MAX.to_le_bytes());
        assert!(matches!(read_wav::<f64>(&b), Err(WavError::MalformedRiff(_))));
    }

    #[test]
    fn writer_layout() {
        let bytes = write_wav(&AudioSignal::mono(vec![0.0f64], 44_100), 16).unwrap();
        assert_eq!(bytes.len(), 46);
        assert_eq!(&bytes[44..], &[0x00, 0x00]);
        assert_eq!(u32_at(&bytes, 4), 38);
        assert_eq!(u32_at(&bytes, 40), 2);
        assert_eq!(bytes, pcm16(1, 44_100, &[0]));
    }

    #[test]
    fn writer_clamps() {
        assert_eq!(quantize_i16(1.5f64), 32_767);
        assert_eq!(quantize_i16(1.0f64), 32_767);
        assert_eq!(quantize_i16(-3.0f64), -32_768);
        assert_eq!(quantize_i16(0.5f32), 16_384);
    }

    #[test]
    fn writer_rejects_nan_and_other_depths() {
        let sig = AudioSignal::mono(vec![0.0, f64::NAN], 8_000);
        assert!(matches!(write_wav(&sig, 16), Err(WavError::NonFiniteSample { index: 1 })));
        let sig = AudioSignal::mono(vec![0.0], 8_000);
        assert!(matches!(write_wav(&sig, 24), Err(WavError::UnsupportedDepth(24))));
    }

    proptest! {
        #[test]
        fn quantized_round_trip(codes in proptest::collection::vec(any::<i16>(), 1..512), rate in 1u32..192_000) {
            let samples: Vec<f64> = codes.iter().map(|&c| c as f64 / 32_768.0).collect();
            let sig = AudioSignal::mono(samples, rate);
            let back: AudioSignal<f64> = read_wav(&write_wav(&sig, 16).unwrap()).unwrap();
            prop_assert_eq!(back, sig);
        }

        #[test]
        fn decoder_never_panics(tail in proptest::collection::vec(any::<u8>(), 0..128)) {
            let mut bytes = b"RIFF\0\0\0\0WAVE".to_vec();
            bytes.extend_from_slice(&tail);
            let _ = read_wav::<f32>(&bytes);
        }
    }
}
