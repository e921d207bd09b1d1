//! Synthetic test signals.

use crate::rng;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tone {
    /// Normalized frequency, cycles per sample.
    pub freq: f64,
    pub amplitude: f64,
    pub phase: f64,
}

/// Sum of sinusoids sampled at `t = 0..n`.
pub fn tone_sum<T: Real>(n: usize, tones: &[Tone]) -> Vec<T> {
    (0..n)
        .map(|t| {
            let v: f64 = tones
                .iter()
                .map(|tone| tone.amplitude * (std::f64::consts::TAU * tone.freq * t as f64 + tone.phase).cos())
                .sum();
            T::lit(v)
        })
        .collect()
}

/// `count` tones with frequencies uniform in `[min_freq, max_freq)`,
/// amplitudes in `[0.2, 1)` and phases in `[0, 2 pi)`.
pub fn random_tones(count: usize, min_freq: f64, max_freq: f64, seed: u64) -> Vec<Tone> {
    let mut rng = rng::seeded(seed);
    (0..count)
        .map(|_| Tone {
            freq: rng::uniform(&mut rng, min_freq, max_freq),
            amplitude: rng::uniform(&mut rng, 0.2, 1.0),
            phase: rng::uniform(&mut rng, 0.0, std::f64::consts::TAU),
        })
        .collect()
}

/// A low-pass multi-tone signal: `tones` random tones in `[0.005, max_freq)`,
/// scaled so the peak amplitude stays below 0.9.
pub fn lowpass_test_signal<T: Real>(n: usize, tones: usize, max_freq: f64, seed: u64) -> Vec<T> {
    let mut set = random_tones(tones, 0.005, max_freq, seed);
    let total: f64 = set.iter().map(|t| t.amplitude).sum();
    if total > 0.9 {
        for t in &mut set {
            t.amplitude *= 0.9 / total;
        }
    }
    tone_sum(n, &set)
}
