#![allow(dead_code)]

use std::path::{Path, PathBuf};

use resample_bench::signals::lowpass_test_signal;
use resample_bench::wav_io::{write_wav_file, AudioSignal};

/// Write `count` seeded low-pass WAV files of `len` samples into `dir`.
pub fn write_corpus(dir: &Path, count: usize, len: usize) -> Vec<PathBuf> {
    (0..count)
        .map(|i| {
            let path = dir.join(format!("tone_{i}.wav"));
            let samples: Vec<f64> = lowpass_test_signal(len, 3, 0.2, 100 + i as u64);
            write_wav_file(&path, &AudioSignal::mono(samples, 16_000)).unwrap();
            path
        })
        .collect()
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
