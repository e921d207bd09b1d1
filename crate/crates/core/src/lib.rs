//! Uniform and random sampling of audio frames with spline, low-pass and
//! iterative sparse recovery, plus the harness that benchmarks them.
//!
//! Numeric code is generic over [`scalar::Real`] (`f32` or `f64`). The
//! aliases below fix the scalar for callers that do not care.

pub mod bench;
pub mod cli;
pub mod filters;
pub mod framing;
pub mod metrics;
pub mod reconstruct;
mod rng;
pub mod sampling;
pub mod scalar;
pub mod signals;
pub mod transform;
pub mod wav_io;

pub use bench::{run_bench, run_pipeline, BenchConfig, BenchRecord, Method};
pub use filters::{apply_filter, fft_lowpass, FilterSpec, FirWindow, IirDesign};
pub use framing::{merge_frames, split_frames, Frame};
pub use metrics::{snr_db, EvalResult};
pub use reconstruct::{imat, imati, recover_lowpass, recover_spline, ImatParams, SparseTransform, SplineBoundary};
pub use sampling::{apply_mask, random_mask, uniform_mask, SampleMask};
pub use scalar::Real;
pub use wav_io::{read_wav, write_wav, AudioSignal};

pub type Frame64 = Frame<f64>;
pub type Frame32 = Frame<f32>;
pub type Audio64 = AudioSignal<f64>;
pub type Audio32 = AudioSignal<f32>;
pub type FilterSpec64 = FilterSpec<f64>;
pub type FilterSpec32 = FilterSpec<f32>;
pub type DesignedFilter64 = filters::DesignedFilter<f64>;
pub type DesignedFilter32 = filters::DesignedFilter<f32>;
pub type ImatParams64 = ImatParams<f64>;
pub type ImatParams32 = ImatParams<f32>;
pub type CubicSpline64 = reconstruct::CubicSpline<f64>;
pub type CubicSpline32 = reconstruct::CubicSpline<f32>;
