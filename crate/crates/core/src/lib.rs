//! Lossy/lossless hybrid codec for single-channel biosignals.
//!
//! A signal is standardized to zero mean and unit variance, cut into
//! segments, and each segment goes through an orthonormal transform (DCT-II
//! or Haar DWT), relative-magnitude thresholding, and a lossless back end
//! (zero-run RLE or adaptive arithmetic coding). The result is stored in a
//! compact binary container. [`bench`] drives parameter sweeps that measure
//! compression ratio, reconstruction error and per-stage timings.
//!
//! The transform, preprocessing and metric code is generic over [`Real`]
//! (`f32` or `f64`); aliases below name the common instantiations. Entropy
//! coding and the container work on binary64.

pub mod bench;
pub mod container;
pub mod entropy;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod preprocess;
pub mod scalar;
pub mod signal_io;
pub mod transform;

pub use container::{compressed_size, deserialize, serialize, CompressedFile, CompressedSegment};
pub use entropy::{CodecKind, EncodedPayload};
pub use error::{ContainerError, Error, PayloadError, Result};
pub use metrics::RunReport;
pub use pipeline::{
    check_realtime_feasibility, compress, decompress, evaluate, PipelineConfig, Segmentation,
    StageTimings,
};
pub use scalar::Real;
pub use signal_io::{RawSignal, SignalFormat};
pub use transform::{ThresholdSpec, TransformKind};

pub type CoefficientBlock64 = transform::CoefficientBlock<f64>;
pub type CoefficientBlock32 = transform::CoefficientBlock<f32>;
pub type StandardizationParams64 = preprocess::StandardizationParams<f64>;
pub type StandardizationParams32 = preprocess::StandardizationParams<f32>;
pub type StandardizedSegment64 = preprocess::StandardizedSegment<f64>;
pub type StandardizedSegment32 = preprocess::StandardizedSegment<f32>;
pub type DctPlan64 = transform::DctPlan<f64>;
pub type DctPlan32 = transform::DctPlan<f32>;
