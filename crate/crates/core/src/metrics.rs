//! Distortion, compression ratio and timing metrics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pipeline::{PipelineConfig, StageTimings};
use crate::preprocess::compensated_sum;
use crate::scalar::Real;

/// Root mean square error between two equal-length sequences.
pub fn rmse<T: Real>(original: &[T], recovered: &[T]) -> Result<T> {
    if original.len() != recovered.len() {
        return Err(Error::InvalidArgument(format!(
            "rmse length mismatch: {} vs {}",
            original.len(),
            recovered.len()
        )));
    }
    if original.is_empty() {
        return Err(Error::EmptySignal);
    }
    let sq = compensated_sum(
        original
            .iter()
            .zip(recovered)
            .map(|(&x, &y)| (x - y) * (x - y)),
    );
    Ok((sq / T::from_usize_lossy(original.len())).sqrt())
}

/// Percentage of bytes eliminated; negative when the output is larger.
pub fn compression_ratio(original_bytes: usize, compressed_bytes: usize) -> Result<f64> {
    if original_bytes == 0 {
        return Err(Error::InvalidArgument("original size is zero".into()));
    }
    let o = original_bytes as f64;
    Ok((o - compressed_bytes as f64) / o * 100.0)
}

/// Uncompressed size of `samples` binary64 values.
pub fn original_bytes(samples: usize) -> usize {
    samples * 8
}

/// `(t_comp, t_reconst, t_total)` in seconds.
pub fn total_time(t: &StageTimings) -> (f64, f64, f64) {
    let t_comp = t.t_lossy + t.t_thr + t.t_lossless;
    let t_reconst = t.t_ilossless + t.t_ilossy;
    (t_comp, t_reconst, t_comp + t_reconst)
}

/// Metrics of one compress/reconstruct run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: PipelineConfig,
    pub num_segments: usize,
    /// RMSE between standardized input and standardized reconstruction.
    pub rmse: f64,
    /// RMSE in the input's own units.
    pub rmse_raw: f64,
    pub cr_percent: f64,
    pub t_comp: f64,
    pub t_reconst: f64,
    pub t_total: f64,
    /// Largest mean per-segment stage time.
    pub t_min: f64,
    pub segment_size: usize,
    pub compressed_bytes: usize,
    pub original_bytes: usize,
    pub timings: StageTimings,
}
