//! Parameter sweeps over pipeline configurations, emitting one CSV row per run.

use std::io::Write;

use serde::Serialize;

use crate::entropy::CodecKind;
use crate::error::{Error, Result};
use crate::pipeline::{evaluate, PipelineConfig, Segmentation};
use crate::signal_io::RawSignal;
use crate::transform::{ThresholdSpec, TransformKind};

pub const DEFAULT_THR_MIN: f64 = 0.005;
pub const DEFAULT_THR_MAX: f64 = 0.05;
pub const DEFAULT_THR_POINTS: usize = 12;

/// `points` values from `lo` to `hi` inclusive, evenly spaced in log scale.
pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && points >= 1) {
        return Err(Error::InvalidArgument(format!(
            "log spacing needs 0 < lo <= hi and points >= 1 (lo={lo}, hi={hi}, points={points})"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => lo,
            i if i == points - 1 => hi,
            i => (a + step * i as f64).exp(),
        })
        .collect())
}

pub fn linear_spaced(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(hi >= lo && points >= 1) {
        return Err(Error::InvalidArgument(format!(
            "linear spacing needs lo <= hi and points >= 1 (lo={lo}, hi={hi}, points={points})"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect())
}

/// Pipeline pairings a sweep covers; thresholds and segmentation come from
/// the enclosing [`SweepSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub transform: TransformKind,
    pub codec: CodecKind,
    pub dwt_levels: u32,
}

impl SweepConfig {
    pub fn all(dwt_levels: u32) -> Vec<SweepConfig> {
        let mut out = Vec::with_capacity(4);
        for transform in [TransformKind::Dct, TransformKind::Dwt] {
            for codec in [CodecKind::Rle, CodecKind::Arith] {
                out.push(SweepConfig {
                    transform,
                    codec,
                    dwt_levels,
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub thresholds: Vec<f64>,
    pub segment_counts: Vec<usize>,
    pub configs: Vec<SweepConfig>,
}

impl SweepSpec {
    /// All four pairings, 12 log-spaced thresholds in [0.005, 0.05], one
    /// segmentation.
    pub fn standard(segment_count: usize, dwt_levels: u32) -> Result<Self> {
        Ok(SweepSpec {
            thresholds: log_spaced(DEFAULT_THR_MIN, DEFAULT_THR_MAX, DEFAULT_THR_POINTS)?,
            segment_counts: vec![segment_count],
            configs: SweepConfig::all(dwt_levels),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.thresholds.is_empty() || self.segment_counts.is_empty() || self.configs.is_empty() {
            return Err(Error::InvalidArgument(
                "sweep lists must be non-empty".into(),
            ));
        }
        for &t in &self.thresholds {
            ThresholdSpec::new(t)?;
        }
        if self.segment_counts.contains(&0) {
            return Err(Error::InvalidArgument("segment counts must be >= 1".into()));
        }
        Ok(())
    }

    pub fn run_count(&self) -> usize {
        self.thresholds.len() * self.segment_counts.len() * self.configs.len()
    }
}

/// One CSV row. Metric columns are empty when the run failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub transform: TransformKind,
    pub codec: CodecKind,
    pub thr: f64,
    pub num_segments: usize,
    pub segment_size: usize,
    pub rmse_std: Option<f64>,
    pub rmse_raw: Option<f64>,
    pub cr_percent: Option<f64>,
    pub t_comp_s: Option<f64>,
    pub t_reconst_s: Option<f64>,
    pub t_total_s: Option<f64>,
    pub t_min_s: Option<f64>,
    pub compressed_bytes: Option<usize>,
    pub original_bytes: Option<usize>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Runs every (config × segment count × threshold) combination in that
/// nesting order. Failed runs become rows with the `error` column set.
pub fn run_sweep(signal: &RawSignal, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.run_count());
    for c in &spec.configs {
        for &num_segments in &spec.segment_counts {
            for &thr in &spec.thresholds {
                let segment_size = signal.len() / num_segments.max(1);
                let mut row = SweepRow {
                    transform: c.transform,
                    codec: c.codec,
                    thr,
                    num_segments,
                    segment_size,
                    rmse_std: None,
                    rmse_raw: None,
                    cr_percent: None,
                    t_comp_s: None,
                    t_reconst_s: None,
                    t_total_s: None,
                    t_min_s: None,
                    compressed_bytes: None,
                    original_bytes: None,
                    error: None,
                };
                let outcome = PipelineConfig::new(c.transform, c.codec, thr).and_then(|cfg| {
                    let cfg = cfg
                        .with_levels(c.dwt_levels)
                        .with_segmentation(Segmentation::Count(num_segments));
                    evaluate(signal, &cfg)
                });
                match outcome {
                    Ok(out) => {
                        let r = out.report;
                        row.rmse_std = Some(r.rmse);
                        row.rmse_raw = Some(r.rmse_raw);
                        row.cr_percent = Some(r.cr_percent);
                        row.t_comp_s = Some(r.t_comp);
                        row.t_reconst_s = Some(r.t_reconst);
                        row.t_total_s = Some(r.t_total);
                        row.t_min_s = Some(r.t_min);
                        row.compressed_bytes = Some(r.compressed_bytes);
                        row.original_bytes = Some(r.original_bytes);
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<csv>".into(),
        source: e,
    })
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io {
        path: "<csv>".into(),
        source: std::io::Error::other(e.to_string()),
    }
}
