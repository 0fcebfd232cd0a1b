//! End-to-end compression and reconstruction.
//!
//! Compression standardizes the whole signal once, splits it into segments,
//! and runs each segment through transform → threshold → entropy coding.
//! Reconstruction decodes and inverse-transforms each segment, trims any
//! wavelet padding, concatenates the segments in order and destandardizes.

use std::collections::hash_map::{Entry, HashMap};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::container::{self, CompressedFile, CompressedSegment};
use crate::entropy::{self, CodecKind, EncodedPayload};
use crate::error::{Error, Result};
use crate::metrics::{self, RunReport};
use crate::preprocess::{self, segment_bounds};
use crate::signal_io::RawSignal;
use crate::transform::{
    dwt_forward, dwt_inverse, threshold_in_place, CoefficientBlock, DctPlan, ThresholdSpec,
    TransformKind, MAX_DWT_LEVELS,
};

/// How the standardized signal is cut into segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Segmentation {
    Count(usize),
    /// One segment per this many seconds of signal.
    SamplingTime(f64),
}

impl Segmentation {
    pub fn resolve(&self, sample_rate: f64, total_samples: usize) -> Result<usize> {
        match *self {
            Segmentation::Count(n) => Ok(n),
            Segmentation::SamplingTime(ts) => {
                preprocess::segments_for_sampling_time(sample_rate, total_samples, ts)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub transform: TransformKind,
    pub codec: CodecKind,
    pub thr: ThresholdSpec,
    pub dwt_levels: u32,
    pub segmentation: Segmentation,
}

impl PipelineConfig {
    pub fn new(transform: TransformKind, codec: CodecKind, thr: f64) -> Result<Self> {
        let cfg = Self {
            transform,
            codec,
            thr: ThresholdSpec::new(thr)?,
            dwt_levels: 1,
            segmentation: Segmentation::Count(1),
        };
        Ok(cfg)
    }

    pub fn with_levels(mut self, levels: u32) -> Self {
        self.dwt_levels = levels;
        self
    }

    pub fn with_segmentation(mut self, segmentation: Segmentation) -> Self {
        self.segmentation = segmentation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ThresholdSpec::new(self.thr.value())?;
        if self.dwt_levels == 0 || self.dwt_levels > MAX_DWT_LEVELS {
            return Err(Error::InvalidArgument(format!(
                "dwt levels must be in 1..={MAX_DWT_LEVELS}, got {}",
                self.dwt_levels
            )));
        }
        match self.segmentation {
            Segmentation::Count(0) => Err(Error::InvalidArgument(
                "segment count must be at least 1".into(),
            )),
            Segmentation::SamplingTime(ts) if !(ts.is_finite() && ts > 0.0) => Err(
                Error::InvalidArgument(format!("sampling time must be positive, got {ts}")),
            ),
            _ => Ok(()),
        }
    }

    /// The four transform/codec pairings at a common threshold.
    pub fn all_combinations(thr: f64) -> Result<Vec<Self>> {
        let mut out = Vec::with_capacity(4);
        for t in [TransformKind::Dct, TransformKind::Dwt] {
            for c in [CodecKind::Rle, CodecKind::Arith] {
                out.push(Self::new(t, c, thr)?);
            }
        }
        Ok(out)
    }
}

/// Wall-clock seconds spent in each stage.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageTimings {
    pub t_lossy: f64,
    pub t_thr: f64,
    pub t_lossless: f64,
    pub t_ilossless: f64,
    pub t_ilossy: f64,
}

impl StageTimings {
    pub fn merge(&self, other: &StageTimings) -> StageTimings {
        StageTimings {
            t_lossy: self.t_lossy + other.t_lossy,
            t_thr: self.t_thr + other.t_thr,
            t_lossless: self.t_lossless + other.t_lossless,
            t_ilossless: self.t_ilossless + other.t_ilossless,
            t_ilossy: self.t_ilossy + other.t_ilossy,
        }
    }

    pub fn per_segment(&self, segments: usize) -> StageTimings {
        let n = segments.max(1) as f64;
        StageTimings {
            t_lossy: self.t_lossy / n,
            t_thr: self.t_thr / n,
            t_lossless: self.t_lossless / n,
            t_ilossless: self.t_ilossless / n,
            t_ilossy: self.t_ilossy / n,
        }
    }

    pub fn max_stage(&self) -> f64 {
        [
            self.t_lossy,
            self.t_thr,
            self.t_lossless,
            self.t_ilossless,
            self.t_ilossy,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// A segment period `ts_seconds` is sustainable when no single stage takes
/// longer than it. Returns the verdict and that minimum period.
pub fn check_realtime_feasibility(timings: &StageTimings, ts_seconds: f64) -> (bool, f64) {
    let t_min = timings.max_stage();
    (ts_seconds >= t_min, t_min)
}

fn elapsed(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

#[derive(Default)]
struct DctPlans(HashMap<usize, DctPlan<f64>>);

impl DctPlans {
    fn get(&mut self, len: usize) -> Result<&mut DctPlan<f64>> {
        Ok(match self.0.entry(len) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(DctPlan::new(len)?),
        })
    }
}

pub fn compress(
    signal: &RawSignal,
    config: &PipelineConfig,
) -> Result<(CompressedFile, StageTimings)> {
    config.validate()?;
    let (standardized, params) = preprocess::standardize(signal.samples())?;
    let num_segments = config
        .segmentation
        .resolve(signal.sample_rate(), standardized.len())?;
    let bounds = segment_bounds(standardized.len(), num_segments)?;

    let block = 1usize << config.dwt_levels;
    let mut plans = DctPlans::default();
    let mut timings = StageTimings::default();
    let mut segments = Vec::with_capacity(bounds.len());

    for (index, range) in bounds.into_iter().enumerate() {
        let data = &standardized[range];
        let original_length = data.len();

        let start = Instant::now();
        let (mut coefficients, pad_length) = match config.transform {
            TransformKind::Dct => {
                let plan = plans.get(original_length)?;
                let mut out = vec![0.0; original_length];
                plan.forward(data, &mut out);
                (out, 0)
            }
            TransformKind::Dwt => {
                let padded_len = original_length.div_ceil(block) * block;
                let mut padded = data.to_vec();
                padded.resize(padded_len, 0.0);
                let b = dwt_forward(&padded, config.dwt_levels).map_err(|e| e.in_segment(index))?;
                (b.coefficients, padded_len - original_length)
            }
        };
        timings.t_lossy += elapsed(start);

        let start = Instant::now();
        threshold_in_place(&mut coefficients, config.thr);
        timings.t_thr += elapsed(start);

        let start = Instant::now();
        let payload =
            entropy::encode(config.codec, &coefficients).map_err(|e| e.in_segment(index))?;
        timings.t_lossless += elapsed(start);

        segments.push(CompressedSegment {
            transform: config.transform,
            codec: config.codec,
            dwt_levels: config.dwt_levels,
            pad_length,
            original_length,
            payload,
        });
    }

    let file = CompressedFile {
        params,
        sample_rate: signal.sample_rate(),
        transform: config.transform,
        codec: config.codec,
        dwt_levels: config.dwt_levels,
        segments,
    };
    Ok((file, timings))
}

/// Reconstruction before destandardization, in the unit-variance domain.
pub fn reconstruct_standardized(file: &CompressedFile) -> Result<(Vec<f64>, StageTimings)> {
    file.validate()?;
    let mut plans = DctPlans::default();
    let mut timings = StageTimings::default();
    // grow only as segments actually decode; header lengths are untrusted
    let mut out = Vec::new();

    for (index, seg) in file.segments.iter().enumerate() {
        let start = Instant::now();
        let coefficients = decode_segment(&seg.payload).map_err(|e| e.in_segment(index))?;
        timings.t_ilossless += elapsed(start);

        let start = Instant::now();
        let mut samples = match seg.transform {
            TransformKind::Dct => {
                let plan = plans.get(coefficients.len())?;
                let mut x = vec![0.0; coefficients.len()];
                plan.inverse(&coefficients, &mut x);
                x
            }
            TransformKind::Dwt => {
                let block = CoefficientBlock {
                    transform: TransformKind::Dwt,
                    original_length: coefficients.len(),
                    coefficients,
                    dwt_levels: seg.dwt_levels,
                };
                dwt_inverse(&block).map_err(|e| e.in_segment(index))?
            }
        };
        samples.truncate(seg.original_length);
        timings.t_ilossy += elapsed(start);

        out.extend_from_slice(&samples);
    }
    Ok((out, timings))
}

fn decode_segment(payload: &EncodedPayload) -> Result<Vec<f64>> {
    let coefficients = entropy::decode(payload)?;
    debug_assert_eq!(coefficients.len(), payload.decoded_length);
    Ok(coefficients)
}

pub fn decompress(file: &CompressedFile) -> Result<(RawSignal, StageTimings)> {
    let (standardized, timings) = reconstruct_standardized(file)?;
    let samples = preprocess::destandardize(&standardized, &file.params);
    if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok((RawSignal::new(samples, file.sample_rate)?, timings))
}

/// Everything produced by one measured run.
pub struct RunOutcome {
    pub report: RunReport,
    pub file: CompressedFile,
    pub bytes: Vec<u8>,
    pub reconstructed: RawSignal,
}

/// Compresses, serializes, parses back and reconstructs `signal`, measuring
/// distortion, size and stage times.
pub fn evaluate(signal: &RawSignal, config: &PipelineConfig) -> Result<RunOutcome> {
    let (file, comp_timings) = compress(signal, config)?;
    let bytes = container::serialize(&file)?;
    let parsed = container::deserialize(&bytes)?;
    let (recon_std, recon_timings) = reconstruct_standardized(&parsed)?;
    let reconstructed = RawSignal::new(
        preprocess::destandardize(&recon_std, &parsed.params),
        parsed.sample_rate,
    )?;

    let (standardized, _) = preprocess::standardize(signal.samples())?;
    let timings = comp_timings.merge(&recon_timings);
    let (t_comp, t_reconst, t_total) = metrics::total_time(&timings);
    let num_segments = file.segment_count();
    let (_, t_min) = check_realtime_feasibility(&timings.per_segment(num_segments), f64::INFINITY);
    let original_bytes = metrics::original_bytes(signal.len());

    let report = RunReport {
        config: *config,
        num_segments,
        rmse: metrics::rmse(&standardized, &recon_std)?,
        rmse_raw: metrics::rmse(signal.samples(), reconstructed.samples())?,
        cr_percent: metrics::compression_ratio(original_bytes, bytes.len())?,
        t_comp,
        t_reconst,
        t_total,
        t_min,
        segment_size: signal.len() / num_segments,
        compressed_bytes: bytes.len(),
        original_bytes,
        timings,
    };
    Ok(RunOutcome {
        report,
        file: parsed,
        bytes,
        reconstructed,
    })
}
