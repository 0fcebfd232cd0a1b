//! Standardization to zero mean / unit variance and contiguous segmentation.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Mean and population standard deviation of the source signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardizationParams<T> {
    pub mu: T,
    pub sigma: T,
}

impl<T: Real> StandardizationParams<T> {
    pub fn new(mu: T, sigma: T) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "standardization params must be finite with sigma > 0 (mu={mu}, sigma={sigma})"
            )));
        }
        Ok(Self { mu, sigma })
    }

    pub fn identity() -> Self {
        Self {
            mu: T::zero(),
            sigma: T::one(),
        }
    }
}

/// One contiguous slice of the standardized signal.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedSegment<T> {
    pub data: Vec<T>,
    pub segment_index: usize,
    pub original_offset: usize,
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

pub fn standardize<T: Real>(samples: &[T]) -> Result<(Vec<T>, StandardizationParams<T>)> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "standardization needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let n = T::from_usize_lossy(samples.len());
    let mut mu = compensated_sum(samples.iter().copied()) / n;
    // second pass removes the residual bias of the first mean
    mu = mu + compensated_sum(samples.iter().map(|&x| x - mu)) / n;
    let var = compensated_sum(samples.iter().map(|&x| (x - mu) * (x - mu))) / n;
    let sigma = var.sqrt();
    if sigma <= T::zero() || !sigma.is_finite() {
        return Err(Error::Degenerate(
            "signal is constant (standard deviation is zero)".into(),
        ));
    }
    let params = StandardizationParams { mu, sigma };
    let out = samples.iter().map(|&x| (x - mu) / sigma).collect();
    Ok((out, params))
}

pub fn destandardize<T: Real>(standardized: &[T], params: &StandardizationParams<T>) -> Vec<T> {
    standardized
        .iter()
        .map(|&y| y * params.sigma + params.mu)
        .collect()
}

/// Sample ranges of the `num_segments` segments of a length-`len` signal.
/// All but the last have `len / num_segments` samples; the last also takes
/// the remainder.
pub fn segment_bounds(len: usize, num_segments: usize) -> Result<Vec<Range<usize>>> {
    if num_segments == 0 || num_segments > len {
        return Err(Error::InvalidArgument(format!(
            "segment count must be in 1..={len}, got {num_segments}"
        )));
    }
    let sp = len / num_segments;
    Ok((0..num_segments)
        .map(|k| {
            let start = k * sp;
            let end = if k + 1 == num_segments {
                len
            } else {
                start + sp
            };
            start..end
        })
        .collect())
}

pub fn segment<T: Real>(
    standardized: &[T],
    num_segments: usize,
) -> Result<Vec<StandardizedSegment<T>>> {
    Ok(segment_bounds(standardized.len(), num_segments)?
        .into_iter()
        .enumerate()
        .map(|(segment_index, r)| StandardizedSegment {
            original_offset: r.start,
            data: standardized[r].to_vec(),
            segment_index,
        })
        .collect())
}

/// Number of segments produced when one segment is emitted every `ts_seconds`.
pub fn segments_for_sampling_time(
    sample_rate: f64,
    total_samples: usize,
    ts_seconds: f64,
) -> Result<usize> {
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sample rate must be positive, got {sample_rate}"
        )));
    }
    if !(ts_seconds.is_finite() && ts_seconds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sampling time must be positive, got {ts_seconds}"
        )));
    }
    if total_samples == 0 {
        return Err(Error::EmptySignal);
    }
    let per_segment = ((ts_seconds * sample_rate).round() as usize).max(1);
    Ok((total_samples / per_segment).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_point_standardization() {
        let (out, p) = standardize(&[1.0, 3.0]).unwrap();
        assert_eq!(p.mu, 2.0);
        assert_eq!(p.sigma, 1.0);
        assert_eq!(out, vec![-1.0, 1.0]);
    }

    #[test]
    fn four_point_matches_elementwise_formula() {
        let x = [0.0f64, 1.0, 2.0, 3.0];
        let (out, p) = standardize(&x).unwrap();
        let sigma = 1.25f64.sqrt();
        assert!((p.mu - 1.5).abs() < 1e-15);
        assert!((p.sigma - sigma).abs() < 1e-15);
        for (o, xi) in out.iter().zip(x) {
            assert!((o - (xi - 1.5) / sigma).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_signal_is_degenerate() {
        assert!(matches!(
            standardize(&[5.0, 5.0, 5.0]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn too_short_rejected() {
        assert!(standardize(&[1.0]).is_err());
    }

    #[test]
    fn destandardize_inverts_examples() {
        let p = StandardizationParams::new(2.0, 1.0).unwrap();
        assert_eq!(destandardize(&[-1.0, 1.0], &p), vec![1.0, 3.0]);
        let y = [0.25, -7.5];
        assert_eq!(
            destandardize(&y, &StandardizationParams::identity()),
            y.to_vec()
        );
    }

    #[test]
    fn params_validation() {
        assert!(StandardizationParams::new(0.0, 0.0).is_err());
        assert!(StandardizationParams::new(f64::NAN, 1.0).is_err());
        assert!(StandardizationParams::new(0.0, -1.0).is_err());
    }

    #[test]
    fn round_trip_on_synth() {
        let s = crate::signal_io::synth_eeg(1.0, 256.0, 7).unwrap();
        let (z, p) = standardize(s.samples()).unwrap();
        let back = destandardize(&z, &p);
        let err = back
            .iter()
            .zip(s.samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn works_on_f32() {
        let (out, p) = standardize(&[1.0f32, 3.0]).unwrap();
        assert_eq!(out, vec![-1.0f32, 1.0]);
        assert_eq!(p.sigma, 1.0f32);
    }

    #[test]
    fn segment_lengths() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let lens: Vec<usize> = segment(&x, 3)
            .unwrap()
            .iter()
            .map(|s| s.data.len())
            .collect();
        assert_eq!(lens, vec![3, 3, 4]);
        assert_eq!(segment(&x[..8], 1).unwrap()[0].data.len(), 8);
        let six = segment(&x[..6], 6).unwrap();
        assert!(six.iter().all(|s| s.data.len() == 1));
        assert_eq!(six[4].original_offset, 4);
    }

    #[test]
    fn segment_count_out_of_range() {
        let x = [1.0, 2.0];
        assert!(segment(&x, 0).is_err());
        assert!(segment(&x, 3).is_err());
    }

    #[test]
    fn sampling_time_examples() {
        assert_eq!(segments_for_sampling_time(256.0, 2560, 1.0).unwrap(), 10);
        assert_eq!(segments_for_sampling_time(256.0, 300, 2.0).unwrap(), 1);
        assert_eq!(segments_for_sampling_time(100.0, 1050, 1.0).unwrap(), 10);
        let x = vec![0.0f64; 1050];
        assert_eq!(segment(&x, 10).unwrap()[9].data.len(), 105);
    }

    #[test]
    fn sampling_time_rejects_non_positive() {
        assert!(segments_for_sampling_time(0.0, 10, 1.0).is_err());
        assert!(segments_for_sampling_time(256.0, 10, 0.0).is_err());
        assert!(segments_for_sampling_time(256.0, 10, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn segments_partition_input(
            x in prop::collection::vec(-1e6f64..1e6, 1..400),
            n in 1usize..400,
        ) {
            let n = n.min(x.len());
            let segs = segment(&x, n).unwrap();
            prop_assert_eq!(segs.len(), n);
            let mut offset = 0;
            let mut joined = Vec::new();
            for (i, s) in segs.iter().enumerate() {
                prop_assert_eq!(s.segment_index, i);
                prop_assert_eq!(s.original_offset, offset);
                prop_assert!(!s.data.is_empty());
                offset += s.data.len();
                joined.extend_from_slice(&s.data);
            }
            prop_assert_eq!(joined.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                            x.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        }

        #[test]
        fn standardized_moments(x in prop::collection::vec(-1e3f64..1e3, 2..2000)) {
            prop_assume!(x.iter().any(|&v| v != x[0]));
            let (z, p) = standardize(&x).unwrap();
            let n = z.len() as f64;
            let mean = compensated_sum(z.iter().copied()) / n;
            let std = (compensated_sum(z.iter().map(|v| (v - mean) * (v - mean))) / n).sqrt();
            prop_assert!(mean.abs() < 1e-12, "mean {}", mean);
            prop_assert!((std - 1.0).abs() < 1e-9, "std {}", std);
            let back = destandardize(&z, &p);
            for (a, b) in back.iter().zip(&x) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn standardization_preserves_order(x in prop::collection::vec(-1e3f64..1e3, 2..200)) {
            prop_assume!(x.iter().any(|&v| v != x[0]));
            let (z, _) = standardize(&x).unwrap();
            for i in 0..x.len() {
                for j in 0..x.len() {
                    if x[i] < x[j] {
                        prop_assert!(z[i] <= z[j]);
                    }
                }
            }
        }
    }
}
