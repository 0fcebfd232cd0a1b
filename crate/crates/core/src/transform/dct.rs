//! Orthonormal DCT-II / DCT-III computed through a single length-N complex FFT
//! (even/odd reordering of the input, then a quarter-sample phase rotation).

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{CoefficientBlock, TransformKind};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Precomputed FFTs, twiddles and scale factors for one transform length.
pub struct DctPlan<T: Real> {
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    /// exp(-i·π·u / 2N)
    twiddles: Vec<Complex<T>>,
    /// sqrt(2/N)·α(u)
    scale: Vec<T>,
    scratch: Vec<Complex<T>>,
}

impl<T: Real> DctPlan<T> {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptySignal);
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let n = T::from_usize_lossy(len);
        let two = T::one() + T::one();
        let twiddles = (0..len)
            .map(|u| {
                let theta = -T::PI() * T::from_usize_lossy(u) / (two * n);
                Complex::new(theta.cos(), theta.sin())
            })
            .collect();
        let base = (two / n).sqrt();
        let scale = (0..len)
            .map(|u| {
                if u == 0 {
                    base * T::FRAC_1_SQRT_2()
                } else {
                    base
                }
            })
            .collect();
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Ok(Self {
            len,
            forward,
            inverse,
            twiddles,
            scale,
            scratch: vec![Complex::default(); scratch_len],
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Y(u) = sqrt(2/N)·α(u)·Σ f(x)·cos(π(2x+1)u / 2N)
    pub fn forward(&mut self, input: &[T], output: &mut [T]) {
        let n = self.len;
        assert_eq!(input.len(), n, "input length does not match plan");
        assert_eq!(output.len(), n, "output length does not match plan");

        let mut buf: Vec<Complex<T>> = vec![Complex::default(); n];
        let half = n.div_ceil(2);
        for k in 0..half {
            buf[k].re = input[2 * k];
        }
        for k in 0..n / 2 {
            buf[n - 1 - k].re = input[2 * k + 1];
        }
        self.forward
            .process_with_scratch(&mut buf, &mut self.scratch);
        for u in 0..n {
            output[u] = (buf[u] * self.twiddles[u]).re * self.scale[u];
        }
    }

    /// f(x) = sqrt(2/N)·Σ α(u)·Y(u)·cos(π(2x+1)u / 2N)
    pub fn inverse(&mut self, input: &[T], output: &mut [T]) {
        let n = self.len;
        assert_eq!(input.len(), n, "input length does not match plan");
        assert_eq!(output.len(), n, "output length does not match plan");

        // undo the orthonormal scaling to recover the plain cosine sums Z(u)
        let z = |u: usize| {
            if u == n {
                T::zero()
            } else {
                input[u] / self.scale[u]
            }
        };
        let mut buf: Vec<Complex<T>> = (0..n)
            .map(|u| {
                let p = Complex::new(z(u), -z(n - u));
                p * self.twiddles[u].conj()
            })
            .collect();
        self.inverse
            .process_with_scratch(&mut buf, &mut self.scratch);
        let inv_n = T::one() / T::from_usize_lossy(n);
        let half = n.div_ceil(2);
        for k in 0..half {
            output[2 * k] = buf[k].re * inv_n;
        }
        for k in 0..n / 2 {
            output[2 * k + 1] = buf[n - 1 - k].re * inv_n;
        }
    }
}

pub fn dct_forward<T: Real>(segment: &[T]) -> Result<CoefficientBlock<T>> {
    let mut plan = DctPlan::new(segment.len())?;
    let mut coefficients = vec![T::zero(); segment.len()];
    plan.forward(segment, &mut coefficients);
    Ok(CoefficientBlock {
        transform: TransformKind::Dct,
        original_length: segment.len(),
        coefficients,
        dwt_levels: 1,
    })
}

pub fn dct_inverse<T: Real>(block: &CoefficientBlock<T>) -> Result<Vec<T>> {
    if block.transform != TransformKind::Dct {
        return Err(Error::WrongTransform {
            expected: "dct",
            found: block.transform.name(),
        });
    }
    let mut plan = DctPlan::new(block.coefficients.len())?;
    let mut out = vec![T::zero(); block.coefficients.len()];
    plan.inverse(&block.coefficients, &mut out);
    Ok(out)
}
