use serde::{Deserialize, Serialize};

use super::CoefficientBlock;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Threshold as a fraction of the largest coefficient magnitude.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThresholdSpec(f64);

impl ThresholdSpec {
    pub fn new(thr: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&thr) {
            return Err(Error::InvalidArgument(format!(
                "threshold must be in [0, 1], got {thr}"
            )));
        }
        Ok(Self(thr))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Zeroes every coefficient with `|c| / max|c| <= thr` and returns how many
/// nonzero coefficients survive. The comparison is strict, so at `thr = 1`
/// even the largest coefficients are dropped. An all-zero slice is left alone.
pub fn threshold_in_place<T: Real>(coefficients: &mut [T], spec: ThresholdSpec) -> usize {
    let max = coefficients
        .iter()
        .fold(T::zero(), |m, c| if c.abs() > m { c.abs() } else { m });
    if max == T::zero() {
        return 0;
    }
    let thr = T::from_f64_lossy(spec.value());
    let mut retained = 0;
    for c in coefficients.iter_mut() {
        if (*c / max).abs() > thr {
            if *c != T::zero() {
                retained += 1;
            }
        } else {
            *c = T::zero();
        }
    }
    retained
}

pub fn threshold<T: Real>(
    block: &CoefficientBlock<T>,
    spec: ThresholdSpec,
) -> (CoefficientBlock<T>, usize) {
    let mut out = block.clone();
    let retained = threshold_in_place(&mut out.coefficients, spec);
    (out, retained)
}
