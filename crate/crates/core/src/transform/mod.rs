//! Orthonormal DCT-II and Haar wavelet transforms, and relative thresholding.

mod dct;
mod dwt;
mod threshold;

use serde::{Deserialize, Serialize};

pub use dct::{dct_forward, dct_inverse, DctPlan};
pub use dwt::{dwt_forward, dwt_inverse, MAX_DWT_LEVELS};
pub use threshold::{threshold, threshold_in_place, ThresholdSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Dct,
    Dwt,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Dct => "dct",
            TransformKind::Dwt => "dwt",
        }
    }
}

impl std::fmt::Display for TransformKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TransformKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dct" => Ok(TransformKind::Dct),
            "dwt" => Ok(TransformKind::Dwt),
            other => Err(crate::Error::InvalidArgument(format!(
                "unknown transform {other:?}"
            ))),
        }
    }
}

/// Dense transform-domain coefficients.
///
/// `dwt_levels` is only meaningful for [`TransformKind::Dwt`]; DCT blocks
/// carry 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientBlock<T> {
    pub transform: TransformKind,
    pub coefficients: Vec<T>,
    pub original_length: usize,
    pub dwt_levels: u32,
}

impl<T> CoefficientBlock<T> {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}
