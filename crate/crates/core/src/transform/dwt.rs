//! Multi-level orthonormal Haar wavelet transform.
//!
//! Coefficient layout is `[A_L | D_L | D_{L-1} | ... | D_1]`, coarsest band first.

use super::{CoefficientBlock, TransformKind};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Upper bound on decomposition depth accepted anywhere in the codec.
pub const MAX_DWT_LEVELS: u32 = 24;

fn check_dyadic(len: usize, levels: u32) -> Result<()> {
    if levels == 0 || levels > MAX_DWT_LEVELS {
        return Err(Error::InvalidArgument(format!(
            "dwt levels must be in 1..={MAX_DWT_LEVELS}, got {levels}"
        )));
    }
    let block = 1usize << levels;
    if len == 0 || !len.is_multiple_of(block) {
        return Err(Error::NotDyadic { len, levels });
    }
    Ok(())
}

pub fn dwt_forward<T: Real>(segment: &[T], levels: u32) -> Result<CoefficientBlock<T>> {
    check_dyadic(segment.len(), levels)?;
    let mut data = segment.to_vec();
    let mut tmp = vec![T::zero(); segment.len()];
    let s = T::FRAC_1_SQRT_2();
    let mut len = data.len();
    for _ in 0..levels {
        let half = len / 2;
        for m in 0..half {
            let (a, b) = (data[2 * m], data[2 * m + 1]);
            tmp[m] = (a + b) * s;
            tmp[half + m] = (a - b) * s;
        }
        data[..len].copy_from_slice(&tmp[..len]);
        len = half;
    }
    Ok(CoefficientBlock {
        transform: TransformKind::Dwt,
        original_length: segment.len(),
        coefficients: data,
        dwt_levels: levels,
    })
}

pub fn dwt_inverse<T: Real>(block: &CoefficientBlock<T>) -> Result<Vec<T>> {
    if block.transform != TransformKind::Dwt {
        return Err(Error::WrongTransform {
            expected: "dwt",
            found: block.transform.name(),
        });
    }
    let levels = block.dwt_levels;
    let n = block.coefficients.len();
    check_dyadic(n, levels)?;
    let mut data = block.coefficients.clone();
    let mut tmp = vec![T::zero(); n];
    let s = T::FRAC_1_SQRT_2();
    let mut half = n >> levels;
    for _ in 0..levels {
        for m in 0..half {
            let (ca, cd) = (data[m], data[half + m]);
            tmp[2 * m] = (ca + cd) * s;
            tmp[2 * m + 1] = (ca - cd) * s;
        }
        data[..2 * half].copy_from_slice(&tmp[..2 * half]);
        half *= 2;
    }
    Ok(data)
}
