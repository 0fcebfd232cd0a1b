//! Scalar abstraction for the numeric core.
//!
//! Transforms, preprocessing and metrics are written against [`Real`] so they
//! run on `f32` and `f64` alike. The wire formats (signal files, entropy
//! payloads, container) are binary64, so everything downstream of the
//! transform stage is pinned to `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by the transform core: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + rustfft::FftNum + Debug + Display + Default
{
    /// Lossless-enough conversion from an `f64` constant.
    fn from_f64_lossy(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 constant representable")
    }

    fn from_usize_lossy(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
