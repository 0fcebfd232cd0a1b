//! Lossless back ends: zero-run RLE over binary64 coefficients and an adaptive
//! order-0 arithmetic coder over their byte serialization.

mod arith;
mod rle;
mod varint;

use serde::{Deserialize, Serialize};

pub use arith::{arith_decode, arith_encode, decode_bytes, encode_bytes};
pub use rle::{rle_decode, rle_encode, Token, TokenStream};

use crate::error::{Error, PayloadError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodecKind {
    Rle,
    Arith,
}

impl CodecKind {
    pub fn name(self) -> &'static str {
        match self {
            CodecKind::Rle => "rle",
            CodecKind::Arith => "arith",
        }
    }
}

impl std::fmt::Display for CodecKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CodecKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rle" => Ok(CodecKind::Rle),
            "arith" | "arithmetic" => Ok(CodecKind::Arith),
            other => Err(Error::InvalidArgument(format!("unknown codec {other:?}"))),
        }
    }
}

/// Entropy-coded coefficients. `decoded_length` is the coefficient count
/// the bytes expand to; it travels in the container header, not in `bytes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedPayload {
    pub codec: CodecKind,
    pub bytes: Vec<u8>,
    pub decoded_length: usize,
}

pub fn encode(codec: CodecKind, coefficients: &[f64]) -> Result<EncodedPayload> {
    match codec {
        CodecKind::Rle => rle_encode(coefficients),
        CodecKind::Arith => arith_encode(coefficients),
    }
}

pub fn decode(payload: &EncodedPayload) -> Result<Vec<f64>> {
    match payload.codec {
        CodecKind::Rle => rle_decode(payload),
        CodecKind::Arith => arith_decode(payload),
    }
}

fn check_finite(coefficients: &[f64]) -> Result<()> {
    match coefficients.iter().position(|c| !c.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn expect_codec(payload: &EncodedPayload, expected: CodecKind) -> Result<(), PayloadError> {
    if payload.codec != expected {
        return Err(PayloadError::WrongCodec {
            expected: expected.name(),
            found: payload.codec.name(),
        });
    }
    Ok(())
}
