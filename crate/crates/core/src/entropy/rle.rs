//! Zero-run-length coding of coefficient streams.
//!
//! Byte layout: `varint(token_count)`, then per token `varint(zero_run)`
//! followed by the value as 8 little-endian bytes, then `varint(trailing_zeros)`.
//!
//! Only the bit pattern of `+0.0` counts as a zero; `-0.0` is carried as a
//! token value so every input round-trips bit for bit.

use super::varint::{read_u64, write_u64};
use super::{check_finite, expect_codec, CodecKind, EncodedPayload};
use crate::error::{PayloadError, Result};

const POSITIVE_ZERO_BITS: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Token {
    pub zero_run: u64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    pub trailing_zeros: u64,
}

impl TokenStream {
    pub fn from_coefficients(coefficients: &[f64]) -> Self {
        let mut tokens = Vec::new();
        let mut run = 0u64;
        for &c in coefficients {
            if c.to_bits() == POSITIVE_ZERO_BITS {
                run += 1;
            } else {
                tokens.push(Token {
                    zero_run: run,
                    value: c,
                });
                run = 0;
            }
        }
        TokenStream {
            tokens,
            trailing_zeros: run,
        }
    }

    /// Number of coefficients the stream expands to, or `None` on overflow.
    pub fn decoded_len(&self) -> Option<u64> {
        self.tokens.iter().try_fold(self.trailing_zeros, |acc, t| {
            acc.checked_add(t.zero_run)?.checked_add(1)
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + self.tokens.len() * 10);
        write_u64(&mut out, self.tokens.len() as u64);
        for t in &self.tokens {
            write_u64(&mut out, t.zero_run);
            out.extend_from_slice(&t.value.to_le_bytes());
        }
        write_u64(&mut out, self.trailing_zeros);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PayloadError> {
        let mut pos = 0;
        let count = read_u64(bytes, &mut pos)?;
        // each token occupies at least 9 bytes; refuse counts the buffer cannot hold
        let capacity = (bytes.len() - pos) / 9;
        let mut tokens = Vec::with_capacity((count as usize).min(capacity));
        for _ in 0..count {
            let zero_run = read_u64(bytes, &mut pos)?;
            let raw: [u8; 8] = bytes
                .get(pos..pos + 8)
                .ok_or(PayloadError::TruncatedValue(pos))?
                .try_into()
                .expect("slice of 8");
            let value = f64::from_le_bytes(raw);
            if value.to_bits() == POSITIVE_ZERO_BITS || !value.is_finite() {
                return Err(PayloadError::BadTokenValue(pos));
            }
            pos += 8;
            tokens.push(Token { zero_run, value });
        }
        let trailing_zeros = read_u64(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(PayloadError::TrailingBytes(bytes.len() - pos));
        }
        Ok(TokenStream {
            tokens,
            trailing_zeros,
        })
    }

    pub fn expand(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.decoded_len().unwrap_or(0) as usize);
        for t in &self.tokens {
            out.extend(std::iter::repeat_n(0.0, t.zero_run as usize));
            out.push(t.value);
        }
        out.extend(std::iter::repeat_n(0.0, self.trailing_zeros as usize));
        out
    }
}

pub fn rle_encode(coefficients: &[f64]) -> Result<EncodedPayload> {
    check_finite(coefficients)?;
    Ok(EncodedPayload {
        codec: CodecKind::Rle,
        bytes: TokenStream::from_coefficients(coefficients).to_bytes(),
        decoded_length: coefficients.len(),
    })
}

pub fn rle_decode(payload: &EncodedPayload) -> Result<Vec<f64>> {
    expect_codec(payload, CodecKind::Rle)?;
    let stream = TokenStream::from_bytes(&payload.bytes)?;
    let expected = payload.decoded_length as u64;
    let actual = stream.decoded_len().unwrap_or(u64::MAX);
    if actual != expected {
        return Err(PayloadError::LengthMismatch { expected, actual }.into());
    }
    Ok(stream.expand())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;

    fn bits(v: &[f64]) -> Vec<u64> {
        v.iter().map(|x| x.to_bits()).collect()
    }

    #[test]
    fn single_interior_value() {
        let x = [0.0, 0.0, 3.5, 0.0];
        let s = TokenStream::from_coefficients(&x);
        assert_eq!(
            s.tokens,
            vec![Token {
                zero_run: 2,
                value: 3.5
            }]
        );
        assert_eq!(s.trailing_zeros, 1);
        let p = rle_encode(&x).unwrap();
        let mut golden = vec![0x01, 0x02];
        golden.extend_from_slice(&3.5f64.to_le_bytes());
        golden.push(0x01);
        assert_eq!(p.bytes, golden);
        assert_eq!(bits(&rle_decode(&p).unwrap()), bits(&x));
    }

    #[test]
    fn all_zero_is_tiny() {
        let s = TokenStream::from_coefficients(&[0.0; 4]);
        assert!(s.tokens.is_empty());
        assert_eq!(s.trailing_zeros, 4);
        let long = rle_encode(&vec![0.0; 1_000_000]).unwrap();
        assert_eq!(long.bytes.len(), 1 + 3);
    }

    #[test]
    fn single_nonzero() {
        let s = TokenStream::from_coefficients(&[1.0]);
        assert_eq!(
            s.tokens,
            vec![Token {
                zero_run: 0,
                value: 1.0
            }]
        );
        assert_eq!(s.trailing_zeros, 0);
    }

    #[test]
    fn empty_input() {
        let p = rle_encode(&[]).unwrap();
        assert_eq!(p.bytes, vec![0, 0]);
        assert!(rle_decode(&p).unwrap().is_empty());
    }

    #[test]
    fn negative_zero_survives() {
        let x = [-0.0, 0.0, -0.0];
        let p = rle_encode(&x).unwrap();
        assert_eq!(bits(&rle_decode(&p).unwrap()), bits(&x));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            rle_encode(&[1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn truncated_varint() {
        let p = EncodedPayload {
            codec: CodecKind::Rle,
            bytes: vec![0x81],
            decoded_length: 0,
        };
        assert!(matches!(
            rle_decode(&p),
            Err(Error::Payload(PayloadError::TruncatedVarint(0)))
        ));
    }

    #[test]
    fn truncated_value_and_trailing_bytes() {
        let mut p = rle_encode(&[0.0, 2.0, 0.0]).unwrap();
        let full = p.bytes.clone();
        p.bytes.truncate(5);
        assert!(matches!(
            rle_decode(&p),
            Err(Error::Payload(PayloadError::TruncatedValue(2)))
        ));
        p.bytes = full;
        p.bytes.push(0);
        assert!(matches!(
            rle_decode(&p),
            Err(Error::Payload(PayloadError::TrailingBytes(1)))
        ));
    }

    #[test]
    fn length_mismatch() {
        let mut p = rle_encode(&[0.0, 2.0, 0.0]).unwrap();
        p.decoded_length = 4;
        assert!(matches!(
            rle_decode(&p),
            Err(Error::Payload(PayloadError::LengthMismatch {
                expected: 4,
                actual: 3
            }))
        ));
    }

    #[test]
    fn huge_declared_runs_are_rejected_before_allocation() {
        let mut bytes = vec![0x00];
        bytes.extend([0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0x7f]);
        let p = EncodedPayload {
            codec: CodecKind::Rle,
            bytes,
            decoded_length: 10,
        };
        assert!(matches!(
            rle_decode(&p),
            Err(Error::Payload(PayloadError::LengthMismatch { .. }))
        ));
    }

    #[test]
    fn zero_token_value_rejected() {
        let mut bytes = vec![0x01, 0x00];
        bytes.extend(0.0f64.to_le_bytes());
        bytes.push(0x00);
        let p = EncodedPayload {
            codec: CodecKind::Rle,
            bytes,
            decoded_length: 1,
        };
        assert!(matches!(
            rle_decode(&p),
            Err(Error::Payload(PayloadError::BadTokenValue(2)))
        ));
    }

    #[test]
    fn wrong_codec() {
        let mut p = rle_encode(&[1.0]).unwrap();
        p.codec = CodecKind::Arith;
        assert!(matches!(
            rle_decode(&p),
            Err(Error::Payload(PayloadError::WrongCodec { .. }))
        ));
    }

    #[test]
    fn sparse_blocks_beat_dense() {
        let mut x = vec![0.0; 1000];
        for i in (0..1000).step_by(10) {
            x[i] = i as f64 + 0.5;
        }
        assert!(rle_encode(&x).unwrap().bytes.len() < 8 * x.len());
    }

    fn finite_f64() -> impl Strategy<Value = f64> {
        prop_oneof![
            3 => Just(0.0),
            1 => Just(-0.0),
            1 => Just(f64::MIN_POSITIVE / 4.0),
            1 => Just(f64::MAX),
            1 => Just(f64::MIN),
            4 => any::<f64>().prop_filter("finite", |v| v.is_finite()),
        ]
    }

    proptest! {
        #[test]
        fn bit_exact_round_trip(x in prop::collection::vec(finite_f64(), 0..600)) {
            let p = rle_encode(&x).unwrap();
            prop_assert_eq!(p.decoded_length, x.len());
            prop_assert_eq!(bits(&rle_decode(&p).unwrap()), bits(&x));
        }

        #[test]
        fn size_non_increasing_as_zeros_are_added(
            x in prop::collection::vec(prop_oneof![1 => Just(0.0), 1 => -5.0f64..5.0], 1..400),
            mask in prop::collection::vec(any::<bool>(), 400),
        ) {
            // zero a subset of positions in a fixed-length block
            let zeroed: Vec<f64> = x.iter().zip(&mask).map(|(&v, &m)| if m { 0.0 } else { v }).collect();
            let a = rle_encode(&x).unwrap().bytes.len();
            let b = rle_encode(&zeroed).unwrap().bytes.len();
            prop_assert!(b <= a, "{} > {}", b, a);
        }
    }
}
