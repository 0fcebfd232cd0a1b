//! Adaptive order-0 arithmetic coder over bytes, in the integer
//! low/high/pending-bits formulation with 32-bit code values.
//!
//! Alphabet: the 256 byte values plus an end-of-stream symbol. Every
//! frequency starts at 1 and grows by 1 per occurrence; once the total reaches
//! 2^14 all frequencies are halved (rounding down, never below 1). Bits are
//! packed most-significant first; the final byte is zero-padded.

use super::{check_finite, expect_codec, CodecKind, EncodedPayload};
use crate::error::{PayloadError, Result};

const CODE_BITS: u32 = 32;
const TOP: u64 = (1 << CODE_BITS) - 1;
const FIRST_QTR: u64 = 1 << (CODE_BITS - 2);
const HALF: u64 = 2 * FIRST_QTR;
const THIRD_QTR: u64 = 3 * FIRST_QTR;

const EOS: usize = 256;
const SYMBOLS: usize = 257;
const MAX_TOTAL: u32 = 1 << 14;

/// Frequency table backed by a Fenwick tree for O(log n) cumulative lookups.
#[derive(Clone)]
struct Model {
    freq: [u32; SYMBOLS],
    tree: [u32; SYMBOLS + 1],
    total: u32,
}

impl Model {
    fn new() -> Self {
        let mut m = Model {
            freq: [1; SYMBOLS],
            tree: [0; SYMBOLS + 1],
            total: 0,
        };
        m.rebuild();
        m
    }

    fn rebuild(&mut self) {
        self.tree = [0; SYMBOLS + 1];
        for i in 1..=SYMBOLS {
            self.tree[i] += self.freq[i - 1];
            let parent = i + (i & i.wrapping_neg());
            if parent <= SYMBOLS {
                self.tree[parent] += self.tree[i];
            }
        }
        self.total = self.freq.iter().sum();
    }

    /// Sum of frequencies of symbols below `symbol`.
    fn cum_low(&self, symbol: usize) -> u32 {
        let mut i = symbol;
        let mut sum = 0;
        while i > 0 {
            sum += self.tree[i];
            i &= i - 1;
        }
        sum
    }

    /// Symbol whose cumulative interval contains `target` (< total).
    fn find(&self, target: u32) -> usize {
        let mut pos = 0;
        let mut remaining = target;
        let mut step = 1usize << (usize::BITS - 1 - SYMBOLS.leading_zeros());
        while step > 0 {
            let next = pos + step;
            if next <= SYMBOLS && self.tree[next] <= remaining {
                pos = next;
                remaining -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }

    fn update(&mut self, symbol: usize) {
        self.freq[symbol] += 1;
        self.total += 1;
        let mut i = symbol + 1;
        while i <= SYMBOLS {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
        if self.total >= MAX_TOTAL {
            for f in self.freq.iter_mut() {
                *f = (*f / 2).max(1);
            }
            self.rebuild();
        }
    }
}

struct BitWriter {
    out: Vec<u8>,
    current: u8,
    filled: u32,
}

impl BitWriter {
    fn push(&mut self, bit: bool) {
        self.current = (self.current << 1) | u8::from(bit);
        self.filled += 1;
        if self.filled == 8 {
            self.out.push(self.current);
            self.current = 0;
            self.filled = 0;
        }
    }

    fn finish(mut self) -> Vec<u8> {
        if self.filled > 0 {
            self.out.push(self.current << (8 - self.filled));
        }
        self.out
    }
}

struct Encoder {
    model: Model,
    low: u64,
    high: u64,
    pending: u64,
    bits: BitWriter,
}

impl Encoder {
    fn new(capacity: usize) -> Self {
        Encoder {
            model: Model::new(),
            low: 0,
            high: TOP,
            pending: 0,
            bits: BitWriter {
                out: Vec::with_capacity(capacity),
                current: 0,
                filled: 0,
            },
        }
    }

    fn emit(&mut self, bit: bool) {
        self.bits.push(bit);
        for _ in 0..self.pending {
            self.bits.push(!bit);
        }
        self.pending = 0;
    }

    fn encode(&mut self, symbol: usize) {
        let range = self.high - self.low + 1;
        let total = u64::from(self.model.total);
        let lo = u64::from(self.model.cum_low(symbol));
        let hi = lo + u64::from(self.model.freq[symbol]);
        self.high = self.low + range * hi / total - 1;
        self.low += range * lo / total;
        loop {
            if self.high < HALF {
                self.emit(false);
            } else if self.low >= HALF {
                self.emit(true);
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= FIRST_QTR && self.high < THIRD_QTR {
                self.pending += 1;
                self.low -= FIRST_QTR;
                self.high -= FIRST_QTR;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
        }
        self.model.update(symbol);
    }

    fn finish(mut self) -> Vec<u8> {
        self.encode(EOS);
        self.pending += 1;
        let bit = self.low >= FIRST_QTR;
        self.emit(bit);
        self.bits.finish()
    }
}

struct Decoder<'a> {
    model: Model,
    input: &'a [u8],
    bit_pos: usize,
    low: u64,
    high: u64,
    value: u64,
}

impl<'a> Decoder<'a> {
    fn new(input: &'a [u8]) -> Result<Self, PayloadError> {
        let mut d = Decoder {
            model: Model::new(),
            input,
            bit_pos: 0,
            low: 0,
            high: TOP,
            value: 0,
        };
        for _ in 0..CODE_BITS {
            d.value = (d.value << 1) | d.next_bit()?;
        }
        Ok(d)
    }

    /// Bits past the end read as zero; the encoder's flush guarantees at most
    /// `CODE_BITS - 2` of them are needed.
    fn next_bit(&mut self) -> Result<u64, PayloadError> {
        let byte = self.bit_pos / 8;
        let bit = match self.input.get(byte) {
            Some(b) => u64::from((b >> (7 - self.bit_pos % 8)) & 1),
            None => {
                let garbage = self.bit_pos - 8 * self.input.len();
                if garbage >= (CODE_BITS - 2) as usize {
                    return Err(PayloadError::PrematureEnd);
                }
                0
            }
        };
        self.bit_pos += 1;
        Ok(bit)
    }

    fn decode(&mut self) -> Result<usize, PayloadError> {
        let range = self.high - self.low + 1;
        let total = u64::from(self.model.total);
        let target = ((self.value - self.low + 1) * total - 1) / range;
        let symbol = self.model.find(target as u32);
        let lo = u64::from(self.model.cum_low(symbol));
        let hi = lo + u64::from(self.model.freq[symbol]);
        self.high = self.low + range * hi / total - 1;
        self.low += range * lo / total;
        loop {
            if self.high < HALF {
                // lower half: shift only
            } else if self.low >= HALF {
                self.value -= HALF;
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= FIRST_QTR && self.high < THIRD_QTR {
                self.value -= FIRST_QTR;
                self.low -= FIRST_QTR;
                self.high -= FIRST_QTR;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
            self.value = (self.value << 1) | self.next_bit()?;
        }
        self.model.update(symbol);
        Ok(symbol)
    }
}

/// Arithmetic-codes `data` followed by the end-of-stream symbol.
pub fn encode_bytes(data: &[u8]) -> Vec<u8> {
    let mut enc = Encoder::new(data.len() / 2 + 8);
    for &b in data {
        enc.encode(usize::from(b));
    }
    enc.finish()
}

/// Decodes up to the end-of-stream symbol, failing if more than `max_len`
/// bytes come out first or if input bytes remain unread.
pub fn decode_bytes(encoded: &[u8], max_len: usize) -> Result<Vec<u8>, PayloadError> {
    let mut dec = Decoder::new(encoded)?;
    let mut out = Vec::with_capacity(max_len.min(encoded.len().saturating_mul(8)));
    loop {
        let symbol = dec.decode()?;
        if symbol == EOS {
            break;
        }
        if out.len() == max_len {
            return Err(PayloadError::LengthMismatch {
                expected: max_len as u64,
                actual: max_len as u64 + 1,
            });
        }
        out.push(symbol as u8);
    }
    if dec.bit_pos < 8 * encoded.len() {
        return Err(PayloadError::TrailingBytes(
            encoded.len() - dec.bit_pos.div_ceil(8),
        ));
    }
    Ok(out)
}

pub fn arith_encode(coefficients: &[f64]) -> Result<EncodedPayload> {
    check_finite(coefficients)?;
    let raw: Vec<u8> = coefficients.iter().flat_map(|c| c.to_le_bytes()).collect();
    Ok(EncodedPayload {
        codec: CodecKind::Arith,
        bytes: encode_bytes(&raw),
        decoded_length: coefficients.len(),
    })
}

pub fn arith_decode(payload: &EncodedPayload) -> Result<Vec<f64>> {
    expect_codec(payload, CodecKind::Arith)?;
    let max_bytes = payload.decoded_length.saturating_mul(8);
    let raw = decode_bytes(&payload.bytes, max_bytes)?;
    if raw.len() % 8 != 0 {
        return Err(PayloadError::ByteCount(raw.len()).into());
    }
    if raw.len() != max_bytes {
        return Err(PayloadError::LengthMismatch {
            expected: payload.decoded_length as u64,
            actual: (raw.len() / 8) as u64,
        }
        .into());
    }
    let mut out = Vec::with_capacity(payload.decoded_length);
    for (i, chunk) in raw.chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().expect("chunk of 8"));
        if !v.is_finite() {
            return Err(PayloadError::NonFinite(i).into());
        }
        out.push(v);
    }
    Ok(out)
}
