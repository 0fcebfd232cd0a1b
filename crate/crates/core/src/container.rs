//! Binary container for compressed signals.
//!
//! ```text
//! offset size  field
//! 0      4     magic "BZP1"
//! 4      1     version (1)
//! 5      1     flags: bit0 transform (0 DCT, 1 DWT), bit1 codec (0 RLE, 1 ARITH)
//! 6      1     dwt_levels
//! 7      1     reserved (0)
//! 8      8     mu            f64
//! 16     8     sigma         f64
//! 24     8     sample_rate   f64
//! 32     4     segment_count u32
//! 36     ...   per segment: original_length u32, pad_length u32,
//!              payload_length u32, payload bytes
//! ```
//!
//! All integers and floats are little-endian.

use crate::entropy::{CodecKind, EncodedPayload};
use crate::error::{ContainerError, Result};
use crate::preprocess::StandardizationParams;
use crate::transform::{TransformKind, MAX_DWT_LEVELS};

pub const MAGIC: [u8; 4] = *b"BZP1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 36;
pub const SEGMENT_OVERHEAD: usize = 12;

const FLAG_DWT: u8 = 0b01;
const FLAG_ARITH: u8 = 0b10;

#[derive(Debug, Clone, PartialEq)]
pub struct CompressedSegment {
    pub transform: TransformKind,
    pub codec: CodecKind,
    pub dwt_levels: u32,
    pub pad_length: usize,
    pub original_length: usize,
    pub payload: EncodedPayload,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressedFile {
    pub params: StandardizationParams<f64>,
    pub sample_rate: f64,
    pub transform: TransformKind,
    pub codec: CodecKind,
    pub dwt_levels: u32,
    pub segments: Vec<CompressedSegment>,
}

impl CompressedFile {
    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// Sum of pre-pad sample counts over all segments.
    pub fn sample_count(&self) -> usize {
        self.segments.iter().map(|s| s.original_length).sum()
    }

    /// Checks the invariants `serialize` relies on.
    pub fn validate(&self) -> Result<(), ContainerError> {
        let p = &self.params;
        if !p.mu.is_finite() {
            return Err(ContainerError::InvalidHeader("mu is not finite"));
        }
        if !(p.sigma.is_finite() && p.sigma > 0.0) {
            return Err(ContainerError::InvalidHeader(
                "sigma must be finite and > 0",
            ));
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(ContainerError::InvalidHeader(
                "sample rate must be finite and > 0",
            ));
        }
        if self.dwt_levels == 0 || self.dwt_levels > MAX_DWT_LEVELS {
            return Err(ContainerError::InvalidHeader("dwt_levels out of range"));
        }
        if self.segments.is_empty() {
            return Err(ContainerError::InvalidHeader("segment_count is zero"));
        }
        if u32::try_from(self.segments.len()).is_err() {
            return Err(ContainerError::FieldOverflow("segment_count"));
        }
        let block = 1usize << self.dwt_levels;
        for (index, s) in self.segments.iter().enumerate() {
            let invalid = |reason| ContainerError::InvalidSegment { index, reason };
            if s.transform != self.transform
                || s.codec != self.codec
                || s.payload.codec != self.codec
                || s.dwt_levels != self.dwt_levels
            {
                return Err(invalid("segment pipeline differs from header"));
            }
            if s.original_length == 0 {
                return Err(invalid("original_length is zero"));
            }
            let decoded = s
                .original_length
                .checked_add(s.pad_length)
                .ok_or(invalid("length overflow"))?;
            if s.payload.decoded_length != decoded {
                return Err(invalid("payload length disagrees with original + pad"));
            }
            match self.transform {
                TransformKind::Dct if s.pad_length != 0 => {
                    return Err(invalid("DCT segment with padding"));
                }
                TransformKind::Dwt if s.pad_length >= block || decoded % block != 0 => {
                    return Err(invalid("DWT padding inconsistent with levels"));
                }
                _ => {}
            }
            for (v, name) in [
                (s.original_length, "original_length"),
                (s.pad_length, "pad_length"),
                (s.payload.bytes.len(), "payload_length"),
            ] {
                if u32::try_from(v).is_err() {
                    return Err(ContainerError::FieldOverflow(name));
                }
            }
        }
        Ok(())
    }
}

pub fn serialize(file: &CompressedFile) -> Result<Vec<u8>> {
    file.validate()?;
    let mut out = Vec::with_capacity(compressed_size(file));
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    let mut flags = 0;
    if file.transform == TransformKind::Dwt {
        flags |= FLAG_DWT;
    }
    if file.codec == CodecKind::Arith {
        flags |= FLAG_ARITH;
    }
    out.push(flags);
    out.push(file.dwt_levels as u8);
    out.push(0);
    out.extend_from_slice(&file.params.mu.to_le_bytes());
    out.extend_from_slice(&file.params.sigma.to_le_bytes());
    out.extend_from_slice(&file.sample_rate.to_le_bytes());
    out.extend_from_slice(&(file.segments.len() as u32).to_le_bytes());
    for s in &file.segments {
        out.extend_from_slice(&(s.original_length as u32).to_le_bytes());
        out.extend_from_slice(&(s.pad_length as u32).to_le_bytes());
        out.extend_from_slice(&(s.payload.bytes.len() as u32).to_le_bytes());
        out.extend_from_slice(&s.payload.bytes);
    }
    Ok(out)
}

/// Bytes `serialize` would produce, headers included.
pub fn compressed_size(file: &CompressedFile) -> usize {
    HEADER_LEN
        + file
            .segments
            .iter()
            .map(|s| SEGMENT_OVERHEAD + s.payload.bytes.len())
            .sum::<usize>()
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        let s = self.bytes.get(self.pos..end)?;
        self.pos = end;
        Some(s)
    }

    fn u8(&mut self) -> Option<u8> {
        self.take(1).map(|b| b[0])
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4)
            .map(|b| u32::from_le_bytes(b.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Option<f64> {
        self.take(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<CompressedFile> {
    Ok(parse(bytes)?)
}

fn parse(bytes: &[u8]) -> Result<CompressedFile, ContainerError> {
    let mut r = Reader { bytes, pos: 0 };
    let magic: [u8; 4] = match r.take(4) {
        Some(m) => m.try_into().expect("4 bytes"),
        None => {
            let mut m = [0u8; 4];
            m[..bytes.len()].copy_from_slice(bytes);
            return Err(ContainerError::BadMagic(m));
        }
    };
    if magic != MAGIC {
        return Err(ContainerError::BadMagic(magic));
    }
    let truncated = ContainerError::TruncatedHeader;
    let version = r.u8().ok_or(truncated.clone())?;
    if version != VERSION {
        return Err(ContainerError::UnsupportedVersion(version));
    }
    let flags = r.u8().ok_or(truncated.clone())?;
    if flags & !(FLAG_DWT | FLAG_ARITH) != 0 {
        return Err(ContainerError::UnknownFlags(flags));
    }
    let dwt_levels = u32::from(r.u8().ok_or(truncated.clone())?);
    let reserved = r.u8().ok_or(truncated.clone())?;
    if reserved != 0 {
        return Err(ContainerError::Reserved(reserved));
    }
    let mu = r.f64().ok_or(truncated.clone())?;
    let sigma = r.f64().ok_or(truncated.clone())?;
    let sample_rate = r.f64().ok_or(truncated.clone())?;
    let segment_count = r.u32().ok_or(truncated)? as usize;

    let transform = if flags & FLAG_DWT != 0 {
        TransformKind::Dwt
    } else {
        TransformKind::Dct
    };
    let codec = if flags & FLAG_ARITH != 0 {
        CodecKind::Arith
    } else {
        CodecKind::Rle
    };

    // every segment needs at least its 12-byte table entry
    let max_segments = (bytes.len() - r.pos) / SEGMENT_OVERHEAD;
    let mut segments = Vec::with_capacity(segment_count.min(max_segments));
    for index in 0..segment_count {
        let trunc = ContainerError::TruncatedSegment { index };
        let original_length = r.u32().ok_or(trunc.clone())? as usize;
        let pad_length = r.u32().ok_or(trunc.clone())? as usize;
        let payload_len = r.u32().ok_or(trunc)?;
        let payload = r
            .take(payload_len as usize)
            .ok_or(ContainerError::PayloadOverrun {
                index,
                len: payload_len,
            })?;
        segments.push(CompressedSegment {
            transform,
            codec,
            dwt_levels,
            pad_length,
            original_length,
            payload: EncodedPayload {
                codec,
                bytes: payload.to_vec(),
                decoded_length: original_length + pad_length,
            },
        });
    }
    if r.pos != bytes.len() {
        return Err(ContainerError::TrailingBytes(bytes.len() - r.pos));
    }

    let file = CompressedFile {
        params: StandardizationParams { mu, sigma },
        sample_rate,
        transform,
        codec,
        dwt_levels,
        segments,
    };
    file.validate()?;
    Ok(file)
}
