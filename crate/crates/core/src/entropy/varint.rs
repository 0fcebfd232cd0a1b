//! Unsigned LEB128.

use crate::error::PayloadError;

pub(crate) fn write_u64(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

/// Reads one varint starting at `*pos`, advancing it. Rejects encodings
/// longer than ten bytes or carrying bits beyond 64.
pub(crate) fn read_u64(bytes: &[u8], pos: &mut usize) -> Result<u64, PayloadError> {
    let start = *pos;
    let mut value = 0u64;
    for i in 0..10 {
        let Some(&byte) = bytes.get(*pos) else {
            return Err(PayloadError::TruncatedVarint(start));
        };
        *pos += 1;
        let bits = u64::from(byte & 0x7f);
        if i == 9 && bits > 1 {
            return Err(PayloadError::VarintOverflow(start));
        }
        value |= bits << (7 * i);
        if byte & 0x80 == 0 {
            return Ok(value);
        }
    }
    Err(PayloadError::VarintOverflow(start))
}
