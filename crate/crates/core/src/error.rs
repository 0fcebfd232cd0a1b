use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the codec can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: non-numeric cell {cell:?}")]
    NonNumeric { line: usize, cell: String },

    #[error("raw f64 file length {0} is not a multiple of 8")]
    RawLength(usize),

    #[error("sample {index} is not finite")]
    NonFinite { index: usize },

    #[error("signal is empty")]
    EmptySignal,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("length {len} is not divisible by 2^{levels}")]
    NotDyadic { len: usize, levels: u32 },

    #[error("expected a {expected} coefficient block, found {found}")]
    WrongTransform {
        expected: &'static str,
        found: &'static str,
    },

    #[error("malformed payload: {0}")]
    Payload(#[from] PayloadError),

    #[error("malformed container: {0}")]
    Container(#[from] ContainerError),

    #[error("segment {index}: {source}")]
    Segment {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_segment(self, index: usize) -> Self {
        Error::Segment {
            index,
            source: Box::new(self),
        }
    }
}

/// Decoding failures of an entropy-coded payload.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PayloadError {
    #[error("wrong codec: expected {expected}, found {found}")]
    WrongCodec {
        expected: &'static str,
        found: &'static str,
    },
    #[error("truncated varint at byte {0}")]
    TruncatedVarint(usize),
    #[error("varint overflow at byte {0}")]
    VarintOverflow(usize),
    #[error("truncated value at byte {0}")]
    TruncatedValue(usize),
    #[error("{0} trailing bytes after the token stream")]
    TrailingBytes(usize),
    #[error("token value at byte {0} is zero or not finite")]
    BadTokenValue(usize),
    #[error("token stream describes {actual} coefficients, expected {expected}")]
    LengthMismatch { expected: u64, actual: u64 },
    #[error("stream ended before the end-of-stream symbol")]
    PrematureEnd,
    #[error("decoded {0} bytes, not a multiple of 8")]
    ByteCount(usize),
    #[error("decoded non-finite coefficient at index {0}")]
    NonFinite(usize),
}

/// Structural failures while parsing a container.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainerError {
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown flag bits {0:#04x}")]
    UnknownFlags(u8),
    #[error("nonzero reserved byte {0:#04x}")]
    Reserved(u8),
    #[error("header truncated")]
    TruncatedHeader,
    #[error("invalid header field: {0}")]
    InvalidHeader(&'static str),
    #[error("segment {index}: truncated")]
    TruncatedSegment { index: usize },
    #[error("segment {index}: payload length {len} overruns the buffer")]
    PayloadOverrun { index: usize, len: u32 },
    #[error("segment {index}: {reason}")]
    InvalidSegment { index: usize, reason: &'static str },
    #[error("{0} trailing bytes after the last segment")]
    TrailingBytes(usize),
    #[error("value does not fit the container field: {0}")]
    FieldOverflow(&'static str),
}
