use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Top-level error for the codec and its tooling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pnm: {0}")]
    Pnm(#[from] PnmError),
    #[error("fmm: {0}")]
    Fmm(#[from] FmmError),
    #[error("blocks: {0}")]
    Blocks(#[from] BlockError),
    #[error("quantization: {0}")]
    Quant(#[from] QuantError),
    #[error("entropy: {0}")]
    Entropy(#[from] EntropyError),
    #[error("container: {0}")]
    Container(#[from] ContainerError),
    #[error("metrics: {0}")]
    Metrics(#[from] MetricsError),
    #[error("image: {0}")]
    Image(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnmError {
    #[error("unknown magic number at byte {offset}")]
    BadMagic { offset: usize },
    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: &'static str },
    #[error("maxval {maxval} at byte {offset} unsupported, only 255 is accepted")]
    UnsupportedMaxval { offset: usize, maxval: u32 },
    #[error("payload truncated at byte {offset}: expected {expected} samples, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid sample at byte {offset}")]
    BadSample { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FmmError {
    #[error("intensity {0} outside 0..=255")]
    IntensityOutOfRange(i32),
    #[error("fmm sample {0} outside 0..=51")]
    SampleOutOfRange(u8),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("expected {expected} blocks for a {width}x{height} plane, got {actual}")]
    CountMismatch {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },
    #[error("plane dimensions must be non-zero")]
    EmptyPlane,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantError {
    #[error("quality {0} outside 1..=100")]
    QualityOutOfRange(i32),
    #[error("table entry {value} at index {index} outside 1..=255")]
    BadEntry { index: usize, value: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntropyError {
    #[error("bitstream truncated in block {block}")]
    Truncated { block: usize },
    #[error("invalid huffman code in block {block}")]
    InvalidCode { block: usize },
    #[error("run past coefficient 63 in block {block}")]
    RunOverflow { block: usize },
    #[error("magnitude {value} in block {block} needs more than 15 bits")]
    MagnitudeTooLarge { block: usize, value: i64 },
    #[error("dc predictor overflow in block {block}")]
    DcOverflow { block: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContainerError {
    #[error("bad magic, expected \"FJPG\"")]
    BadMagic,
    #[error("unsupported version {0}")]
    BadVersion(u8),
    #[error("unknown mode byte {0}")]
    BadMode(u8),
    #[error("unsupported channel count {0}")]
    BadChannels(u8),
    #[error("quality {0} outside 1..=100")]
    BadQuality(u8),
    #[error("dimensions {width}x{height} are zero or too large")]
    BadDimensions { width: u32, height: u32 },
    #[error("file truncated: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
    #[error("payload lengths sum to {declared} bytes plus {header} header bytes, file is {actual} bytes")]
    LengthMismatch {
        declared: usize,
        header: usize,
        actual: usize,
    },
    #[error("channel {channel}: {source}")]
    Payload {
        channel: usize,
        #[source]
        source: EntropyError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("coded size must be non-zero")]
    ZeroCodedBytes,
    #[error("raw size must be non-zero")]
    ZeroRawBytes,
    #[error("need at least two values, got {0}")]
    TooFewValues(usize),
}
