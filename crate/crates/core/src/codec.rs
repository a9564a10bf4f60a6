//! Encode/decode pipelines and the `.fjpg` container.
//!
//! Container layout, all integers big-endian:
//!
//! | bytes | field                                   |
//! |-------|-----------------------------------------|
//! | 4     | magic `FJPG`                            |
//! | 1     | version (1)                             |
//! | 1     | mode (0 baseline, 1 fmm)                |
//! | 4     | width                                   |
//! | 4     | height                                  |
//! | 1     | channels (1 or 3)                       |
//! | 1     | quality (1..=100)                       |
//!
//! followed, per channel, by a 4-byte payload length and the entropy-coded
//! payload. The file ends exactly after the last payload.

use rayon::prelude::*;

use crate::entropy::{decode_blocks, encode_blocks};
use crate::error::{ContainerError, Result};
use crate::fmm::{fmm_forward_samples, FMM_MAX};
use crate::image_io::{to_grayscale, Image, Plane};
use crate::quant::{dequantize, quantize, QuantTable, QuantizedBlock, DEFAULT_QUALITY};
use crate::transform::{block_count, dct_8x8, idct_8x8, merge_blocks, round_clamp, split_blocks};

pub const MAGIC: &[u8; 4] = b"FJPG";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 16;
pub const FILE_EXTENSION: &str = "fjpg";

const MAX_DIMENSION: u32 = 1 << 20;
const MAX_SAMPLES: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Baseline,
    Fmm,
}

impl Mode {
    pub fn to_byte(self) -> u8 {
        match self {
            Mode::Baseline => 0,
            Mode::Fmm => 1,
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(Mode::Baseline),
            1 => Some(Mode::Fmm),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Baseline => "baseline",
            Mode::Fmm => "fmm",
        }
    }

    /// Largest sample value the DCT stage sees in this mode.
    fn sample_max(self) -> i32 {
        match self {
            Mode::Baseline => 255,
            Mode::Fmm => i32::from(FMM_MAX),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorHandling {
    /// Code each input channel independently.
    #[default]
    PerChannel,
    /// Convert to a single luma plane first.
    Gray,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecConfig {
    pub mode: Mode,
    pub quality: u8,
    pub color: ColorHandling,
}

impl CodecConfig {
    pub fn new(mode: Mode, quality: u8) -> Result<Self> {
        if !(1..=100).contains(&quality) {
            return Err(crate::error::QuantError::QualityOutOfRange(quality.into()).into());
        }
        Ok(Self {
            mode,
            quality,
            color: ColorHandling::PerChannel,
        })
    }

    pub fn gray(mut self) -> Self {
        self.color = ColorHandling::Gray;
        self
    }
}

impl Default for CodecConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Fmm,
            quality: DEFAULT_QUALITY,
            color: ColorHandling::PerChannel,
        }
    }
}

/// Parsed container header plus per-channel payload sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub version: u8,
    pub mode: Mode,
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    pub quality: u8,
    pub payload_lengths: Vec<usize>,
}

impl Header {
    pub fn file_len(&self) -> usize {
        HEADER_LEN + self.payload_lengths.iter().map(|l| l + 4).sum::<usize>()
    }
}

fn prepare(image: &Image, config: &CodecConfig) -> Result<(Image, QuantTable)> {
    let table = QuantTable::for_quality(config.quality.into())?;
    let image = match config.color {
        ColorHandling::PerChannel => image.clone(),
        ColorHandling::Gray => to_grayscale(image),
    };
    Ok((image, table))
}

fn quantize_plane(plane: &Plane, mode: Mode, table: &QuantTable) -> Vec<QuantizedBlock> {
    let samples = match mode {
        Mode::Baseline => plane.samples().to_vec(),
        Mode::Fmm => fmm_forward_samples(plane.samples()),
    };
    let samples: Vec<i32> = samples.into_iter().map(i32::from).collect();
    split_blocks(&samples, plane.width(), plane.height())
        .iter()
        .map(|block| quantize(&dct_8x8(block), table))
        .collect()
}

/// Runs the encoder up to (and including) quantization, returning each
/// channel's quantized blocks in raster order.
pub fn quantized_planes(image: &Image, config: &CodecConfig) -> Result<Vec<Vec<QuantizedBlock>>> {
    let (image, table) = prepare(image, config)?;
    Ok(image
        .planes()
        .par_iter()
        .map(|p| quantize_plane(p, config.mode, &table))
        .collect())
}

/// Encodes an image into an `.fjpg` byte stream.
pub fn encode(image: &Image, config: &CodecConfig) -> Result<Vec<u8>> {
    let (prepared, _) = prepare(image, config)?;
    let width = u32::try_from(prepared.width()).ok().filter(|&w| w <= MAX_DIMENSION);
    let height = u32::try_from(prepared.height()).ok().filter(|&h| h <= MAX_DIMENSION);
    let (Some(width), Some(height)) = (width, height) else {
        return Err(ContainerError::BadDimensions {
            width: prepared.width().try_into().unwrap_or(u32::MAX),
            height: prepared.height().try_into().unwrap_or(u32::MAX),
        }
        .into());
    };

    let payloads = quantized_planes(&prepared, config)?
        .par_iter()
        .map(|blocks| encode_blocks(blocks))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = Vec::with_capacity(HEADER_LEN + payloads.iter().map(|p| p.len() + 4).sum::<usize>());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(config.mode.to_byte());
    out.extend_from_slice(&width.to_be_bytes());
    out.extend_from_slice(&height.to_be_bytes());
    out.push(prepared.channels() as u8);
    out.push(config.quality);
    for p in &payloads {
        out.extend_from_slice(&(p.len() as u32).to_be_bytes());
        out.extend_from_slice(p);
    }
    Ok(out)
}

fn read_u32(bytes: &[u8], at: usize) -> Result<u32, ContainerError> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes(b.try_into().unwrap()))
        .ok_or(ContainerError::Truncated {
            needed: at + 4,
            available: bytes.len(),
        })
}

/// Parses and validates the header without touching the payloads.
pub fn inspect(bytes: &[u8]) -> Result<Header, ContainerError> {
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(ContainerError::BadMagic);
        }
        return Err(ContainerError::Truncated {
            needed: HEADER_LEN,
            available: bytes.len(),
        });
    }
    if &bytes[..4] != MAGIC {
        return Err(ContainerError::BadMagic);
    }
    let version = bytes[4];
    if version != VERSION {
        return Err(ContainerError::BadVersion(version));
    }
    let mode = Mode::from_byte(bytes[5]).ok_or(ContainerError::BadMode(bytes[5]))?;
    let width = read_u32(bytes, 6)?;
    let height = read_u32(bytes, 10)?;
    if width == 0
        || height == 0
        || width > MAX_DIMENSION
        || height > MAX_DIMENSION
        || u64::from(width) * u64::from(height) > MAX_SAMPLES
    {
        return Err(ContainerError::BadDimensions { width, height });
    }
    let channels = bytes[14];
    if channels != 1 && channels != 3 {
        return Err(ContainerError::BadChannels(channels));
    }
    let quality = bytes[15];
    if !(1..=100).contains(&quality) {
        return Err(ContainerError::BadQuality(quality));
    }

    let mut payload_lengths = Vec::with_capacity(channels.into());
    let mut at = HEADER_LEN;
    for _ in 0..channels {
        let len = read_u32(bytes, at)? as usize;
        at += 4;
        payload_lengths.push(len);
        at = at.saturating_add(len);
    }
    if at != bytes.len() {
        return Err(ContainerError::LengthMismatch {
            declared: payload_lengths.iter().sum(),
            header: HEADER_LEN + 4 * payload_lengths.len(),
            actual: bytes.len(),
        });
    }
    Ok(Header {
        version,
        mode,
        width,
        height,
        channels,
        quality,
        payload_lengths,
    })
}

/// Decodes an `.fjpg` byte stream.
pub fn decode(bytes: &[u8]) -> Result<Image> {
    let header = inspect(bytes)?;
    let (width, height) = (header.width as usize, header.height as usize);
    let table = QuantTable::for_quality(header.quality.into())?;
    let blocks = block_count(width, height);

    let mut payloads = Vec::with_capacity(header.payload_lengths.len());
    let mut at = HEADER_LEN;
    for &len in &header.payload_lengths {
        at += 4;
        payloads.push(&bytes[at..at + len]);
        at += len;
    }

    let mode = header.mode;
    let planes = payloads
        .par_iter()
        .enumerate()
        .map(|(channel, payload)| {
            let quantized = decode_blocks(payload, blocks)
                .map_err(|source| ContainerError::Payload { channel, source })?;
            let samples: Vec<[u8; 64]> = quantized
                .iter()
                .map(|q| {
                    let spatial = idct_8x8(&dequantize(q, &table));
                    round_clamp(&spatial, 0, mode.sample_max()).map(|v| v as u8)
                })
                .collect();
            let mut merged = merge_blocks(&samples, width, height)?;
            if mode == Mode::Fmm {
                // clamped to 0..=51 above, so the product stays within 255
                merged.iter_mut().for_each(|s| *s *= 5);
            }
            Plane::new(width, height, merged)
        })
        .collect::<Result<Vec<_>>>()?;
    Image::from_planes(planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn gradient(w: usize, h: usize) -> Image {
        let s = (0..w * h).map(|i| ((i % w) * 255 / w.max(1)) as u8).collect();
        Image::new(w, h, vec![s]).unwrap()
    }

    #[test]
    fn header_round_trip() {
        let img = gradient(20, 9);
        let bytes = encode(&img, &CodecConfig::new(Mode::Fmm, 60).unwrap()).unwrap();
        let h = inspect(&bytes).unwrap();
        assert_eq!((h.version, h.mode, h.width, h.height, h.channels, h.quality), (1, Mode::Fmm, 20, 9, 1, 60));
        assert_eq!(h.file_len(), bytes.len());
        assert_eq!(&bytes[..6], b"FJPG\x01\x01");
        assert_eq!(&bytes[6..14], &[0, 0, 0, 20, 0, 0, 0, 9]);
    }

    #[test]
    fn header_errors() {
        let img = gradient(8, 8);
        let good = encode(&img, &CodecConfig::new(Mode::Baseline, 50).unwrap()).unwrap();

        let mut bad = good.clone();
        bad[0] = b'X';
        assert_eq!(inspect(&bad), Err(ContainerError::BadMagic));
        let mut bad = good.clone();
        bad[4] = 2;
        assert_eq!(inspect(&bad), Err(ContainerError::BadVersion(2)));
        let mut bad = good.clone();
        bad[5] = 7;
        assert_eq!(inspect(&bad), Err(ContainerError::BadMode(7)));
        let mut bad = good.clone();
        bad[14] = 2;
        assert_eq!(inspect(&bad), Err(ContainerError::BadChannels(2)));
        let mut bad = good.clone();
        bad[15] = 0;
        assert_eq!(inspect(&bad), Err(ContainerError::BadQuality(0)));
        let mut bad = good.clone();
        bad[6..10].copy_from_slice(&0u32.to_be_bytes());
        assert!(matches!(inspect(&bad), Err(ContainerError::BadDimensions { .. })));
        let mut bad = good.clone();
        bad[6..10].copy_from_slice(&u32::MAX.to_be_bytes());
        assert!(matches!(inspect(&bad), Err(ContainerError::BadDimensions { .. })));

        let mut long = good.clone();
        long.push(0);
        let payload = good.len() - HEADER_LEN - 4;
        assert_eq!(
            inspect(&long),
            Err(ContainerError::LengthMismatch {
                declared: payload,
                header: 20,
                actual: good.len() + 1
            })
        );
        assert!(matches!(inspect(&good[..good.len() - 1]), Err(ContainerError::LengthMismatch { .. })));
        assert!(matches!(inspect(&good[..10]), Err(ContainerError::Truncated { .. })));
        assert!(matches!(inspect(&good[..17]), Err(ContainerError::Truncated { .. })));
    }

    #[test]
    fn oversized_dimensions_with_tiny_payload_fail_cleanly() {
        let mut bytes = b"FJPG\x01\x00".to_vec();
        bytes.extend_from_slice(&(1u32 << 15).to_be_bytes());
        bytes.extend_from_slice(&(1u32 << 15).to_be_bytes());
        bytes.extend_from_slice(&[1, 75, 0, 0, 0, 1, 0x28]);
        assert!(matches!(
            decode(&bytes),
            Err(Error::Container(ContainerError::Payload { channel: 0, .. }))
        ));
    }

    #[test]
    fn quality_validated() {
        assert!(CodecConfig::new(Mode::Fmm, 0).is_err());
        assert!(CodecConfig::new(Mode::Fmm, 101).is_err());
    }
}
