//! Lossy block-DCT image codec with two pipelines sharing one bitstream
//! format:
//!
//! * **baseline**: 8×8 DCT, quality-scaled quantization, zigzag, DC DPCM,
//!   AC run-length and fixed Huffman coding.
//! * **fmm**: every sample is first snapped to its nearest multiple of five
//!   and divided by five (range `0..=51`), then fed through the baseline
//!   chain. The decoder multiplies the reconstruction by five.
//!
//! The crate also carries the measurement tools used to compare the two
//! pipelines (MSE/PSNR, compression ratio, standard deviations, non-zero
//! coefficient counts) and the `fjpeg` command-line front end.

pub mod cli;
pub mod codec;
pub mod entropy;
pub mod error;
pub mod fmm;
pub mod image_io;
pub mod metrics;
pub mod quant;
pub mod reference;
pub mod transform;

pub use codec::{decode, encode, inspect, CodecConfig, ColorHandling, Header, Mode};
pub use error::{Error, Result};
pub use image_io::{read_pnm, to_grayscale, write_pnm, Image, Plane};
