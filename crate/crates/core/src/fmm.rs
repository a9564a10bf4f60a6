//! Five-modulus pre-transform.
//!
//! Forward: snap each intensity to a multiple of five using the residue
//! rules below, then divide by five, giving samples in `0..=51`.
//! Inverse: multiply by five.
//!
//! The rule is per pixel, so it is applied to whole planes rather than to
//! individual 8×8 blocks; the result is identical.

use crate::error::{Error, FmmError, Result};
use crate::image_io::Plane;

/// Largest value a forward-transformed sample can take (`255 / 5`).
pub const FMM_MAX: u8 = 51;

/// A plane of five-modulus samples, each in `0..=51`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FmmPlane {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl FmmPlane {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = samples.iter().find(|&&s| s > FMM_MAX) {
            return Err(FmmError::SampleOutOfRange(bad).into());
        }
        if width == 0 || height == 0 || width.checked_mul(height) != Some(samples.len()) {
            return Err(Error::Image(format!(
                "fmm plane of {width}x{height} cannot hold {} samples",
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }
}

/// Snaps an intensity to a multiple of five.
///
/// Residue 4 adds 1, residue 3 adds 2, residue 2 subtracts 2, residue 1
/// subtracts 1. On integers this is the same as rounding to the nearest
/// multiple of five, and 255 (a multiple of five) bounds the output.
pub fn fmm_round(p: i32) -> Result<u8, FmmError> {
    let p = u8::try_from(p).map_err(|_| FmmError::IntensityOutOfRange(p))?;
    Ok(snap(p))
}

#[inline]
pub(crate) fn snap(p: u8) -> u8 {
    match p % 5 {
        4 => p + 1,
        3 => p + 2,
        2 => p - 2,
        1 => p - 1,
        _ => p,
    }
}

/// Forward transform of one plane.
pub fn fmm_forward(plane: &Plane) -> FmmPlane {
    FmmPlane {
        width: plane.width(),
        height: plane.height(),
        samples: fmm_forward_samples(plane.samples()),
    }
}

/// Forward transform of a bare sample slice.
pub fn fmm_forward_samples(samples: &[u8]) -> Vec<u8> {
    samples.iter().map(|&p| snap(p) / 5).collect()
}

/// Inverse transform: every sample times five.
pub fn fmm_inverse(plane: &FmmPlane) -> Plane {
    let samples = plane.samples.iter().map(|&s| s * 5).collect();
    Plane::new(plane.width, plane.height, samples).expect("dimensions already validated")
}
