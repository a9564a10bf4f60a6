//! The worked 8×8 example: an original block, its five-modulus forms, the
//! DCT of both, and the dispersion figures quoted for them.
//!
//! The reference DCT matrices hold integers truncated toward zero, so every
//! exactly computed coefficient lies within 1.0 of its reference cell.

use crate::fmm::{fmm_round, snap};
use crate::metrics::std_dev;
use crate::quant::{quantize, QuantTable};
use crate::transform::{dct_8x8, CoefBlock, SampleBlock, BLOCK_LEN};

#[rustfmt::skip]
pub const ORIGINAL_BLOCK: SampleBlock = [
    106,  98, 104, 102, 109, 110, 107, 113,
    103, 107, 104, 110, 109, 110, 110, 113,
    106, 106, 105, 110, 111, 107, 104, 108,
    104, 105, 110, 111, 109, 108, 110, 104,
    106, 106, 119, 113, 111, 107, 109, 108,
    106, 104, 101, 105, 104, 104, 107, 113,
     97, 103, 104, 101, 102, 104, 106, 110,
    103, 106, 110, 105, 103, 105, 103, 108,
];

/// Original block snapped to multiples of five.
#[rustfmt::skip]
pub const SNAPPED_BLOCK: SampleBlock = [
    105, 100, 105, 100, 110, 110, 105, 115,
    105, 105, 105, 110, 110, 110, 110, 115,
    105, 105, 105, 110, 110, 105, 105, 110,
    105, 105, 110, 110, 110, 110, 110, 105,
    105, 105, 120, 115, 110, 105, 110, 110,
    105, 105, 100, 105, 105, 105, 105, 115,
     95, 105, 105, 100, 100, 105, 105, 110,
    105, 105, 110, 105, 105, 105, 105, 110,
];

/// Snapped block divided by five.
#[rustfmt::skip]
pub const FMM_BLOCK: SampleBlock = [
    21, 20, 21, 20, 22, 22, 21, 23,
    21, 21, 21, 22, 22, 22, 22, 23,
    21, 21, 21, 22, 22, 21, 21, 22,
    21, 21, 22, 22, 22, 22, 22, 21,
    21, 21, 24, 23, 22, 21, 22, 22,
    21, 21, 20, 21, 21, 21, 21, 23,
    19, 21, 21, 20, 20, 21, 21, 22,
    21, 21, 22, 21, 21, 21, 21, 22,
];

#[rustfmt::skip]
pub const ORIGINAL_DCT: [i32; BLOCK_LEN] = [
    853, -10,  -2,  -6,   2,   0,   2,   0,
      7,  -3,  -2,   6,   4,   0,   0,   0,
     -8,  -5,   6,   1,   0,  -4,   3,  -1,
      0,  -5,   5,   0,   1,   0,   2,   2,
      4,   4,  -4,  -1,  -3,   3,   5,   5,
     -8,  -3,   1,   3,   0,   0,   0,   1,
     -1,   2,   3,   3,   5,  -1,   1,   0,
      1,   2,  -3,  -2,   0,  -1,   3,   3,
];

#[rustfmt::skip]
pub const FMM_DCT: [i32; BLOCK_LEN] = [
    170,  -2,   0,  -1,   0,   0,   0,   0,
      1,   0,   0,   1,   1,   0,   0,   0,
     -1,  -1,   1,   0,   0,  -1,   0,   0,
      0,   0,   0,   0,   0,   0,   0,   0,
      1,   0,   0,   0,   0,   0,   0,   1,
     -1,   0,   0,   0,   0,   0,   0,   0,
      0,   0,   0,   0,   1,   0,   0,   0,
      0,   0,   0,  -1,   0,   0,   0,   0,
];

pub const ORIGINAL_STD: f64 = 3.84;
pub const FMM_STD: f64 = 0.85;
pub const ORIGINAL_DCT_STD: f64 = 106.65;
pub const FMM_DCT_STD: f64 = 21.26;
pub const ORIGINAL_DCT_NONZERO: usize = 50;
pub const FMM_DCT_NONZERO: usize = 15;

pub const BLOCK_STD_TOLERANCE: f64 = 0.01;
pub const DCT_STD_TOLERANCE: f64 = 0.5;
/// Cells are truncated integers; an exact integer coefficient such as the
/// FMM block's DC (1368 / 8 = 171) sits exactly 1.0 away, so the bound is
/// inclusive up to floating-point noise.
pub const DCT_CELL_TOLERANCE: f64 = 1.0 + 1e-9;

pub fn as_f64(block: &[i32; BLOCK_LEN]) -> [f64; BLOCK_LEN] {
    block.map(f64::from)
}

/// One golden comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
    /// Cell-level mismatches, `(row, col, expected, actual)`.
    pub mismatches: Vec<(usize, usize, String, String)>,
}

fn block_check(name: &str, expected: &[i32; BLOCK_LEN], actual: &[i32; BLOCK_LEN]) -> Check {
    let mismatches: Vec<_> = (0..BLOCK_LEN)
        .filter(|&i| expected[i] != actual[i])
        .map(|i| (i / 8, i % 8, expected[i].to_string(), actual[i].to_string()))
        .collect();
    Check {
        name: name.into(),
        expected: "64 cells".into(),
        actual: format!("{} differ", mismatches.len()),
        passed: mismatches.is_empty(),
        mismatches,
    }
}

fn dct_check(name: &str, expected: &[i32; BLOCK_LEN], actual: &CoefBlock) -> Check {
    let mut worst: f64 = 0.0;
    let mismatches: Vec<_> = (0..BLOCK_LEN)
        .filter_map(|i| {
            let d = (f64::from(expected[i]) - actual[i]).abs();
            worst = worst.max(d);
            (d > DCT_CELL_TOLERANCE)
                .then(|| (i / 8, i % 8, expected[i].to_string(), format!("{:.2}", actual[i])))
        })
        .collect();
    Check {
        name: name.into(),
        expected: "every cell within 1.0".into(),
        actual: format!("max deviation {worst:.4}"),
        passed: mismatches.is_empty(),
        mismatches,
    }
}

fn value_check(name: &str, expected: f64, actual: f64, tol: f64) -> Check {
    Check {
        name: name.into(),
        expected: format!("{expected:.2} ± {tol}"),
        actual: format!("{actual:.4}"),
        passed: (expected - actual).abs() <= tol,
        mismatches: Vec::new(),
    }
}

fn count_check(name: &str, expected: usize, actual: usize) -> Check {
    Check {
        name: name.into(),
        expected: expected.to_string(),
        actual: actual.to_string(),
        passed: expected == actual,
        mismatches: Vec::new(),
    }
}

/// Everything the worked example derives, computed from [`ORIGINAL_BLOCK`].
#[derive(Debug, Clone)]
pub struct WorkedExample {
    pub snapped: SampleBlock,
    pub fmm: SampleBlock,
    pub original_dct: CoefBlock,
    pub fmm_dct: CoefBlock,
    pub original_std: f64,
    pub fmm_std: f64,
    pub original_dct_std: f64,
    pub fmm_dct_std: f64,
    /// Non-zero counts after quantization at the default quality.
    pub original_quantized_nonzero: usize,
    pub fmm_quantized_nonzero: usize,
}

impl WorkedExample {
    pub fn compute() -> Self {
        let snapped = ORIGINAL_BLOCK.map(|p| i32::from(fmm_round(p).expect("block within 0..=255")));
        let fmm = ORIGINAL_BLOCK.map(|p| i32::from(snap(p as u8) / 5));
        let original_dct = dct_8x8(&ORIGINAL_BLOCK);
        let fmm_dct = dct_8x8(&fmm);
        let table = QuantTable::for_quality(crate::quant::DEFAULT_QUALITY.into()).expect("valid quality");
        let nz = |c: &CoefBlock| quantize(c, &table).iter().filter(|&&v| v != 0).count();
        Self {
            snapped,
            fmm,
            original_dct,
            fmm_dct,
            original_std: std_dev(&as_f64(&ORIGINAL_BLOCK)).expect("64 values"),
            fmm_std: std_dev(&as_f64(&fmm)).expect("64 values"),
            original_dct_std: std_dev(&original_dct).expect("64 values"),
            fmm_dct_std: std_dev(&fmm_dct).expect("64 values"),
            original_quantized_nonzero: nz(&original_dct),
            fmm_quantized_nonzero: nz(&fmm_dct),
        }
    }

    pub fn checks(&self) -> Vec<Check> {
        let nonzero = |b: &[i32; BLOCK_LEN]| b.iter().filter(|&&v| v != 0).count();
        vec![
            block_check("snapped block", &SNAPPED_BLOCK, &self.snapped),
            block_check("fmm block", &FMM_BLOCK, &self.fmm),
            dct_check("dct of original block", &ORIGINAL_DCT, &self.original_dct),
            dct_check("dct of fmm block", &FMM_DCT, &self.fmm_dct),
            value_check("std original block", ORIGINAL_STD, self.original_std, BLOCK_STD_TOLERANCE),
            value_check("std fmm block", FMM_STD, self.fmm_std, BLOCK_STD_TOLERANCE),
            value_check("std dct original", ORIGINAL_DCT_STD, self.original_dct_std, DCT_STD_TOLERANCE),
            value_check("std dct fmm", FMM_DCT_STD, self.fmm_dct_std, DCT_STD_TOLERANCE),
            count_check("non-zero reference dct original", ORIGINAL_DCT_NONZERO, nonzero(&ORIGINAL_DCT)),
            count_check("non-zero reference dct fmm", FMM_DCT_NONZERO, nonzero(&FMM_DCT)),
            Check {
                name: "quantized non-zero fmm < original".into(),
                expected: "fmm < original".into(),
                actual: format!(
                    "{} < {}",
                    self.fmm_quantized_nonzero, self.original_quantized_nonzero
                ),
                passed: self.fmm_quantized_nonzero < self.original_quantized_nonzero,
                mismatches: Vec::new(),
            },
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let ex = WorkedExample::compute();
        for c in ex.checks() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn sample_estimator_is_the_one_that_matches() {
        let v = as_f64(&ORIGINAL_BLOCK);
        let mean = v.iter().sum::<f64>() / 64.0;
        let ss: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
        let population = (ss / 64.0).sqrt();
        let sample = (ss / 63.0).sqrt();
        assert!((sample - ORIGINAL_STD).abs() <= BLOCK_STD_TOLERANCE);
        assert!((population - ORIGINAL_STD).abs() > BLOCK_STD_TOLERANCE);
    }
}
