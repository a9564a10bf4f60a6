//! Quality-scaled quantization tables and coefficient (de)quantization.

use crate::error::QuantError;
use crate::transform::{CoefBlock, BLOCK_LEN};

pub type QuantizedBlock = [i32; BLOCK_LEN];

pub const DEFAULT_QUALITY: u8 = 75;

/// ITU-T T.81 Annex K luminance table, row-major.
#[rustfmt::skip]
pub const BASE_LUMA: [u16; BLOCK_LEN] = [
    16, 11, 10, 16, 24, 40, 51, 61,
    12, 12, 14, 19, 26, 58, 60, 55,
    14, 13, 16, 24, 40, 57, 69, 56,
    14, 17, 22, 29, 51, 87, 80, 62,
    18, 22, 37, 56, 68, 109, 103, 77,
    24, 35, 55, 64, 81, 104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// 64 divisors in `1..=255`, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantTable([u16; BLOCK_LEN]);

impl QuantTable {
    pub fn new(entries: [u16; BLOCK_LEN]) -> Result<Self, QuantError> {
        if let Some((index, &value)) = entries
            .iter()
            .enumerate()
            .find(|(_, &v)| !(1..=255).contains(&v))
        {
            return Err(QuantError::BadEntry {
                index,
                value: value.into(),
            });
        }
        Ok(Self(entries))
    }

    pub fn base() -> Self {
        Self(BASE_LUMA)
    }

    /// The base table scaled to `quality`.
    pub fn for_quality(quality: i32) -> Result<Self, QuantError> {
        scale_table(&Self::base(), quality)
    }

    pub fn entries(&self) -> &[u16; BLOCK_LEN] {
        &self.0
    }

    pub fn min(&self) -> u16 {
        self.0.iter().copied().min().unwrap_or(1)
    }
}

/// IJG quality scaling: `q < 50` → `5000/q`, otherwise `200 − 2q`, as a
/// percentage of each base entry, rounded and clamped to `1..=255`.
pub fn scale_table(base: &QuantTable, quality: i32) -> Result<QuantTable, QuantError> {
    if !(1..=100).contains(&quality) {
        return Err(QuantError::QualityOutOfRange(quality));
    }
    let scale = if quality < 50 {
        5000 / quality
    } else {
        200 - 2 * quality
    };
    let entries = base
        .0
        .map(|e| ((i32::from(e) * scale + 50) / 100).clamp(1, 255) as u16);
    Ok(QuantTable(entries))
}

/// Divide and round half away from zero.
pub fn quantize(coefs: &CoefBlock, table: &QuantTable) -> QuantizedBlock {
    std::array::from_fn(|i| (coefs[i] / f64::from(table.0[i])).round() as i32)
}

pub fn dequantize(q: &QuantizedBlock, table: &QuantTable) -> CoefBlock {
    std::array::from_fn(|i| f64::from(q[i]) * f64::from(table.0[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scaling_endpoints() {
        let base = QuantTable::base();
        assert_eq!(scale_table(&base, 50).unwrap(), base);
        assert!(scale_table(&base, 100).unwrap().entries().iter().all(|&e| e == 1));
        // floor((16 * 50 + 50) / 100) = 8
        assert_eq!(scale_table(&base, 75).unwrap().entries()[0], 8);
        assert_eq!(scale_table(&base, 1).unwrap().entries()[0], 255);
    }

    #[test]
    fn quality_out_of_range() {
        let base = QuantTable::base();
        assert_eq!(scale_table(&base, 0), Err(QuantError::QualityOutOfRange(0)));
        assert_eq!(scale_table(&base, 101), Err(QuantError::QualityOutOfRange(101)));
    }

    #[test]
    fn table_entries_validated() {
        let mut e = BASE_LUMA;
        e[5] = 0;
        assert_eq!(QuantTable::new(e), Err(QuantError::BadEntry { index: 5, value: 0 }));
        e[5] = 256;
        assert!(QuantTable::new(e).is_err());
    }

    #[test]
    fn tie_rounds_away_from_zero() {
        let table = QuantTable::base();
        let mut coefs = [0.0; BLOCK_LEN];
        coefs[0] = 24.0;
        coefs[3] = -24.0;
        let q = quantize(&coefs, &table);
        assert_eq!(q[0], 2);
        assert_eq!(q[3], -2);
        assert!(q.iter().enumerate().all(|(i, &v)| i == 0 || i == 3 || v == 0));
        assert_eq!(dequantize(&[0; BLOCK_LEN], &table), [0.0; BLOCK_LEN]);
    }

    proptest! {
        #[test]
        fn dequantize_error_bounded(
            coefs in proptest::array::uniform32(-2040.0f64..2040.0),
            quality in 1i32..=100,
        ) {
            let table = QuantTable::for_quality(quality).unwrap();
            let mut block = [0.0; BLOCK_LEN];
            block[..32].copy_from_slice(&coefs);
            block[32..].copy_from_slice(&coefs);
            let back = dequantize(&quantize(&block, &table), &table);
            for i in 0..BLOCK_LEN {
                prop_assert!((back[i] - block[i]).abs() <= f64::from(table.entries()[i]) / 2.0 + 1e-9);
            }
        }

        #[test]
        fn quantize_monotone(a in -3000.0f64..3000.0, d in 0.0f64..500.0, i in 0usize..64) {
            let table = QuantTable::for_quality(75).unwrap();
            let mut lo = [0.0; BLOCK_LEN];
            let mut hi = [0.0; BLOCK_LEN];
            lo[i] = a;
            hi[i] = a + d;
            prop_assert!(quantize(&lo, &table)[i] <= quantize(&hi, &table)[i]);
        }
    }
}
