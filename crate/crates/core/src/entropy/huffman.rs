//! Canonical Huffman tables built from JPEG-style (counts per length,
//! symbol list) descriptions.
//!
//! When the all-ones code of the longest length is left unassigned it is
//! used as an escape: the encoder writes it followed by the raw symbol bits
//! for symbols the table does not list.

use super::bits::{BitReader, BitWriter};

pub const MAX_CODE_LEN: usize = 16;

/// Annex K luminance DC: code-length counts.
pub const LUMA_DC_BITS: [u8; 16] = [0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0];
pub const LUMA_DC_VALUES: [u8; 12] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

/// Annex K luminance AC: code-length counts.
pub const LUMA_AC_BITS: [u8; 16] = [0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d];
#[rustfmt::skip]
pub const LUMA_AC_VALUES: [u8; 162] = [
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07,
    0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08, 0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52, 0xD1, 0xF0,
    0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0A, 0x16, 0x17, 0x18, 0x19, 0x1A, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2A, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49,
    0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69,
    0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7A, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7,
    0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5,
    0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2,
    0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA, 0xF1, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8,
    0xF9, 0xFA,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Code {
    pub bits: u16,
    pub len: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded {
    Symbol(u8),
    Escape,
}

#[derive(Debug, Clone)]
pub struct HuffmanTable {
    codes: [Option<Code>; 256],
    // per length: largest code (-1 if none), first code, index of first value
    max_code: [i32; MAX_CODE_LEN + 1],
    min_code: [u16; MAX_CODE_LEN + 1],
    val_ptr: [usize; MAX_CODE_LEN + 1],
    values: Vec<u8>,
    escape: Option<Code>,
}

impl HuffmanTable {
    /// Builds the canonical code. `bits[i]` is the number of codes of
    /// length `i + 1`.
    pub fn new(bits: &[u8; 16], values: &[u8]) -> Self {
        let total: usize = bits.iter().map(|&b| usize::from(b)).sum();
        assert_eq!(total, values.len(), "symbol count disagrees with length counts");

        let mut codes = [None; 256];
        let mut max_code = [-1i32; MAX_CODE_LEN + 1];
        let mut min_code = [0u16; MAX_CODE_LEN + 1];
        let mut val_ptr = [0usize; MAX_CODE_LEN + 1];
        let mut code: u32 = 0;
        let mut k = 0;
        let mut longest = 0;
        for len in 1..=MAX_CODE_LEN {
            let n = usize::from(bits[len - 1]);
            if n > 0 {
                val_ptr[len] = k;
                min_code[len] = code as u16;
                for &sym in &values[k..k + n] {
                    assert!(code < (1 << len), "length counts overflow the code space");
                    assert!(codes[usize::from(sym)].is_none(), "duplicate symbol {sym:#x}");
                    codes[usize::from(sym)] = Some(Code {
                        bits: code as u16,
                        len: len as u8,
                    });
                    code += 1;
                }
                max_code[len] = code as i32 - 1;
                k += n;
                longest = len;
            }
            code <<= 1;
        }

        let escape = (longest > 0).then(|| {
            let all_ones = (1u32 << longest) - 1;
            (max_code[longest] < all_ones as i32).then_some(Code {
                bits: all_ones as u16,
                len: longest as u8,
            })
        });

        Self {
            codes,
            max_code,
            min_code,
            val_ptr,
            values: values.to_vec(),
            escape: escape.flatten(),
        }
    }

    pub fn luma_dc() -> Self {
        Self::new(&LUMA_DC_BITS, &LUMA_DC_VALUES)
    }

    pub fn luma_ac() -> Self {
        Self::new(&LUMA_AC_BITS, &LUMA_AC_VALUES)
    }

    pub fn code(&self, symbol: u8) -> Option<Code> {
        self.codes[usize::from(symbol)]
    }

    pub fn escape(&self) -> Option<Code> {
        self.escape
    }

    /// Σ 2^-len over assigned codes, escape excluded.
    pub fn kraft_sum(&self) -> f64 {
        self.codes
            .iter()
            .flatten()
            .map(|c| (-f64::from(c.len)).exp2())
            .sum()
    }

    pub fn write(&self, w: &mut BitWriter, code: Code) {
        w.put(u32::from(code.bits), code.len);
    }

    /// Reads one code. `Ok(None)` means the stream ended mid-code;
    /// `Err(())` means the bits match no code.
    pub fn read(&self, r: &mut BitReader<'_>) -> Result<Option<Decoded>, ()> {
        let mut code: i32 = 0;
        for len in 1..=MAX_CODE_LEN {
            let Some(bit) = r.bit() else {
                return Ok(None);
            };
            code = (code << 1) | bit as i32;
            if code <= self.max_code[len] {
                let idx = self.val_ptr[len] + (code - i32::from(self.min_code[len])) as usize;
                return Ok(Some(Decoded::Symbol(self.values[idx])));
            }
            if let Some(esc) = self.escape {
                if usize::from(esc.len) == len && code == i32::from(esc.bits) {
                    return Ok(Some(Decoded::Escape));
                }
            }
        }
        Err(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dc_codes_match_annex_k() {
        let t = HuffmanTable::luma_dc();
        assert_eq!(t.code(0), Some(Code { bits: 0b00, len: 2 }));
        assert_eq!(t.code(1), Some(Code { bits: 0b010, len: 3 }));
        assert_eq!(t.code(6), Some(Code { bits: 0b1110, len: 4 }));
        assert_eq!(t.code(8), Some(Code { bits: 0b111110, len: 6 }));
        assert_eq!(t.code(11), Some(Code { bits: 0b1_1111_1110, len: 9 }));
        assert_eq!(t.escape(), Some(Code { bits: 0b1_1111_1111, len: 9 }));
        assert_eq!(t.code(12), None);
    }

    #[test]
    fn ac_codes_match_annex_k() {
        let t = HuffmanTable::luma_ac();
        assert_eq!(t.code(0x00), Some(Code { bits: 0b1010, len: 4 }));
        assert_eq!(t.code(0x01), Some(Code { bits: 0b00, len: 2 }));
        assert_eq!(t.code(0xF0), Some(Code { bits: 0b111_1111_1001, len: 11 }));
        assert_eq!(t.code(0xFA), Some(Code { bits: 0xFFFE, len: 16 }));
        assert_eq!(t.escape(), Some(Code { bits: 0xFFFF, len: 16 }));
    }

    #[test]
    fn tables_are_complete_prefix_codes() {
        for t in [HuffmanTable::luma_dc(), HuffmanTable::luma_ac()] {
            let esc = t.escape().unwrap();
            let total = t.kraft_sum() + (-f64::from(esc.len)).exp2();
            assert!((total - 1.0).abs() < 1e-12);
            let codes: Vec<Code> = (0..=255u8).filter_map(|s| t.code(s)).chain([esc]).collect();
            assert!(codes.iter().all(|c| usize::from(c.len) <= MAX_CODE_LEN));
            for a in &codes {
                for b in &codes {
                    if a != b && a.len <= b.len {
                        assert_ne!(b.bits >> (b.len - a.len), a.bits, "{a:?} prefixes {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn read_write_every_symbol() {
        for t in [HuffmanTable::luma_dc(), HuffmanTable::luma_ac()] {
            let syms: Vec<u8> = (0..=255u8).filter(|&s| t.code(s).is_some()).collect();
            let mut w = BitWriter::new();
            for &s in &syms {
                t.write(&mut w, t.code(s).unwrap());
            }
            t.write(&mut w, t.escape().unwrap());
            let bytes = w.finish();
            let mut r = BitReader::new(&bytes);
            for &s in &syms {
                assert_eq!(t.read(&mut r), Ok(Some(Decoded::Symbol(s))));
            }
            assert_eq!(t.read(&mut r), Ok(Some(Decoded::Escape)));
        }
    }
}
