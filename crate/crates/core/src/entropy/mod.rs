//! Zigzag scan, DC DPCM, AC run-length coding and fixed Huffman coding.
//!
//! Per channel, blocks are coded in raster order with the DC predictor
//! starting at zero. DC deltas are coded as a size category followed by
//! the amplitude bits; AC coefficients as `(run, size)` symbols with ZRL
//! for sixteen zeros and EOB after the last non-zero coefficient. Both
//! tables are the Annex K luminance tables. Categories those tables do not
//! list (DC 12..=15, AC size 11..=15) are written as the table's escape
//! code followed by the raw symbol: four bits of category for DC, eight
//! bits of `run << 4 | size` for AC.

pub mod bits;
pub mod huffman;

use std::sync::OnceLock;

use crate::error::EntropyError;
use crate::quant::QuantizedBlock;
use crate::transform::BLOCK_LEN;
use bits::{BitReader, BitWriter};
use huffman::{Decoded, HuffmanTable};

const EOB: u8 = 0x00;
const ZRL: u8 = 0xF0;
const MAX_CATEGORY: u8 = 15;

/// Natural (row-major) index of each zigzag position.
#[rustfmt::skip]
pub const ZIGZAG_TO_NATURAL: [usize; BLOCK_LEN] = [
     0,  1,  8, 16,  9,  2,  3, 10,
    17, 24, 32, 25, 18, 11,  4,  5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13,  6,  7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63,
];

/// Reorders a row-major block into zigzag order.
pub fn zigzag(block: &QuantizedBlock) -> [i32; BLOCK_LEN] {
    std::array::from_fn(|k| block[ZIGZAG_TO_NATURAL[k]])
}

/// Inverse of [`zigzag`].
pub fn izigzag(scan: &[i32; BLOCK_LEN]) -> QuantizedBlock {
    let mut out = [0; BLOCK_LEN];
    for (k, &v) in scan.iter().enumerate() {
        out[ZIGZAG_TO_NATURAL[k]] = v;
    }
    out
}

fn tables() -> &'static (HuffmanTable, HuffmanTable) {
    static TABLES: OnceLock<(HuffmanTable, HuffmanTable)> = OnceLock::new();
    TABLES.get_or_init(|| (HuffmanTable::luma_dc(), HuffmanTable::luma_ac()))
}

/// Number of bits needed for `|v|`.
fn category(v: i64) -> u8 {
    (64 - v.unsigned_abs().leading_zeros()) as u8
}

/// JPEG magnitude bits: negative values are stored as `v - 1` truncated
/// to `size` bits.
fn amplitude_bits(v: i64, size: u8) -> u32 {
    if v >= 0 {
        v as u32
    } else {
        (v + (1 << size) - 1) as u32
    }
}

fn extend(raw: u32, size: u8) -> i32 {
    if size == 0 {
        0
    } else if raw < 1 << (size - 1) {
        raw as i32 - (1 << size) + 1
    } else {
        raw as i32
    }
}

/// Codes one channel's quantized blocks (row-major coefficients).
pub fn encode_blocks(blocks: &[QuantizedBlock]) -> Result<Vec<u8>, EntropyError> {
    let mut w = BitWriter::new();
    write_blocks(&mut w, blocks)?;
    Ok(w.finish())
}

/// Exact coded length in bits, before padding.
pub fn coded_bits(blocks: &[QuantizedBlock]) -> Result<usize, EntropyError> {
    let mut w = BitWriter::new();
    write_blocks(&mut w, blocks)?;
    Ok(w.bit_len())
}

fn write_blocks(w: &mut BitWriter, blocks: &[QuantizedBlock]) -> Result<(), EntropyError> {
    let (dc_table, ac_table) = tables();
    let mut pred: i64 = 0;

    for (b, block) in blocks.iter().enumerate() {
        let scan = zigzag(block);

        let dc = i64::from(scan[0]);
        let delta = dc - pred;
        pred = dc;
        let size = category(delta);
        if size > MAX_CATEGORY {
            return Err(EntropyError::MagnitudeTooLarge { block: b, value: delta });
        }
        match dc_table.code(size) {
            Some(code) => dc_table.write(w, code),
            None => {
                dc_table.write(w, dc_table.escape().expect("dc table has an escape"));
                w.put(u32::from(size), 4);
            }
        }
        w.put(amplitude_bits(delta, size), size);

        let mut run = 0u8;
        for &v in &scan[1..] {
            if v == 0 {
                run += 1;
                continue;
            }
            let v = i64::from(v);
            let size = category(v);
            if size > MAX_CATEGORY {
                return Err(EntropyError::MagnitudeTooLarge { block: b, value: v });
            }
            while run > 15 {
                ac_table.write(w, ac_table.code(ZRL).expect("ZRL is coded"));
                run -= 16;
            }
            let symbol = (run << 4) | size;
            match ac_table.code(symbol) {
                Some(code) => ac_table.write(w, code),
                None => {
                    ac_table.write(w, ac_table.escape().expect("ac table has an escape"));
                    w.put(u32::from(symbol), 8);
                }
            }
            w.put(amplitude_bits(v, size), size);
            run = 0;
        }
        if run > 0 {
            ac_table.write(w, ac_table.code(EOB).expect("EOB is coded"));
        }
    }
    Ok(())
}

/// Decodes `block_count` blocks written by [`encode_blocks`].
///
/// Every call either returns the blocks or a structured error; the work
/// done is bounded by `block_count × 64` symbols.
pub fn decode_blocks(bytes: &[u8], block_count: usize) -> Result<Vec<QuantizedBlock>, EntropyError> {
    let (dc_table, ac_table) = tables();
    let mut r = BitReader::new(bytes);
    let mut pred: i32 = 0;
    let mut out = Vec::with_capacity(block_count.min(bytes.len().saturating_mul(2) + 1));

    for b in 0..block_count {
        let truncated = EntropyError::Truncated { block: b };
        let invalid = EntropyError::InvalidCode { block: b };
        let mut scan = [0i32; BLOCK_LEN];

        let size = match dc_table.read(&mut r).map_err(|_| invalid.clone())? {
            None => return Err(truncated),
            Some(Decoded::Symbol(s)) => s,
            Some(Decoded::Escape) => {
                let s = r.bits(4).ok_or(truncated.clone())? as u8;
                if usize::from(s) < huffman_symbol_count(dc_table) {
                    return Err(invalid);
                }
                s
            }
        };
        let delta = extend(r.bits(size).ok_or(truncated.clone())?, size);
        pred = pred
            .checked_add(delta)
            .ok_or(EntropyError::DcOverflow { block: b })?;
        scan[0] = pred;

        let mut k = 1;
        while k < BLOCK_LEN {
            let symbol = match ac_table.read(&mut r).map_err(|_| invalid.clone())? {
                None => return Err(truncated),
                Some(Decoded::Symbol(s)) => s,
                Some(Decoded::Escape) => {
                    let s = r.bits(8).ok_or(truncated.clone())? as u8;
                    if s & 0x0F <= 10 {
                        return Err(invalid);
                    }
                    s
                }
            };
            let (run, size) = (usize::from(symbol >> 4), symbol & 0x0F);
            match (run, size) {
                (0, 0) => break,
                (15, 0) => {
                    if k + 16 >= BLOCK_LEN {
                        return Err(EntropyError::RunOverflow { block: b });
                    }
                    k += 16;
                }
                (_, 0) => return Err(invalid),
                _ => {
                    k += run;
                    if k >= BLOCK_LEN {
                        return Err(EntropyError::RunOverflow { block: b });
                    }
                    scan[k] = extend(r.bits(size).ok_or(truncated.clone())?, size);
                    k += 1;
                }
            }
        }
        out.push(izigzag(&scan));
    }
    Ok(out)
}

fn huffman_symbol_count(table: &HuffmanTable) -> usize {
    (0..=255u8).filter(|&s| table.code(s).is_some()).count()
}
