use std::time::{Duration, Instant};

use fjpeg_core::entropy::{coded_bits, decode_blocks, encode_blocks};
use fjpeg_core::quant::QuantizedBlock;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sparse blocks shaped like real quantizer output, with occasional large
/// magnitudes to exercise every size category.
pub fn random_blocks(rng: &mut ChaCha8Rng, count: usize) -> Vec<QuantizedBlock> {
    (0..count)
        .map(|_| {
            let density: f64 = rng.gen_range(0.0..1.0);
            std::array::from_fn(|i| {
                if i == 0 {
                    rng.gen_range(0..=2040)
                } else if rng.gen_bool(density * 0.5) {
                    let mag = if rng.gen_bool(0.05) { 32767 } else { 64 };
                    let v: i32 = rng.gen_range(1..=mag);
                    if rng.gen() { v } else { -v }
                } else {
                    0
                }
            })
        })
        .collect()
}

#[test]
fn thousand_random_sequences_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1);
    for _ in 0..1000 {
        let n = rng.gen_range(1..12);
        let blocks = random_blocks(&mut rng, n);
        let bytes = encode_blocks(&blocks).unwrap();
        assert_eq!(encode_blocks(&blocks).unwrap(), bytes);
        assert_eq!(decode_blocks(&bytes, n).unwrap(), blocks);
    }
}

#[test]
fn bit_flips_never_panic_or_hang() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBAD);
    let start = Instant::now();
    for _ in 0..200 {
        let n = rng.gen_range(1..6);
        let blocks = random_blocks(&mut rng, n);
        let bytes = encode_blocks(&blocks).unwrap();
        for bit in 0..bytes.len() * 8 {
            let mut corrupt = bytes.clone();
            corrupt[bit / 8] ^= 0x80 >> (bit % 8);
            // either a structured error or some block sequence
            let _ = decode_blocks(&corrupt, n);
        }
        for cut in 0..bytes.len() {
            assert!(decode_blocks(&bytes[..cut], n).is_err() || cut == bytes.len());
        }
    }
    assert!(start.elapsed() < Duration::from_secs(30));
}

#[test]
fn arbitrary_bytes_decode_or_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let len = rng.gen_range(0..64);
        let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let _ = decode_blocks(&bytes, rng.gen_range(0..20));
    }
}

#[test]
fn all_zero_blocks_are_one_eob_each() {
    let zeros = vec![[0; 64]; 10];
    // 2-bit zero DC delta + 4-bit EOB, 60 bits
    assert_eq!(encode_blocks(&zeros).unwrap().len(), 8);
}

proptest! {
    #[test]
    fn clearing_ac_never_lengthens(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks = random_blocks(&mut rng, n);
        let cleared: Vec<QuantizedBlock> = blocks
            .iter()
            .map(|b| std::array::from_fn(|i| if i == 0 { b[0] } else { 0 }))
            .collect();
        let full = coded_bits(&blocks).unwrap();
        let sparse = coded_bits(&cleared).unwrap();
        prop_assert!(sparse <= full);
    }
}
