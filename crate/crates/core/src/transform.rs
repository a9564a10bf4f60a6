//! 8×8 orthonormal DCT-II and plane tiling.
//!
//! No level shift is applied: the DC term of a block is eight times its
//! mean. Coefficient `u * 8 + v` holds vertical frequency `u` and
//! horizontal frequency `v`.

use std::sync::OnceLock;

use crate::error::BlockError;

pub const N: usize = 8;
pub const BLOCK_LEN: usize = N * N;

/// Integer samples of one 8×8 tile, row-major.
pub type SampleBlock = [i32; BLOCK_LEN];
/// Real transform coefficients of one 8×8 tile, row-major, DC first.
pub type CoefBlock = [f64; BLOCK_LEN];

/// `basis()[k][x] = c(k) · cos((2x + 1)kπ / 16)` with `c(0) = √(1/8)` and
/// `c(k) = √(2/8)` otherwise. Rows are orthonormal.
fn basis() -> &'static [[f64; N]; N] {
    static BASIS: OnceLock<[[f64; N]; N]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0; N]; N];
        for (k, row) in b.iter_mut().enumerate() {
            let scale = if k == 0 { (1.0f64 / 8.0).sqrt() } else { 0.5 };
            for (x, v) in row.iter_mut().enumerate() {
                *v = scale * (((2 * x + 1) * k) as f64 * std::f64::consts::PI / 16.0).cos();
            }
        }
        b
    })
}

/// Forward 2-D DCT as two passes of the 1-D transform (rows, then columns).
pub fn dct_8x8(block: &SampleBlock) -> CoefBlock {
    let mut real = [0.0; BLOCK_LEN];
    for (r, &s) in real.iter_mut().zip(block) {
        *r = f64::from(s);
    }
    dct_8x8_real(&real)
}

/// Forward DCT of real-valued samples.
pub fn dct_8x8_real(block: &[f64; BLOCK_LEN]) -> CoefBlock {
    let b = basis();
    // rows: tmp[y][v] = Σx f[y][x] · b[v][x]
    let mut tmp = [0.0; BLOCK_LEN];
    for y in 0..N {
        for v in 0..N {
            let mut acc = 0.0;
            for x in 0..N {
                acc += block[y * N + x] * b[v][x];
            }
            tmp[y * N + v] = acc;
        }
    }
    // columns: out[u][v] = Σy b[u][y] · tmp[y][v]
    let mut out = [0.0; BLOCK_LEN];
    for u in 0..N {
        for v in 0..N {
            let mut acc = 0.0;
            for y in 0..N {
                acc += b[u][y] * tmp[y * N + v];
            }
            out[u * N + v] = acc;
        }
    }
    out
}

/// Inverse 2-D DCT. Output is real-valued; callers round and clamp.
pub fn idct_8x8(coefs: &CoefBlock) -> [f64; BLOCK_LEN] {
    let b = basis();
    // columns: tmp[y][v] = Σu b[u][y] · F[u][v]
    let mut tmp = [0.0; BLOCK_LEN];
    for y in 0..N {
        for v in 0..N {
            let mut acc = 0.0;
            for u in 0..N {
                acc += b[u][y] * coefs[u * N + v];
            }
            tmp[y * N + v] = acc;
        }
    }
    // rows: out[y][x] = Σv tmp[y][v] · b[v][x]
    let mut out = [0.0; BLOCK_LEN];
    for y in 0..N {
        for x in 0..N {
            let mut acc = 0.0;
            for v in 0..N {
                acc += tmp[y * N + v] * b[v][x];
            }
            out[y * N + x] = acc;
        }
    }
    out
}

/// Round half away from zero and clamp into `lo..=hi`.
pub fn round_clamp(block: &[f64; BLOCK_LEN], lo: i32, hi: i32) -> SampleBlock {
    let mut out = [0i32; BLOCK_LEN];
    for (o, &v) in out.iter_mut().zip(block) {
        *o = (v.round() as i32).clamp(lo, hi);
    }
    out
}

/// Number of blocks covering a `width × height` plane.
pub fn block_count(width: usize, height: usize) -> usize {
    width.div_ceil(N) * height.div_ceil(N)
}

/// Tiles a row-major plane into 8×8 blocks in raster order. Tiles that
/// overhang the right or bottom edge repeat the last column or row.
pub fn split_blocks<T: Copy>(samples: &[T], width: usize, height: usize) -> Vec<[T; BLOCK_LEN]> {
    assert!(width > 0 && height > 0, "plane dimensions must be non-zero");
    assert_eq!(samples.len(), width * height);
    let (bw, bh) = (width.div_ceil(N), height.div_ceil(N));
    let mut blocks = Vec::with_capacity(bw * bh);
    for by in 0..bh {
        for bx in 0..bw {
            let block = std::array::from_fn(|i| {
                let y = (by * N + i / N).min(height - 1);
                let x = (bx * N + i % N).min(width - 1);
                samples[y * width + x]
            });
            blocks.push(block);
        }
    }
    blocks
}

/// Reassembles blocks produced by [`split_blocks`], dropping the padding.
pub fn merge_blocks<T: Copy + Default>(
    blocks: &[[T; BLOCK_LEN]],
    width: usize,
    height: usize,
) -> Result<Vec<T>, BlockError> {
    if width == 0 || height == 0 {
        return Err(BlockError::EmptyPlane);
    }
    let expected = block_count(width, height);
    if blocks.len() != expected {
        return Err(BlockError::CountMismatch {
            width,
            height,
            expected,
            actual: blocks.len(),
        });
    }
    let bw = width.div_ceil(N);
    let mut out = vec![T::default(); width * height];
    for (i, block) in blocks.iter().enumerate() {
        let (bx, by) = (i % bw, i / bw);
        for r in 0..N {
            let y = by * N + r;
            if y >= height {
                break;
            }
            let x0 = bx * N;
            let cols = N.min(width - x0);
            out[y * width + x0..y * width + x0 + cols].copy_from_slice(&block[r * N..r * N + cols]);
        }
    }
    Ok(out)
}
