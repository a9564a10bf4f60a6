//! Distortion, rate and dispersion measures.
//!
//! Standard deviations use the sample estimator (divide by `n − 1`). On the
//! 64 values of the worked example block it gives 3.84, where the
//! population estimator gives 3.81.

use serde::{Deserialize, Serialize};

use crate::codec::{decode, encode, quantized_planes, CodecConfig, Mode};
use crate::error::{MetricsError, Result};
use crate::image_io::Image;
use crate::quant::QuantizedBlock;
use crate::transform::split_blocks;

pub const PEAK: f64 = 255.0;
pub const KIB: f64 = 1024.0;

/// Mean squared error and PSNR (dB, peak 255). PSNR is `inf` when the
/// images are identical.
pub fn mse_psnr(a: &Image, b: &Image) -> Result<(f64, f64), MetricsError> {
    if (a.width(), a.height(), a.channels()) != (b.width(), b.height(), b.channels()) {
        return Err(MetricsError::ShapeMismatch(format!(
            "{}x{}x{} vs {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    let mut sum = 0u64;
    for (pa, pb) in a.planes().iter().zip(b.planes()) {
        for (&x, &y) in pa.samples().iter().zip(pb.samples()) {
            let d = i64::from(x) - i64::from(y);
            sum += (d * d) as u64;
        }
    }
    let mse = sum as f64 / a.raw_bytes() as f64;
    Ok((mse, psnr_from_mse(mse)))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

/// `width · height · channels / coded_bytes`.
pub fn compression_ratio(
    width: usize,
    height: usize,
    channels: usize,
    coded_bytes: usize,
) -> Result<f64, MetricsError> {
    if coded_bytes == 0 {
        return Err(MetricsError::ZeroCodedBytes);
    }
    let raw = width * height * channels;
    if raw == 0 {
        return Err(MetricsError::ZeroRawBytes);
    }
    Ok(raw as f64 / coded_bytes as f64)
}

/// Sample standard deviation.
pub fn std_dev(values: &[f64]) -> Result<f64, MetricsError> {
    let n = values.len();
    if n < 2 {
        return Err(MetricsError::TooFewValues(n));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok((ss / (n - 1) as f64).sqrt())
}

/// Total number of non-zero quantized coefficients.
pub fn nonzero_count(blocks: &[QuantizedBlock]) -> usize {
    blocks.iter().flatten().filter(|&&v| v != 0).count()
}

/// Mean over all 8×8 tiles (edge-padded) of each tile's standard deviation.
pub fn mean_block_std(samples: &[u8], width: usize, height: usize) -> f64 {
    let blocks = split_blocks(samples, width, height);
    let total: f64 = blocks
        .iter()
        .map(|b| {
            let v: Vec<f64> = b.iter().map(|&s| f64::from(s)).collect();
            std_dev(&v).expect("64 values")
        })
        .sum();
    total / blocks.len() as f64
}

/// Measurements for one encode/decode run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mode: String,
    pub quality: u8,
    pub mse: f64,
    pub psnr: f64,
    pub raw_bytes: usize,
    pub coded_bytes: usize,
    pub cr: f64,
    pub nonzero_coefficients: usize,
    /// Mean per-tile standard deviation of the samples fed to the DCT.
    pub mean_block_std: f64,
}

/// Encodes, decodes and measures `image` under `config`.
pub fn evaluate(image: &Image, config: &CodecConfig) -> Result<MetricsReport> {
    let coded = encode(image, config)?;
    let decoded = decode(&coded)?;
    let reference = match config.color {
        crate::codec::ColorHandling::PerChannel => image.clone(),
        crate::codec::ColorHandling::Gray => crate::image_io::to_grayscale(image),
    };
    let (mse, psnr) = mse_psnr(&reference, &decoded)?;
    let nonzero = quantized_planes(image, config)?
        .iter()
        .map(|p| nonzero_count(p))
        .sum();
    let mut std_total = 0.0;
    for plane in reference.planes() {
        let samples = match config.mode {
            Mode::Baseline => plane.samples().to_vec(),
            Mode::Fmm => crate::fmm::fmm_forward_samples(plane.samples()),
        };
        std_total += mean_block_std(&samples, plane.width(), plane.height());
    }
    let raw_bytes = reference.raw_bytes();
    Ok(MetricsReport {
        mode: config.mode.name().to_string(),
        quality: config.quality,
        mse,
        psnr,
        raw_bytes,
        coded_bytes: coded.len(),
        cr: compression_ratio(reference.width(), reference.height(), reference.channels(), coded.len())?,
        nonzero_coefficients: nonzero,
        mean_block_std: std_total / reference.channels() as f64,
    })
}

/// One row of the baseline-vs-fmm comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub baseline_bytes: usize,
    pub fmm_bytes: usize,
    pub baseline_kb: f64,
    pub fmm_kb: f64,
    pub baseline_cr: f64,
    pub fmm_cr: f64,
    pub baseline_psnr: f64,
    pub fmm_psnr: f64,
}

impl ComparisonRow {
    pub fn from_reports(name: &str, baseline: &MetricsReport, fmm: &MetricsReport) -> Self {
        Self {
            name: name.to_string(),
            baseline_bytes: baseline.coded_bytes,
            fmm_bytes: fmm.coded_bytes,
            baseline_kb: baseline.coded_bytes as f64 / KIB,
            fmm_kb: fmm.coded_bytes as f64 / KIB,
            baseline_cr: baseline.cr,
            fmm_cr: fmm.cr,
            baseline_psnr: baseline.psnr,
            fmm_psnr: fmm.psnr,
        }
    }
}

/// Runs both pipelines at the same quality.
pub fn compare(name: &str, image: &Image, quality: u8, gray: bool) -> Result<ComparisonRow> {
    let mut base = CodecConfig::new(Mode::Baseline, quality)?;
    let mut fmm = CodecConfig::new(Mode::Fmm, quality)?;
    if gray {
        base = base.gray();
        fmm = fmm.gray();
    }
    let (b, f) = rayon::join(|| evaluate(image, &base), || evaluate(image, &fmm));
    Ok(ComparisonRow::from_reports(name, &b?, &f?))
}

pub fn rows_to_csv(rows: &[ComparisonRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ComparisonRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect()
}

fn fmt_psnr(p: f64) -> String {
    if p.is_infinite() {
        "Inf".to_string()
    } else {
        format!("{p:.4}")
    }
}

pub fn rows_to_markdown(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(
        "| Image | Baseline (bytes) | FMM (bytes) | Baseline (KB) | FMM (KB) | Baseline CR | FMM CR | Baseline PSNR | FMM PSNR |\n\
         |---|---:|---:|---:|---:|---:|---:|---:|---:|\n",
    );
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {:.1} | {:.1} | {:.1}:1 | {:.1}:1 | {} | {} |\n",
            r.name.replace('|', "\\|"),
            r.baseline_bytes,
            r.fmm_bytes,
            r.baseline_kb,
            r.fmm_kb,
            r.baseline_cr,
            r.fmm_cr,
            fmt_psnr(r.baseline_psnr),
            fmt_psnr(r.fmm_psnr),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_images() {
        let a = Image::new(3, 2, vec![vec![1, 2, 3, 4, 5, 6]]).unwrap();
        let (mse, psnr) = mse_psnr(&a, &a).unwrap();
        assert_eq!(mse, 0.0);
        assert!(psnr.is_infinite());
    }

    #[test]
    fn offset_by_two() {
        let a = Image::new(2, 2, vec![vec![10; 4]; 3]).unwrap();
        let b = Image::new(2, 2, vec![vec![12; 4]; 3]).unwrap();
        let (mse, psnr) = mse_psnr(&a, &b).unwrap();
        assert_eq!(mse, 4.0);
        // 10 · log10(65025 / 4)
        assert!((psnr - 42.110_203_5).abs() < 1e-6, "{psnr}");
        assert_eq!(mse_psnr(&b, &a).unwrap(), (mse, psnr));
    }

    #[test]
    fn shape_mismatch() {
        let a = Image::new(2, 2, vec![vec![0; 4]]).unwrap();
        let b = Image::new(2, 2, vec![vec![0; 4]; 3]).unwrap();
        assert!(matches!(mse_psnr(&a, &b), Err(MetricsError::ShapeMismatch(_))));
    }

    #[test]
    fn ratios() {
        assert_eq!(compression_ratio(4, 4, 1, 16).unwrap(), 1.0);
        assert_eq!(compression_ratio(4, 4, 1, 0), Err(MetricsError::ZeroCodedBytes));
        assert_eq!(compression_ratio(0, 4, 1, 3), Err(MetricsError::ZeroRawBytes));
    }

    #[test]
    fn std_dev_basics() {
        assert_eq!(std_dev(&[7.0; 10]).unwrap(), 0.0);
        assert_eq!(std_dev(&[1.0]), Err(MetricsError::TooFewValues(1)));
        assert!((std_dev(&[1.0, 3.0]).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let v = [1.0, 4.0, 9.0, 2.5];
        let scaled: Vec<f64> = v.iter().map(|x| x * -3.0).collect();
        assert!((std_dev(&scaled).unwrap() - 3.0 * std_dev(&v).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn nonzero() {
        assert_eq!(nonzero_count(&[[0; 64]; 5]), 0);
        let mut b = [0; 64];
        b[0] = 3;
        b[63] = -1;
        assert_eq!(nonzero_count(&[b, b]), 4);
    }

    #[test]
    fn csv_round_trip_keeps_infinity() {
        let rows = vec![
            ComparisonRow {
                name: "a, \"quoted\" name".into(),
                baseline_bytes: 100,
                fmm_bytes: 40,
                baseline_kb: 100.0 / 1024.0,
                fmm_kb: 40.0 / 1024.0,
                baseline_cr: 20.5,
                fmm_cr: 51.25,
                baseline_psnr: f64::INFINITY,
                fmm_psnr: 31.5,
            },
        ];
        let text = rows_to_csv(&rows);
        assert!(text.starts_with("name,baseline_bytes,fmm_bytes,"));
        assert_eq!(rows_from_csv(&text).unwrap(), rows);
        let md = rows_to_markdown(&rows);
        assert!(md.contains("| Inf | 31.5000 |"));
        assert!(md.contains("20.5:1"));
    }
}
