//! `fjpeg` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or data error, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::codec::{self, CodecConfig, Mode};
use crate::error::{Error, Result};
use crate::image_io::{read_pnm, write_pnm, Image};
use crate::metrics::{self, ComparisonRow, KIB};
use crate::quant::DEFAULT_QUALITY;
use crate::reference::{WorkedExample, FMM_DCT, ORIGINAL_BLOCK, ORIGINAL_DCT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fjpeg", version, about = "Block-DCT image codec with an optional five-modulus pre-transform")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Baseline,
    Fmm,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Baseline => Mode::Baseline,
            ModeArg::Fmm => Mode::Fmm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Md,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a PGM/PPM image into an .fjpg file
    Encode {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Fmm)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_QUALITY, value_parser = clap::value_parser!(u8).range(1..=100))]
        quality: u8,
        /// Convert to a single luma plane before coding
        #[arg(long)]
        gray: bool,
    },
    /// Decode an .fjpg file to PGM (gray) or PPM (RGB)
    Decode {
        input: PathBuf,
        output: PathBuf,
        /// Print PSNR against this PGM/PPM image
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Write the ASCII (P2/P3) variant
        #[arg(long)]
        ascii: bool,
    },
    /// Print the header of an .fjpg file
    Inspect { input: PathBuf },
    /// Compare an image against a PGM/PPM or .fjpg reconstruction
    Metrics { original: PathBuf, other: PathBuf },
    /// Recompute the worked 8x8 example and check it against its reference values
    Demo,
    /// Baseline vs fmm size, ratio and PSNR for each input image
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_QUALITY, value_parser = clap::value_parser!(u8).range(1..=100))]
        quality: u8,
        #[arg(long, value_enum, default_value_t = ReportFormat::Md)]
        format: ReportFormat,
        #[arg(long)]
        gray: bool,
    },
}

fn read_image(path: &Path) -> Result<Image> {
    let bytes = std::fs::read(path)?;
    Ok(read_pnm(&bytes)?)
}

fn with_path(path: &Path, e: Error) -> String {
    format!("{}: {e}", path.display())
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match command {
        Command::Encode {
            input,
            output,
            mode,
            quality,
            gray,
        } => {
            let image = read_image(&input).map_err(|e| with_path(&input, e))?;
            let mut config = CodecConfig::new(mode.into(), quality).map_err(|e| e.to_string())?;
            if gray {
                config = config.gray();
            }
            let coded = codec::encode(&image, &config).map_err(|e| e.to_string())?;
            std::fs::write(&output, &coded).map_err(|e| with_path(&output, e.into()))?;
            let channels = if gray { 1 } else { image.channels() };
            let raw = image.width() * image.height() * channels;
            let cr = metrics::compression_ratio(image.width(), image.height(), channels, coded.len())
                .map_err(|e| e.to_string())?;
            writeln!(out, "mode = {}", config.mode).map_err(io)?;
            writeln!(out, "quality = {quality}").map_err(io)?;
            writeln!(out, "raw size = {raw} bytes ({:.1} KB)", raw as f64 / KIB).map_err(io)?;
            writeln!(out, "coded size = {} bytes ({:.1} KB)", coded.len(), coded.len() as f64 / KIB)
                .map_err(io)?;
            writeln!(out, "CR = {cr:.1}:1").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Decode {
            input,
            output,
            reference,
            ascii,
        } => {
            let bytes = std::fs::read(&input).map_err(|e| with_path(&input, e.into()))?;
            let image = codec::decode(&bytes).map_err(|e| with_path(&input, e))?;
            std::fs::write(&output, write_pnm(&image, ascii))
                .map_err(|e| with_path(&output, e.into()))?;
            writeln!(out, "decoded {}x{}x{}", image.width(), image.height(), image.channels())
                .map_err(io)?;
            if let Some(reference) = reference {
                let original = read_image(&reference).map_err(|e| with_path(&reference, e))?;
                let (mse, psnr) = metrics::mse_psnr(&original, &image).map_err(|e| e.to_string())?;
                writeln!(out, "MSE = {mse:.4}").map_err(io)?;
                writeln!(out, "PSNR = {psnr:.4} dB").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Inspect { input } => {
            let bytes = std::fs::read(&input).map_err(|e| with_path(&input, e.into()))?;
            let h = codec::inspect(&bytes).map_err(|e| with_path(&input, e.into()))?;
            writeln!(out, "version = {}", h.version).map_err(io)?;
            writeln!(out, "mode = {}", h.mode).map_err(io)?;
            writeln!(out, "width = {}", h.width).map_err(io)?;
            writeln!(out, "height = {}", h.height).map_err(io)?;
            writeln!(out, "channels = {}", h.channels).map_err(io)?;
            writeln!(out, "quality = {}", h.quality).map_err(io)?;
            for (c, len) in h.payload_lengths.iter().enumerate() {
                writeln!(out, "channel {c} payload = {len} bytes").map_err(io)?;
            }
            writeln!(out, "file size = {} bytes", bytes.len()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Metrics { original, other } => {
            let a = read_image(&original).map_err(|e| with_path(&original, e))?;
            let bytes = std::fs::read(&other).map_err(|e| with_path(&other, e.into()))?;
            let coded = bytes.starts_with(codec::MAGIC);
            let b = if coded {
                codec::decode(&bytes).map_err(|e| with_path(&other, e))?
            } else {
                read_pnm(&bytes).map_err(|e| with_path(&other, e.into()))?
            };
            let (mse, psnr) = metrics::mse_psnr(&a, &b).map_err(|e| e.to_string())?;
            writeln!(out, "MSE = {mse:.4}").map_err(io)?;
            writeln!(out, "PSNR = {psnr:.4} dB").map_err(io)?;
            if coded {
                let cr = metrics::compression_ratio(b.width(), b.height(), b.channels(), bytes.len())
                    .map_err(|e| e.to_string())?;
                writeln!(out, "coded size = {} bytes ({:.1} KB)", bytes.len(), bytes.len() as f64 / KIB)
                    .map_err(io)?;
                writeln!(out, "CR = {cr:.1}:1").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Demo => demo(out).map_err(io),
        Command::Report {
            inputs,
            quality,
            format,
            gray,
        } => {
            let results: Vec<Result<ComparisonRow, String>> = inputs
                .par_iter()
                .map(|path| {
                    let image = read_image(path).map_err(|e| with_path(path, e))?;
                    let name = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| path.display().to_string());
                    metrics::compare(&name, &image, quality, gray).map_err(|e| with_path(path, e))
                })
                .collect();
            let mut rows = Vec::new();
            let mut failed = false;
            for r in results {
                match r {
                    Ok(row) => rows.push(row),
                    Err(msg) => {
                        failed = true;
                        writeln!(err, "error: {msg}").map_err(io)?;
                    }
                }
            }
            let table = match format {
                ReportFormat::Csv => metrics::rows_to_csv(&rows),
                ReportFormat::Md => metrics::rows_to_markdown(&rows),
            };
            write!(out, "{table}").map_err(io)?;
            Ok(if failed { EXIT_FAILURE } else { EXIT_OK })
        }
    }
}

fn print_int_block(out: &mut dyn Write, title: &str, block: &[i32; 64]) -> std::io::Result<()> {
    writeln!(out, "{title}")?;
    for row in block.chunks(8) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>5}")).collect();
        writeln!(out, "{}", cells.join(""))?;
    }
    writeln!(out)
}

fn print_real_block(out: &mut dyn Write, title: &str, block: &[f64; 64]) -> std::io::Result<()> {
    writeln!(out, "{title}")?;
    for row in block.chunks(8) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>9.2}")).collect();
        writeln!(out, "{}", cells.join(""))?;
    }
    writeln!(out)
}

fn demo(out: &mut dyn Write) -> std::io::Result<i32> {
    let ex = WorkedExample::compute();
    print_int_block(out, "Original block", &ORIGINAL_BLOCK)?;
    print_int_block(out, "Snapped to multiples of 5 (computed)", &ex.snapped)?;
    print_int_block(out, "Divided by 5 (computed)", &ex.fmm)?;
    print_real_block(out, "DCT of original block (computed)", &ex.original_dct)?;
    print_real_block(out, "DCT of divided block (computed)", &ex.fmm_dct)?;
    writeln!(out, "STD original block = {:.2}", ex.original_std)?;
    writeln!(out, "STD divided block = {:.2}", ex.fmm_std)?;
    writeln!(out, "STD DCT original = {:.2}", ex.original_dct_std)?;
    writeln!(out, "STD DCT divided = {:.2}", ex.fmm_dct_std)?;
    let nz = |b: &[i32; 64]| b.iter().filter(|&&v| v != 0).count();
    writeln!(out, "non-zero reference DCT original = {}", nz(&ORIGINAL_DCT))?;
    writeln!(out, "non-zero reference DCT divided = {}", nz(&FMM_DCT))?;
    writeln!(
        out,
        "non-zero quantized (q={DEFAULT_QUALITY}) original = {}, divided = {}",
        ex.original_quantized_nonzero, ex.fmm_quantized_nonzero
    )?;
    writeln!(out)?;

    let mut all = true;
    for check in ex.checks() {
        let status = if check.passed { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "[{status}] {}: expected {}, got {}",
            check.name, check.expected, check.actual
        )?;
        for (r, c, e, a) in &check.mismatches {
            writeln!(out, "    cell ({r},{c}): expected {e}, got {a}")?;
        }
        all &= check.passed;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILURE })
}
