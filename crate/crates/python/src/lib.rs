//! Python bindings: `import fjpeg`.

use fjpeg_core::codec::{self, CodecConfig, Mode};
use fjpeg_core::{entropy, fmm, image_io, metrics, quant, transform};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

create_exception!(fjpeg, FjpegError, PyException);

fn to_py(e: impl std::fmt::Display) -> PyErr {
    FjpegError::new_err(e.to_string())
}

fn block<T: Copy>(values: Vec<T>, what: &str) -> PyResult<[T; 64]> {
    let len = values.len();
    values
        .try_into()
        .map_err(|_| PyValueError::new_err(format!("{what} must have 64 entries, got {len}")))
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    match mode {
        "baseline" => Ok(Mode::Baseline),
        "fmm" => Ok(Mode::Fmm),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'baseline' or 'fmm', got {other:?}"
        ))),
    }
}

fn config(mode: &str, quality: u8, gray: bool) -> PyResult<CodecConfig> {
    let c = CodecConfig::new(parse_mode(mode)?, quality).map_err(to_py)?;
    Ok(if gray { c.gray() } else { c })
}

/// Gray or RGB image of 8-bit samples, one `bytes` object per channel.
#[pyclass(name = "Image", module = "fjpeg", frozen, skip_from_py_object)]
pub struct PyImage {
    inner: image_io::Image,
}

#[pymethods]
impl PyImage {
    #[new]
    fn new(width: usize, height: usize, planes: Vec<Vec<u8>>) -> PyResult<Self> {
        image_io::Image::new(width, height, planes)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    #[getter]
    fn channels(&self) -> usize {
        self.inner.channels()
    }

    #[getter]
    fn raw_bytes(&self) -> usize {
        self.inner.raw_bytes()
    }

    fn planes<'py>(&self, py: Python<'py>) -> Vec<Bound<'py, PyBytes>> {
        self.inner
            .planes()
            .iter()
            .map(|p| PyBytes::new(py, p.samples()))
            .collect()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Image(width={}, height={}, channels={})",
            self.inner.width(),
            self.inner.height(),
            self.inner.channels()
        )
    }
}

#[pyfunction]
fn read_pnm(data: &[u8]) -> PyResult<PyImage> {
    image_io::read_pnm(data)
        .map(|inner| PyImage { inner })
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (image, ascii = false))]
fn write_pnm<'py>(py: Python<'py>, image: &PyImage, ascii: bool) -> Bound<'py, PyBytes> {
    PyBytes::new(py, &image_io::write_pnm(&image.inner, ascii))
}

#[pyfunction]
fn to_grayscale(image: &PyImage) -> PyImage {
    PyImage {
        inner: image_io::to_grayscale(&image.inner),
    }
}

#[pyfunction]
fn fmm_round(p: i32) -> PyResult<u8> {
    fmm::fmm_round(p).map_err(to_py)
}

#[pyfunction]
fn fmm_forward<'py>(py: Python<'py>, samples: &[u8]) -> Bound<'py, PyBytes> {
    PyBytes::new(py, &fmm::fmm_forward_samples(samples))
}

#[pyfunction]
fn fmm_inverse<'py>(py: Python<'py>, samples: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    if let Some(&bad) = samples.iter().find(|&&s| s > fmm::FMM_MAX) {
        return Err(to_py(fjpeg_core::error::FmmError::SampleOutOfRange(bad)));
    }
    let out: Vec<u8> = samples.iter().map(|&s| s * 5).collect();
    Ok(PyBytes::new(py, &out))
}

#[pyfunction]
fn dct_8x8(samples: Vec<i32>) -> PyResult<Vec<f64>> {
    Ok(transform::dct_8x8(&block(samples, "block")?).to_vec())
}

#[pyfunction]
fn idct_8x8(coefs: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(transform::idct_8x8(&block(coefs, "coefficients")?).to_vec())
}

#[pyfunction]
fn scale_table(quality: i32) -> PyResult<Vec<u16>> {
    quant::QuantTable::for_quality(quality)
        .map(|t| t.entries().to_vec())
        .map_err(to_py)
}

#[pyfunction]
fn quantize(coefs: Vec<f64>, quality: i32) -> PyResult<Vec<i32>> {
    let table = quant::QuantTable::for_quality(quality).map_err(to_py)?;
    Ok(quant::quantize(&block(coefs, "coefficients")?, &table).to_vec())
}

#[pyfunction]
fn dequantize(q: Vec<i32>, quality: i32) -> PyResult<Vec<f64>> {
    let table = quant::QuantTable::for_quality(quality).map_err(to_py)?;
    Ok(quant::dequantize(&block(q, "block")?, &table).to_vec())
}

#[pyfunction]
fn zigzag(q: Vec<i32>) -> PyResult<Vec<i32>> {
    Ok(entropy::zigzag(&block(q, "block")?).to_vec())
}

#[pyfunction]
fn izigzag(scan: Vec<i32>) -> PyResult<Vec<i32>> {
    Ok(entropy::izigzag(&block(scan, "scan")?).to_vec())
}

#[pyfunction]
fn encode_blocks<'py>(py: Python<'py>, blocks: Vec<Vec<i32>>) -> PyResult<Bound<'py, PyBytes>> {
    let blocks = blocks
        .into_iter()
        .map(|b| block(b, "block"))
        .collect::<PyResult<Vec<_>>>()?;
    let bytes = entropy::encode_blocks(&blocks).map_err(to_py)?;
    Ok(PyBytes::new(py, &bytes))
}

#[pyfunction]
fn decode_blocks(data: &[u8], block_count: usize) -> PyResult<Vec<Vec<i32>>> {
    entropy::decode_blocks(data, block_count)
        .map(|blocks| blocks.iter().map(|b| b.to_vec()).collect())
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (image, mode = "fmm", quality = quant::DEFAULT_QUALITY, gray = false))]
fn encode<'py>(
    py: Python<'py>,
    image: &PyImage,
    mode: &str,
    quality: u8,
    gray: bool,
) -> PyResult<Bound<'py, PyBytes>> {
    let cfg = config(mode, quality, gray)?;
    let bytes = py
        .detach(|| codec::encode(&image.inner, &cfg))
        .map_err(to_py)?;
    Ok(PyBytes::new(py, &bytes))
}

#[pyfunction]
fn decode(py: Python<'_>, data: &[u8]) -> PyResult<PyImage> {
    let data = data.to_vec();
    py.detach(move || codec::decode(&data))
        .map(|inner| PyImage { inner })
        .map_err(to_py)
}

#[pyfunction]
fn inspect<'py>(py: Python<'py>, data: &[u8]) -> PyResult<Bound<'py, PyDict>> {
    let h = codec::inspect(data).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("version", h.version)?;
    d.set_item("mode", h.mode.name())?;
    d.set_item("width", h.width)?;
    d.set_item("height", h.height)?;
    d.set_item("channels", h.channels)?;
    d.set_item("quality", h.quality)?;
    d.set_item("payload_lengths", h.payload_lengths)?;
    Ok(d)
}

#[pyfunction]
fn mse_psnr(a: &PyImage, b: &PyImage) -> PyResult<(f64, f64)> {
    metrics::mse_psnr(&a.inner, &b.inner).map_err(to_py)
}

#[pyfunction]
fn compression_ratio(width: usize, height: usize, channels: usize, coded_bytes: usize) -> PyResult<f64> {
    metrics::compression_ratio(width, height, channels, coded_bytes).map_err(to_py)
}

#[pyfunction]
fn std_dev(values: Vec<f64>) -> PyResult<f64> {
    metrics::std_dev(&values).map_err(to_py)
}

#[pyfunction]
fn nonzero_count(blocks: Vec<Vec<i32>>) -> usize {
    blocks.iter().flatten().filter(|&&v| v != 0).count()
}

#[pyfunction]
#[pyo3(signature = (image, mode = "fmm", quality = quant::DEFAULT_QUALITY, gray = false))]
fn evaluate<'py>(
    py: Python<'py>,
    image: &PyImage,
    mode: &str,
    quality: u8,
    gray: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(mode, quality, gray)?;
    let r = py
        .detach(|| metrics::evaluate(&image.inner, &cfg))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("mode", r.mode)?;
    d.set_item("quality", r.quality)?;
    d.set_item("mse", r.mse)?;
    d.set_item("psnr", r.psnr)?;
    d.set_item("raw_bytes", r.raw_bytes)?;
    d.set_item("coded_bytes", r.coded_bytes)?;
    d.set_item("cr", r.cr)?;
    d.set_item("nonzero_coefficients", r.nonzero_coefficients)?;
    d.set_item("mean_block_std", r.mean_block_std)?;
    Ok(d)
}

#[pymodule]
fn fjpeg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FjpegError", m.py().get_type::<FjpegError>())?;
    m.add_class::<PyImage>()?;
    m.add_function(wrap_pyfunction!(read_pnm, m)?)?;
    m.add_function(wrap_pyfunction!(write_pnm, m)?)?;
    m.add_function(wrap_pyfunction!(to_grayscale, m)?)?;
    m.add_function(wrap_pyfunction!(fmm_round, m)?)?;
    m.add_function(wrap_pyfunction!(fmm_forward, m)?)?;
    m.add_function(wrap_pyfunction!(fmm_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(dct_8x8, m)?)?;
    m.add_function(wrap_pyfunction!(idct_8x8, m)?)?;
    m.add_function(wrap_pyfunction!(scale_table, m)?)?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    m.add_function(wrap_pyfunction!(dequantize, m)?)?;
    m.add_function(wrap_pyfunction!(zigzag, m)?)?;
    m.add_function(wrap_pyfunction!(izigzag, m)?)?;
    m.add_function(wrap_pyfunction!(encode_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(decode_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(inspect, m)?)?;
    m.add_function(wrap_pyfunction!(mse_psnr, m)?)?;
    m.add_function(wrap_pyfunction!(compression_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(std_dev, m)?)?;
    m.add_function(wrap_pyfunction!(nonzero_count, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    Ok(())
}
