//! Portable anymap (PGM/PPM) reading and writing, plus the RGB→gray path.
//!
//! Only `maxval == 255` is accepted so that samples keep their exact 8-bit
//! meaning. `#` comments are skipped anywhere in the header.

use crate::error::{Error, PnmError, Result};

/// One channel of 8-bit samples in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl Plane {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Image("plane dimensions must be non-zero".into()));
        }
        if width.checked_mul(height) != Some(samples.len()) {
            return Err(Error::Image(format!(
                "plane of {width}x{height} needs {} samples, got {}",
                width.saturating_mul(height),
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
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

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }
}

/// A gray (1 plane) or RGB (3 planes) image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    planes: Vec<Plane>,
}

impl Image {
    pub fn from_planes(planes: Vec<Plane>) -> Result<Self> {
        if planes.len() != 1 && planes.len() != 3 {
            return Err(Error::Image(format!(
                "channel count must be 1 or 3, got {}",
                planes.len()
            )));
        }
        let (width, height) = (planes[0].width, planes[0].height);
        if planes.iter().any(|p| p.width != width || p.height != height) {
            return Err(Error::Image("planes differ in dimensions".into()));
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    pub fn gray(plane: Plane) -> Self {
        Self {
            width: plane.width,
            height: plane.height,
            planes: vec![plane],
        }
    }

    /// Builds an image from raw per-channel sample vectors.
    pub fn new(width: usize, height: usize, planes: Vec<Vec<u8>>) -> Result<Self> {
        let planes = planes
            .into_iter()
            .map(|s| Plane::new(width, height, s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_planes(planes)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.planes.len()
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn plane(&self, channel: usize) -> &Plane {
        &self.planes[channel]
    }

    pub fn into_planes(self) -> Vec<Plane> {
        self.planes
    }

    /// Uncompressed size in bytes: width × height × channels.
    pub fn raw_bytes(&self) -> usize {
        self.width * self.height * self.planes.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    AsciiGray,
    AsciiRgb,
    BinaryGray,
    BinaryRgb,
}

impl Format {
    fn channels(self) -> usize {
        match self {
            Format::AsciiGray | Format::BinaryGray => 1,
            Format::AsciiRgb | Format::BinaryRgb => 3,
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Reads an unsigned decimal token; `None` if no digits are present.
    fn number(&mut self) -> Option<(usize, u32)> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value.saturating_mul(10).saturating_add(u32::from(b - b'0'));
            self.pos += 1;
        }
        (self.pos > start).then_some((start, value))
    }

    fn header_field(&mut self, reason: &'static str) -> Result<(usize, u32), PnmError> {
        self.skip_whitespace_and_comments();
        let offset = self.pos;
        let field = self
            .number()
            .ok_or(PnmError::MalformedHeader { offset, reason })?;
        match self.bytes.get(self.pos) {
            None => Ok(field),
            Some(b) if b.is_ascii_whitespace() || *b == b'#' => Ok(field),
            Some(_) => Err(PnmError::MalformedHeader {
                offset: self.pos,
                reason,
            }),
        }
    }
}

/// Parses a P2, P3, P5 or P6 image.
pub fn read_pnm(bytes: &[u8]) -> Result<Image, PnmError> {
    let format = match bytes.get(..2) {
        Some(b"P2") => Format::AsciiGray,
        Some(b"P3") => Format::AsciiRgb,
        Some(b"P5") => Format::BinaryGray,
        Some(b"P6") => Format::BinaryRgb,
        _ => return Err(PnmError::BadMagic { offset: 0 }),
    };
    if bytes.get(2).is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#') {
        return Err(PnmError::BadMagic { offset: 0 });
    }
    let mut cur = Cursor { bytes, pos: 2 };
    let (w_off, width) = cur.header_field("expected width")?;
    let (h_off, height) = cur.header_field("expected height")?;
    let (m_off, maxval) = cur.header_field("expected maxval")?;
    if width == 0 {
        return Err(PnmError::MalformedHeader {
            offset: w_off,
            reason: "width must be non-zero",
        });
    }
    if height == 0 {
        return Err(PnmError::MalformedHeader {
            offset: h_off,
            reason: "height must be non-zero",
        });
    }
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval {
            offset: m_off,
            maxval,
        });
    }
    let (width, height) = (width as usize, height as usize);
    let channels = format.channels();
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or(PnmError::MalformedHeader {
            offset: w_off,
            reason: "dimensions overflow",
        })?;

    let interleaved: Vec<u8> = match format {
        Format::BinaryGray | Format::BinaryRgb => {
            // exactly one whitespace byte separates maxval from the raster
            let start = cur.pos + 1;
            let available = bytes.len().saturating_sub(start);
            if available < expected {
                return Err(PnmError::Truncated {
                    offset: bytes.len(),
                    expected,
                    found: available,
                });
            }
            bytes[start..start + expected].to_vec()
        }
        Format::AsciiGray | Format::AsciiRgb => {
            let mut out = Vec::with_capacity(expected.min(1 << 24));
            while out.len() < expected {
                match cur.number() {
                    Some((offset, v)) => {
                        let v = u8::try_from(v).map_err(|_| PnmError::BadSample { offset })?;
                        out.push(v);
                    }
                    None if cur.pos >= bytes.len() => {
                        return Err(PnmError::Truncated {
                            offset: cur.pos,
                            expected,
                            found: out.len(),
                        })
                    }
                    None => return Err(PnmError::BadSample { offset: cur.pos }),
                }
            }
            out
        }
    };

    let planes = (0..channels)
        .map(|c| Plane {
            width,
            height,
            samples: interleaved.iter().skip(c).step_by(channels).copied().collect(),
        })
        .collect();
    Ok(Image {
        width,
        height,
        planes,
    })
}

/// Serializes as P5/P6 (binary) or P2/P3 (`ascii`).
pub fn write_pnm(image: &Image, ascii: bool) -> Vec<u8> {
    let magic = match (image.channels(), ascii) {
        (1, false) => "P5",
        (1, true) => "P2",
        (_, false) => "P6",
        (_, true) => "P3",
    };
    let mut out = format!("{magic}\n{} {}\n255\n", image.width, image.height).into_bytes();
    let n = image.width * image.height;
    if ascii {
        for i in 0..n {
            let line: Vec<String> = image
                .planes
                .iter()
                .map(|p| p.samples[i].to_string())
                .collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    } else {
        out.reserve(n * image.channels());
        for i in 0..n {
            out.extend(image.planes.iter().map(|p| p.samples[i]));
        }
    }
    out
}

/// BT.601 luma, rounded half away from zero. Gray input is returned as is.
pub fn to_grayscale(image: &Image) -> Image {
    if image.channels() == 1 {
        return image.clone();
    }
    let [r, g, b] = [&image.planes[0], &image.planes[1], &image.planes[2]];
    let samples = r
        .samples
        .iter()
        .zip(&g.samples)
        .zip(&b.samples)
        .map(|((&r, &g), &b)| luma(r, g, b))
        .collect();
    Image::gray(Plane {
        width: image.width,
        height: image.height,
        samples,
    })
}

fn luma(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    y.round().clamp(0.0, 255.0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binary_gray() {
        let mut bytes = b"P5 2 2 255\n".to_vec();
        bytes.extend_from_slice(&[0, 5, 10, 255]);
        let img = read_pnm(&bytes).unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (2, 2, 1));
        assert_eq!(img.plane(0).samples(), &[0, 5, 10, 255]);
    }

    #[test]
    fn ascii_gray() {
        let img = read_pnm(b"P2 1 1 255\n107").unwrap();
        assert_eq!(img.plane(0).samples(), &[107]);
    }

    #[test]
    fn binary_rgb_is_deinterleaved() {
        let mut bytes = b"P6\n3 1\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let img = read_pnm(&bytes).unwrap();
        assert_eq!(img.plane(0).samples(), &[1, 4, 7]);
        assert_eq!(img.plane(1).samples(), &[2, 5, 8]);
        assert_eq!(img.plane(2).samples(), &[3, 6, 9]);
    }

    #[test]
    fn comments_are_skipped() {
        let img = read_pnm(b"P2\n# made by hand\n2 # width\n1\n255\n# data\n3 4\n").unwrap();
        assert_eq!(img.plane(0).samples(), &[3, 4]);
    }

    #[test]
    fn single_pixel_writes_exact_bytes() {
        let img = Image::new(1, 1, vec![vec![0]]).unwrap();
        assert_eq!(write_pnm(&img, false), b"P5\n1 1\n255\n\x00");
    }

    #[test]
    fn rgb_writes_interleaved() {
        let img = Image::new(2, 2, vec![vec![1, 2, 3, 4], vec![5, 6, 7, 8], vec![9, 10, 11, 12]])
            .unwrap();
        let bytes = write_pnm(&img, false);
        assert!(bytes.starts_with(b"P6\n2 2\n255\n"));
        assert_eq!(&bytes[11..], &[1, 5, 9, 2, 6, 10, 3, 7, 11, 4, 8, 12]);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(read_pnm(b"P7 1 1 255\n"), Err(PnmError::BadMagic { offset: 0 }));
        assert_eq!(
            read_pnm(b"P5 2 2 65535\n"),
            Err(PnmError::UnsupportedMaxval {
                offset: 7,
                maxval: 65535
            })
        );
        assert_eq!(
            read_pnm(b"P5 2 2 100\n"),
            Err(PnmError::UnsupportedMaxval {
                offset: 7,
                maxval: 100
            })
        );
        assert!(matches!(
            read_pnm(b"P5 2 x 255\n"),
            Err(PnmError::MalformedHeader { offset: 5, .. })
        ));
        assert_eq!(
            read_pnm(b"P5 2 2 255\n\x01\x02"),
            Err(PnmError::Truncated {
                offset: 13,
                expected: 4,
                found: 2
            })
        );
        assert!(matches!(read_pnm(b"P2 2 1 255\n1"), Err(PnmError::Truncated { .. })));
        assert_eq!(read_pnm(b"P2 1 1 255\n300"), Err(PnmError::BadSample { offset: 11 }));
        assert!(matches!(read_pnm(b"P5 0 1 255\n"), Err(PnmError::MalformedHeader { .. })));
        assert_eq!(read_pnm(b""), Err(PnmError::BadMagic { offset: 0 }));
    }

    #[test]
    fn grayscale_values() {
        let img = Image::new(2, 1, vec![vec![255, 255], vec![255, 0], vec![255, 0]]).unwrap();
        let gray = to_grayscale(&img);
        // round(0.299 * 255) = round(76.245)
        assert_eq!(gray.plane(0).samples(), &[255, 76]);
        assert_eq!(to_grayscale(&gray), gray);
    }

    fn arb_image() -> impl Strategy<Value = Image> {
        (1usize..12, 1usize..12, prop_oneof![Just(1usize), Just(3usize)]).prop_flat_map(
            |(w, h, c)| {
                proptest::collection::vec(proptest::collection::vec(any::<u8>(), w * h), c)
                    .prop_map(move |planes| Image::new(w, h, planes).unwrap())
            },
        )
    }

    proptest! {
        #[test]
        fn pnm_round_trip(img in arb_image(), ascii in any::<bool>()) {
            prop_assert_eq!(read_pnm(&write_pnm(&img, ascii)).unwrap(), img);
        }

        #[test]
        fn grayscale_idempotent(img in arb_image()) {
            let once = to_grayscale(&img);
            prop_assert_eq!(to_grayscale(&once), once);
        }
    }
}
