//! MSB-first bit packing.

#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    acc: u32,
    nbits: u8,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `count` bits of `value`, most significant first.
    pub fn put(&mut self, value: u32, count: u8) {
        debug_assert!(count <= 24);
        for i in (0..count).rev() {
            self.acc = (self.acc << 1) | ((value >> i) & 1);
            self.nbits += 1;
            if self.nbits == 8 {
                self.bytes.push(self.acc as u8);
                self.acc = 0;
                self.nbits = 0;
            }
        }
    }

    pub fn bit_len(&self) -> usize {
        self.bytes.len() * 8 + usize::from(self.nbits)
    }

    /// Pads the last partial byte with 1-bits.
    pub fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            let pad = 8 - self.nbits;
            self.put((1 << pad) - 1, pad);
        }
        self.bytes
    }
}

#[derive(Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn bit(&mut self) -> Option<u32> {
        let byte = *self.bytes.get(self.pos / 8)?;
        let bit = (byte >> (7 - self.pos % 8)) & 1;
        self.pos += 1;
        Some(u32::from(bit))
    }

    pub fn bits(&mut self, count: u8) -> Option<u32> {
        let mut v = 0;
        for _ in 0..count {
            v = (v << 1) | self.bit()?;
        }
        Some(v)
    }

    pub fn position(&self) -> usize {
        self.pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msb_first_with_one_padding() {
        let mut w = BitWriter::new();
        w.put(0b101, 3);
        assert_eq!(w.bit_len(), 3);
        assert_eq!(w.finish(), vec![0b1011_1111]);

        let mut r = BitReader::new(&[0b1011_0000, 0xff]);
        assert_eq!(r.bits(3), Some(0b101));
        assert_eq!(r.bits(13), Some(0b1_0000_1111_1111));
        assert_eq!(r.bit(), None);
        assert_eq!(r.position(), 16);
    }

    #[test]
    fn empty_writer_emits_nothing() {
        assert!(BitWriter::new().finish().is_empty());
    }
}
