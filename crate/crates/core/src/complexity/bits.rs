//! MSB-first bit buffer with Elias gamma codes.

use super::ComplexityError;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitWriter {
    bytes: Vec<u8>,
    len: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_bit(&mut self, bit: bool) {
        let offset = (self.len % 8) as u8;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> offset;
        }
        self.len += 1;
    }

    /// Low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u128, width: u32) {
        for i in (0..width).rev() {
            self.push_bit((value >> i) & 1 == 1);
        }
    }

    /// Elias gamma code of `value >= 1`: `floor(log2 value)` zeros followed
    /// by `value` in binary.
    pub fn push_gamma(&mut self, value: u128) {
        assert!(value >= 1, "gamma code is defined for positive integers");
        let n = 127 - value.leading_zeros();
        for _ in 0..n {
            self.push_bit(false);
        }
        self.push_bits(value, n + 1);
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn into_bytes(self) -> (Vec<u8>, u64) {
        (self.bytes, self.len)
    }
}

/// Length in bits of the gamma code of `value >= 1`.
pub fn gamma_len(value: u128) -> u64 {
    2 * (127 - value.leading_zeros()) as u64 + 1
}

pub struct BitReader<'a> {
    bytes: &'a [u8],
    len: u64,
    pos: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8], len: u64) -> Self {
        Self { bytes, len, pos: 0 }
    }

    pub fn read_bit(&mut self) -> Result<bool, ComplexityError> {
        if self.pos >= self.len {
            return Err(ComplexityError::Truncated);
        }
        let byte = self.bytes[(self.pos / 8) as usize];
        let bit = byte & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, width: u32) -> Result<u128, ComplexityError> {
        let mut v = 0u128;
        for _ in 0..width {
            v = (v << 1) | self.read_bit()? as u128;
        }
        Ok(v)
    }

    pub fn read_gamma(&mut self) -> Result<u128, ComplexityError> {
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 127 {
                return Err(ComplexityError::Corrupt("gamma prefix too long".into()));
            }
        }
        let rest = self.read_bits(zeros)?;
        Ok((1u128 << zeros) | rest)
    }
}
