//! Canonical byte encodings of messages and perturbations, and the bit
//! packing shared with the key format.

use crate::error::{KemError, Result};

/// Appends fixed-width unsigned fields LSB-first into bytes.
#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bits: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Writes the low `width` bits of `value` (`width <= 64`).
    pub fn write(&mut self, value: u64, width: u32) {
        debug_assert!(
            width == 64 || value >> width == 0,
            "value wider than its field"
        );
        for i in 0..width {
            if self.bits.is_multiple_of(8) {
                self.bytes.push(0);
            }
            if (value >> i) & 1 == 1 {
                *self.bytes.last_mut().expect("pushed above") |= 1 << (self.bits % 8);
            }
            self.bits += 1;
        }
    }

    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

/// Reads fields written by [`BitWriter`].
#[derive(Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    bit: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, bit: 0 }
    }

    /// Next `width` bits, or `None` past the end.
    pub fn read(&mut self, width: u32) -> Option<u64> {
        if self.bit + width as usize > self.bytes.len() * 8 {
            return None;
        }
        let mut v = 0u64;
        for i in 0..width {
            let b = self.bit + i as usize;
            if (self.bytes[b / 8] >> (b % 8)) & 1 == 1 {
                v |= 1 << i;
            }
        }
        self.bit += width as usize;
        Some(v)
    }

    /// Whether every unread bit is zero.
    pub fn rest_is_zero(&self) -> bool {
        (self.bit..self.bytes.len() * 8).all(|b| (self.bytes[b / 8] >> (b % 8)) & 1 == 0)
    }

    pub fn position(&self) -> usize {
        self.bit
    }
}

/// Bytes needed for `count` fields of `width` bits.
pub fn packed_len(count: usize, width: u32) -> usize {
    (count * width as usize).div_ceil(8)
}

/// Message symbols in `[0, 2^b)` packed as `b`-bit fields, LSB-first.
pub fn pack_message(m: &[u16], b: u32) -> Result<Vec<u8>> {
    let mut w = BitWriter::new();
    for &s in m {
        if b < 16 && s >> b != 0 {
            return Err(KemError::Input(format!(
                "message symbol {s} does not fit in {b} bits"
            )));
        }
        w.write(s as u64, b);
    }
    Ok(w.finish())
}

/// Inverse of [`pack_message`]; the length must be exact and padding zero.
pub fn unpack_message(bytes: &[u8], n: usize, b: u32) -> Option<Vec<u16>> {
    if bytes.len() != packed_len(n, b) {
        return None;
    }
    let mut r = BitReader::new(bytes);
    let m = (0..n)
        .map(|_| r.read(b).map(|v| v as u16))
        .collect::<Option<Vec<_>>>()?;
    r.rest_is_zero().then_some(m)
}

/// Perturbation numerators `e_i * 2^f` as little-endian two's-complement
/// 64-bit integers.
pub fn perturbation_bytes(e: &[i64]) -> Vec<u8> {
    e.iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// The KDF input `bytes(m) || bytes(e)`.
pub fn key_material(m: &[u16], e: &[i64], b: u32) -> Result<Vec<u8>> {
    let mut out = pack_message(m, b)?;
    out.extend(perturbation_bytes(e));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_round_trip() {
        let mut w = BitWriter::new();
        w.write(5, 3);
        w.write(0x1ff, 9);
        w.write(1, 1);
        let bytes = w.finish();
        assert_eq!(bytes.len(), 2);
        let mut r = BitReader::new(&bytes);
        assert_eq!(r.read(3), Some(5));
        assert_eq!(r.read(9), Some(0x1ff));
        assert_eq!(r.read(1), Some(1));
        assert!(r.rest_is_zero());
        assert_eq!(r.read(4), None);
    }

    #[test]
    fn message_layout_is_lsb_first() {
        assert_eq!(pack_message(&[1, 2, 15], 4).unwrap(), vec![0x21, 0x0f]);
        assert_eq!(unpack_message(&[0x21, 0x0f], 3, 4), Some(vec![1, 2, 15]));
        assert_eq!(unpack_message(&[0x21, 0x1f], 3, 4), None);
        assert_eq!(unpack_message(&[0x21], 3, 4), None);
        assert!(pack_message(&[16], 4).is_err());
    }

    #[test]
    fn perturbation_layout() {
        assert_eq!(
            perturbation_bytes(&[-1, 2]),
            [vec![0xff; 8], vec![2, 0, 0, 0, 0, 0, 0, 0]].concat()
        );
    }
}
