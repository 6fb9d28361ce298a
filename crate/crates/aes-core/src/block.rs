use std::fmt;
use std::ops::{BitXor, BitXorAssign};

/// One 128-bit block as four 32-bit lanes (one grid "pixel").
///
/// Packing rule: lane `k` holds input bytes `4k..4k+4` with byte 0 in
/// the most significant position, so lane `k` is column `k` of the AES
/// state and `(w0 >> 24) & 0xff` is the first byte of the block.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Block128 {
    pub w0: u32,
    pub w1: u32,
    pub w2: u32,
    pub w3: u32,
}

impl Block128 {
    pub const ZERO: Block128 = Block128::new(0, 0, 0, 0);

    pub const fn new(w0: u32, w1: u32, w2: u32, w3: u32) -> Self {
        Block128 { w0, w1, w2, w3 }
    }

    pub fn from_bytes(bytes: &[u8; 16]) -> Self {
        let word = |i: usize| u32::from_be_bytes(bytes[4 * i..4 * i + 4].try_into().unwrap());
        Block128::new(word(0), word(1), word(2), word(3))
    }

    pub fn to_bytes(self) -> [u8; 16] {
        let mut out = [0u8; 16];
        for (i, w) in self.words().into_iter().enumerate() {
            out[4 * i..4 * i + 4].copy_from_slice(&w.to_be_bytes());
        }
        out
    }

    pub const fn words(self) -> [u32; 4] {
        [self.w0, self.w1, self.w2, self.w3]
    }

    pub const fn from_words(w: [u32; 4]) -> Self {
        Block128::new(w[0], w[1], w[2], w[3])
    }
}

impl From<[u8; 16]> for Block128 {
    fn from(bytes: [u8; 16]) -> Self {
        Block128::from_bytes(&bytes)
    }
}

impl From<Block128> for [u8; 16] {
    fn from(b: Block128) -> Self {
        b.to_bytes()
    }
}

impl BitXor for Block128 {
    type Output = Block128;

    fn bitxor(self, rhs: Block128) -> Block128 {
        Block128::new(
            self.w0 ^ rhs.w0,
            self.w1 ^ rhs.w1,
            self.w2 ^ rhs.w2,
            self.w3 ^ rhs.w3,
        )
    }
}

impl BitXorAssign for Block128 {
    fn bitxor_assign(&mut self, rhs: Block128) {
        *self = *self ^ rhs;
    }
}

impl fmt::Debug for Block128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block128(")?;
        for b in self.to_bytes() {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_roundtrip_is_lossless() {
        let mut bytes = [0u8; 16];
        for (i, b) in bytes.iter_mut().enumerate() {
            *b = (i as u8).wrapping_mul(0x1f).wrapping_add(3);
        }
        assert_eq!(Block128::from_bytes(&bytes).to_bytes(), bytes);
    }

    #[test]
    fn lane_packing_puts_byte_zero_on_top() {
        let mut bytes = [0u8; 16];
        bytes[0] = 0xde;
        bytes[3] = 0x01;
        bytes[4] = 0xad;
        let b = Block128::from_bytes(&bytes);
        assert_eq!(b.w0, 0xde00_0001);
        assert_eq!(b.w1, 0xad00_0000);
    }

    #[test]
    fn xor_is_lanewise() {
        let a = Block128::new(1, 2, 3, 4);
        let b = Block128::new(0xff, 0xff, 0xff, 0xff);
        assert_eq!(a ^ b, Block128::new(0xfe, 0xfd, 0xfc, 0xfb));
        assert_eq!(a ^ a, Block128::ZERO);
    }
}
