//! Arithmetic in GF(2^8) with the AES reduction polynomial
//! x^8 + x^4 + x^3 + x + 1 (0x11B).

/// Multiply two field elements.
///
/// Shift-and-add: each set bit of `b` adds a doubled copy of `a`, and
/// doubling reduces by 0x1B whenever the x^7 term overflows.
pub fn gf_mul(a: u8, b: u8) -> u8 {
    let (mut a, mut b) = (a, b);
    let mut acc = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        let overflow = a & 0x80 != 0;
        a <<= 1;
        if overflow {
            a ^= 0x1b;
        }
        b >>= 1;
    }
    acc
}

/// Multiplicative inverse, with 0 mapped to 0.
///
/// x^254 equals x^-1 for nonzero x, and the exponentiation sends 0 to
/// 0, which is the convention the S-box needs.
pub(crate) fn gf_inv(x: u8) -> u8 {
    // x^254 = x^2 * x^4 * x^8 * x^16 * x^32 * x^64 * x^128
    let mut square = gf_mul(x, x);
    let mut acc = square;
    for _ in 0..6 {
        square = gf_mul(square, square);
        acc = gf_mul(acc, square);
    }
    acc
}
