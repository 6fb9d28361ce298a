use crate::gf::gf_inv;

/// Generate the substitution table and its inverse.
///
/// `sbox[x]` is the affine transform of the field inverse of `x`;
/// `inv_sbox` is the inverse permutation. Both are generated rather
/// than transcribed, and validated against published values in tests.
pub fn build_sbox() -> ([u8; 256], [u8; 256]) {
    let mut sbox = [0u8; 256];
    let mut inv_sbox = [0u8; 256];
    for x in 0..=255u8 {
        let i = gf_inv(x);
        let s = i ^ i.rotate_left(1) ^ i.rotate_left(2) ^ i.rotate_left(3) ^ i.rotate_left(4) ^ 0x63;
        sbox[x as usize] = s;
        inv_sbox[s as usize] = x;
    }
    (sbox, inv_sbox)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn matches_independent_affine_oracle() {
        let (sbox, inv_sbox) = build_sbox();
        let (oracle_sbox, oracle_inv) = oracle::sbox_pair();
        assert_eq!(sbox, oracle_sbox);
        assert_eq!(inv_sbox, oracle_inv);
        // Spot value frozen from the oracle (inverse of 0 is 0, affine
        // constant alone remains).
        assert_eq!(sbox[0x00], 0x63);
        assert_eq!(sbox[0x53], 0xed);
    }

    #[test]
    fn inverse_permutation() {
        let (sbox, inv_sbox) = build_sbox();
        for x in 0..=255u8 {
            assert_eq!(inv_sbox[sbox[x as usize] as usize], x);
        }
    }

    #[test]
    fn sbox_is_a_bijection() {
        let (sbox, _) = build_sbox();
        let mut seen = [false; 256];
        for s in sbox {
            assert!(!seen[s as usize], "duplicate value {s:#x}");
            seen[s as usize] = true;
        }
    }
}
