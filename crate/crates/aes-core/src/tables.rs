use std::sync::OnceLock;

use crate::gf::gf_mul;
use crate::sbox::build_sbox;

/// The fused round tables plus the raw substitution tables.
///
/// `t0[x]` packs the MixColumns multiples of `sbox[x]` as the bytes
/// `(2s, s, s, 3s)`, most significant first; `t1..t3` are the same
/// word rotated right by 8, 16 and 24 bits. The inverse tables do the
/// same with `inv_sbox` and the InvMixColumns coefficients
/// `(14, 9, 13, 11)`.
pub struct TTableSet {
    pub t0: [u32; 256],
    pub t1: [u32; 256],
    pub t2: [u32; 256],
    pub t3: [u32; 256],
    pub it0: [u32; 256],
    pub it1: [u32; 256],
    pub it2: [u32; 256],
    pub it3: [u32; 256],
    pub sbox: [u8; 256],
    pub inv_sbox: [u8; 256],
}

/// Build the table set from field arithmetic.
///
/// Tables are generated at startup, never transcribed; two published
/// words are asserted as a construction cross-check.
pub fn build_ttables() -> TTableSet {
    let (sbox, inv_sbox) = build_sbox();
    let mut set = TTableSet {
        t0: [0; 256],
        t1: [0; 256],
        t2: [0; 256],
        t3: [0; 256],
        it0: [0; 256],
        it1: [0; 256],
        it2: [0; 256],
        it3: [0; 256],
        sbox,
        inv_sbox,
    };
    for x in 0..256 {
        let s = sbox[x];
        let fwd = u32::from_be_bytes([gf_mul(2, s), s, s, gf_mul(3, s)]);
        set.t0[x] = fwd;
        set.t1[x] = fwd.rotate_right(8);
        set.t2[x] = fwd.rotate_right(16);
        set.t3[x] = fwd.rotate_right(24);

        let e = inv_sbox[x];
        let inv = u32::from_be_bytes([gf_mul(14, e), gf_mul(9, e), gf_mul(13, e), gf_mul(11, e)]);
        set.it0[x] = inv;
        set.it1[x] = inv.rotate_right(8);
        set.it2[x] = inv.rotate_right(16);
        set.it3[x] = inv.rotate_right(24);
    }
    assert_eq!(set.t0[0], 0xc663_63a5, "forward table spot check failed");
    assert_eq!(set.it0[0], 0x51f4_a750, "inverse table spot check failed");
    set
}

/// Process-wide table set, built on first use.
pub fn tables() -> &'static TTableSet {
    static TABLES: OnceLock<TTableSet> = OnceLock::new();
    TABLES.get_or_init(build_ttables)
}
