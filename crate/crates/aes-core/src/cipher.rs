//! The fused round function.
//!
//! Byte selection convention: lane `i` is state column `i` and the top
//! lane byte is row 0. ShiftRows rotates row `r` left by `r` columns,
//! so output column `i` draws its row-`r` byte from column
//! `(i + r) mod 4`; the inverse cipher draws from `(i - r) mod 4`.
//! Each round is then 16 table loads XORed with the round key, and the
//! final round substitutes bytes with the plain S-box (no column mix).

use crate::block::Block128;
use crate::schedule::RoundKeySchedule;
use crate::tables::TTableSet;

#[inline(always)]
fn b0(w: u32) -> usize {
    (w >> 24) as usize
}

#[inline(always)]
fn b1(w: u32) -> usize {
    ((w >> 16) & 0xff) as usize
}

#[inline(always)]
fn b2(w: u32) -> usize {
    ((w >> 8) & 0xff) as usize
}

#[inline(always)]
fn b3(w: u32) -> usize {
    (w & 0xff) as usize
}

/// Encrypt one block.
pub fn encrypt_block(block: Block128, ks: &RoundKeySchedule, t: &TTableSet) -> Block128 {
    let rk = ks.enc_keys();
    let [mut s0, mut s1, mut s2, mut s3] = block.words();
    s0 ^= rk[0][0];
    s1 ^= rk[0][1];
    s2 ^= rk[0][2];
    s3 ^= rk[0][3];

    for k in rk.iter().take(ks.rounds()).skip(1) {
        let o0 = t.t0[b0(s0)] ^ t.t1[b1(s1)] ^ t.t2[b2(s2)] ^ t.t3[b3(s3)] ^ k[0];
        let o1 = t.t0[b0(s1)] ^ t.t1[b1(s2)] ^ t.t2[b2(s3)] ^ t.t3[b3(s0)] ^ k[1];
        let o2 = t.t0[b0(s2)] ^ t.t1[b1(s3)] ^ t.t2[b2(s0)] ^ t.t3[b3(s1)] ^ k[2];
        let o3 = t.t0[b0(s3)] ^ t.t1[b1(s0)] ^ t.t2[b2(s1)] ^ t.t3[b3(s2)] ^ k[3];
        (s0, s1, s2, s3) = (o0, o1, o2, o3);
    }

    let k = &rk[ks.rounds()];
    let sb = |i: usize| t.sbox[i] as u32;
    let o0 = (sb(b0(s0)) << 24 | sb(b1(s1)) << 16 | sb(b2(s2)) << 8 | sb(b3(s3))) ^ k[0];
    let o1 = (sb(b0(s1)) << 24 | sb(b1(s2)) << 16 | sb(b2(s3)) << 8 | sb(b3(s0))) ^ k[1];
    let o2 = (sb(b0(s2)) << 24 | sb(b1(s3)) << 16 | sb(b2(s0)) << 8 | sb(b3(s1))) ^ k[2];
    let o3 = (sb(b0(s3)) << 24 | sb(b1(s0)) << 16 | sb(b2(s1)) << 8 | sb(b3(s2))) ^ k[3];
    Block128::new(o0, o1, o2, o3)
}

/// Decrypt one block.
///
/// Mirror of [`encrypt_block`]: inverse tables, InvMixColumns-adjusted
/// round keys, and the inverse row rotation in the byte selection.
pub fn decrypt_block(block: Block128, ks: &RoundKeySchedule, t: &TTableSet) -> Block128 {
    let rk = ks.dec_keys();
    let [mut s0, mut s1, mut s2, mut s3] = block.words();
    s0 ^= rk[0][0];
    s1 ^= rk[0][1];
    s2 ^= rk[0][2];
    s3 ^= rk[0][3];

    for k in rk.iter().take(ks.rounds()).skip(1) {
        let o0 = t.it0[b0(s0)] ^ t.it1[b1(s3)] ^ t.it2[b2(s2)] ^ t.it3[b3(s1)] ^ k[0];
        let o1 = t.it0[b0(s1)] ^ t.it1[b1(s0)] ^ t.it2[b2(s3)] ^ t.it3[b3(s2)] ^ k[1];
        let o2 = t.it0[b0(s2)] ^ t.it1[b1(s1)] ^ t.it2[b2(s0)] ^ t.it3[b3(s3)] ^ k[2];
        let o3 = t.it0[b0(s3)] ^ t.it1[b1(s2)] ^ t.it2[b2(s1)] ^ t.it3[b3(s0)] ^ k[3];
        (s0, s1, s2, s3) = (o0, o1, o2, o3);
    }

    let k = &rk[ks.rounds()];
    let sb = |i: usize| t.inv_sbox[i] as u32;
    let o0 = (sb(b0(s0)) << 24 | sb(b1(s3)) << 16 | sb(b2(s2)) << 8 | sb(b3(s1))) ^ k[0];
    let o1 = (sb(b0(s1)) << 24 | sb(b1(s0)) << 16 | sb(b2(s3)) << 8 | sb(b3(s2))) ^ k[1];
    let o2 = (sb(b0(s2)) << 24 | sb(b1(s1)) << 16 | sb(b2(s0)) << 8 | sb(b3(s3))) ^ k[2];
    let o3 = (sb(b0(s3)) << 24 | sb(b1(s2)) << 16 | sb(b2(s1)) << 8 | sb(b3(s0))) ^ k[3];
    Block128::new(o0, o1, o2, o3)
}
