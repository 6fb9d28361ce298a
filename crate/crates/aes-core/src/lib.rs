//! AES-128/192/256 block cipher built from fused lookup tables.
//!
//! The cipher state is four 32-bit lanes, one per state column. A full
//! round is 16 table loads and 16 XORs against the tables produced by
//! [`build_ttables`]; the final round substitutes bytes without column
//! mixing. Decryption runs the equivalent inverse cipher, so its rounds
//! have the same shape as encryption but use the inverse tables and
//! key-transformed round keys.
//!
//! Everything in this crate is pure: [`TTableSet`] and
//! [`RoundKeySchedule`] are immutable after construction and can be
//! shared freely across threads.
//!
//! Not constant-time: table lookups leak addresses through the cache.
//! Do not use this where timing side channels matter.

mod block;
mod cipher;
mod gf;
mod schedule;
mod sbox;
mod tables;

#[cfg(any(test, feature = "test-oracles"))]
pub mod oracle;

pub use block::Block128;
pub use cipher::{decrypt_block, encrypt_block};
pub use gf::gf_mul;
pub use schedule::{expand_key, AesError, KeySize, RoundKeySchedule};
pub use sbox::build_sbox;
pub use tables::{build_ttables, tables, TTableSet};

/// Block size in bytes. The cipher supports no other width.
pub const BLOCK_BYTES: usize = 16;
