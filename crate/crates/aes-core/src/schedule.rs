use thiserror::Error;

use crate::gf::gf_mul;
use crate::tables::tables;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum AesError {
    #[error("invalid key length {0} bytes, expected 16, 24 or 32")]
    InvalidKeyLength(usize),
}

/// Supported key widths and their round counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeySize {
    Aes128,
    Aes192,
    Aes256,
}

impl KeySize {
    pub fn from_key_len(bytes: usize) -> Option<KeySize> {
        match bytes {
            16 => Some(KeySize::Aes128),
            24 => Some(KeySize::Aes192),
            32 => Some(KeySize::Aes256),
            _ => None,
        }
    }

    pub const fn bits(self) -> usize {
        match self {
            KeySize::Aes128 => 128,
            KeySize::Aes192 => 192,
            KeySize::Aes256 => 256,
        }
    }

    pub const fn key_bytes(self) -> usize {
        self.bits() / 8
    }

    pub const fn rounds(self) -> usize {
        match self {
            KeySize::Aes128 => 10,
            KeySize::Aes192 => 12,
            KeySize::Aes256 => 14,
        }
    }
}

/// Expanded key material for both cipher directions.
///
/// `enc_keys` holds the `rounds + 1` round keys of the standard key
/// expansion. `dec_keys` holds them in reverse order with the middle
/// keys passed through InvMixColumns, which is what gives decryption
/// rounds the same shape as encryption rounds.
#[derive(Clone, PartialEq, Eq)]
pub struct RoundKeySchedule {
    key_size: KeySize,
    rounds: usize,
    enc_keys: Vec<[u32; 4]>,
    dec_keys: Vec<[u32; 4]>,
}

impl RoundKeySchedule {
    pub fn key_size(&self) -> KeySize {
        self.key_size
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn enc_keys(&self) -> &[[u32; 4]] {
        &self.enc_keys
    }

    pub fn dec_keys(&self) -> &[[u32; 4]] {
        &self.dec_keys
    }
}

impl std::fmt::Debug for RoundKeySchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // Key material stays out of logs.
        f.debug_struct("RoundKeySchedule")
            .field("key_size", &self.key_size)
            .field("rounds", &self.rounds)
            .finish_non_exhaustive()
    }
}

/// Expand a 16/24/32-byte cipher key into the full schedule.
pub fn expand_key(key: &[u8]) -> Result<RoundKeySchedule, AesError> {
    let key_size =
        KeySize::from_key_len(key.len()).ok_or(AesError::InvalidKeyLength(key.len()))?;
    let rounds = key_size.rounds();
    let nk = key.len() / 4;
    let total_words = 4 * (rounds + 1);
    let sbox = &tables().sbox;

    let mut w = Vec::with_capacity(total_words);
    for chunk in key.chunks_exact(4) {
        w.push(u32::from_be_bytes(chunk.try_into().unwrap()));
    }
    let mut rcon: u8 = 1;
    for i in nk..total_words {
        let mut temp = w[i - 1];
        if i % nk == 0 {
            temp = sub_word(temp.rotate_left(8), sbox) ^ ((rcon as u32) << 24);
            rcon = gf_mul(rcon, 2);
        } else if nk > 6 && i % nk == 4 {
            temp = sub_word(temp, sbox);
        }
        w.push(w[i - nk] ^ temp);
    }

    let enc_keys: Vec<[u32; 4]> = w
        .chunks_exact(4)
        .map(|c| [c[0], c[1], c[2], c[3]])
        .collect();

    let mut dec_keys: Vec<[u32; 4]> = enc_keys.iter().rev().copied().collect();
    for rk in dec_keys.iter_mut().take(rounds).skip(1) {
        for word in rk.iter_mut() {
            *word = inv_mix_word(*word);
        }
    }

    Ok(RoundKeySchedule {
        key_size,
        rounds,
        enc_keys,
        dec_keys,
    })
}

fn sub_word(w: u32, sbox: &[u8; 256]) -> u32 {
    let b = w.to_be_bytes();
    u32::from_be_bytes([
        sbox[b[0] as usize],
        sbox[b[1] as usize],
        sbox[b[2] as usize],
        sbox[b[3] as usize],
    ])
}

/// InvMixColumns applied to one packed column.
fn inv_mix_word(w: u32) -> u32 {
    let [a, b, c, d] = w.to_be_bytes();
    u32::from_be_bytes([
        gf_mul(14, a) ^ gf_mul(11, b) ^ gf_mul(13, c) ^ gf_mul(9, d),
        gf_mul(9, a) ^ gf_mul(14, b) ^ gf_mul(11, c) ^ gf_mul(13, d),
        gf_mul(13, a) ^ gf_mul(9, b) ^ gf_mul(14, c) ^ gf_mul(11, d),
        gf_mul(11, a) ^ gf_mul(13, b) ^ gf_mul(9, c) ^ gf_mul(14, d),
    ])
}
