//! Naive reference cipher used only by test suites.
//!
//! Nothing here is shared with the table-driven path: field
//! multiplication is a carry-less multiply followed by reduction, the
//! substitution table comes from an exhaustive inverse search plus the
//! bit-matrix affine map, key expansion works on byte words, and the
//! cipher applies the four round transformations one at a time on a
//! byte-array state. Compiled only for tests or under the
//! `test-oracles` feature.

/// Carry-less multiply into 16 bits, then reduce by 0x11B.
pub fn gf_mul(a: u8, b: u8) -> u8 {
    let mut prod: u16 = 0;
    for i in 0..8 {
        if (b >> i) & 1 == 1 {
            prod ^= (a as u16) << i;
        }
    }
    for bit in (8..16).rev() {
        if (prod >> bit) & 1 == 1 {
            prod ^= 0x11b << (bit - 8);
        }
    }
    prod as u8
}

/// Substitution table and inverse, from exhaustive inverse search.
pub fn sbox_pair() -> ([u8; 256], [u8; 256]) {
    let mut sbox = [0u8; 256];
    let mut inv_sbox = [0u8; 256];
    for x in 0..=255u8 {
        let inv = if x == 0 {
            0
        } else {
            (1..=255u8)
                .find(|&y| gf_mul(x, y) == 1)
                .expect("every nonzero element has an inverse")
        };
        let mut s = 0u8;
        for i in 0..8 {
            let bit = (inv >> i)
                ^ (inv >> ((i + 4) % 8))
                ^ (inv >> ((i + 5) % 8))
                ^ (inv >> ((i + 6) % 8))
                ^ (inv >> ((i + 7) % 8))
                ^ (0x63 >> i);
            s |= (bit & 1) << i;
        }
        sbox[x as usize] = s;
        inv_sbox[s as usize] = x;
    }
    (sbox, inv_sbox)
}

/// Four-transformation AES over a 16-byte state in input order
/// (`state[r][c]` lives at index `4c + r`).
pub struct NaiveAes {
    round_keys: Vec<[u8; 16]>,
    rounds: usize,
    sbox: [u8; 256],
    inv_sbox: [u8; 256],
}

impl NaiveAes {
    /// Panics on key lengths other than 16/24/32; this is test code.
    pub fn new(key: &[u8]) -> NaiveAes {
        let (sbox, inv_sbox) = sbox_pair();
        let nk = key.len() / 4;
        let rounds = match key.len() {
            16 => 10,
            24 => 12,
            32 => 14,
            n => panic!("bad key length {n}"),
        };
        let total = 4 * (rounds + 1);
        let mut w: Vec<[u8; 4]> = key
            .chunks_exact(4)
            .map(|c| [c[0], c[1], c[2], c[3]])
            .collect();
        let mut rcon = 1u8;
        for i in nk..total {
            let mut temp = w[i - 1];
            if i % nk == 0 {
                temp = [temp[1], temp[2], temp[3], temp[0]];
                for b in temp.iter_mut() {
                    *b = sbox[*b as usize];
                }
                temp[0] ^= rcon;
                rcon = gf_mul(rcon, 2);
            } else if nk > 6 && i % nk == 4 {
                for b in temp.iter_mut() {
                    *b = sbox[*b as usize];
                }
            }
            let prev = w[i - nk];
            w.push([
                prev[0] ^ temp[0],
                prev[1] ^ temp[1],
                prev[2] ^ temp[2],
                prev[3] ^ temp[3],
            ]);
        }
        let round_keys = (0..=rounds)
            .map(|r| {
                let mut rk = [0u8; 16];
                for c in 0..4 {
                    rk[4 * c..4 * c + 4].copy_from_slice(&w[4 * r + c]);
                }
                rk
            })
            .collect();
        NaiveAes {
            round_keys,
            rounds,
            sbox,
            inv_sbox,
        }
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn round_key(&self, r: usize) -> [u8; 16] {
        self.round_keys[r]
    }

    pub fn encrypt(&self, block: [u8; 16]) -> [u8; 16] {
        let mut s = block;
        add_round_key(&mut s, &self.round_keys[0]);
        for r in 1..self.rounds {
            sub_bytes(&mut s, &self.sbox);
            shift_rows(&mut s);
            mix_columns(&mut s);
            add_round_key(&mut s, &self.round_keys[r]);
        }
        sub_bytes(&mut s, &self.sbox);
        shift_rows(&mut s);
        add_round_key(&mut s, &self.round_keys[self.rounds]);
        s
    }

    pub fn decrypt(&self, block: [u8; 16]) -> [u8; 16] {
        let mut s = block;
        add_round_key(&mut s, &self.round_keys[self.rounds]);
        inv_shift_rows(&mut s);
        sub_bytes(&mut s, &self.inv_sbox);
        for r in (1..self.rounds).rev() {
            add_round_key(&mut s, &self.round_keys[r]);
            inv_mix_columns(&mut s);
            inv_shift_rows(&mut s);
            sub_bytes(&mut s, &self.inv_sbox);
        }
        add_round_key(&mut s, &self.round_keys[0]);
        s
    }
}

fn add_round_key(s: &mut [u8; 16], rk: &[u8; 16]) {
    for (b, k) in s.iter_mut().zip(rk) {
        *b ^= k;
    }
}

fn sub_bytes(s: &mut [u8; 16], table: &[u8; 256]) {
    for b in s.iter_mut() {
        *b = table[*b as usize];
    }
}

// Row r rotates left by r columns: state[r][c] <- state[r][(c + r) % 4].
fn shift_rows(s: &mut [u8; 16]) {
    let old = *s;
    for r in 1..4 {
        for c in 0..4 {
            s[4 * c + r] = old[4 * ((c + r) % 4) + r];
        }
    }
}

fn inv_shift_rows(s: &mut [u8; 16]) {
    let old = *s;
    for r in 1..4 {
        for c in 0..4 {
            s[4 * ((c + r) % 4) + r] = old[4 * c + r];
        }
    }
}

fn mix_columns(s: &mut [u8; 16]) {
    for c in 0..4 {
        let col = &mut s[4 * c..4 * c + 4];
        let [a0, a1, a2, a3] = [col[0], col[1], col[2], col[3]];
        col[0] = gf_mul(2, a0) ^ gf_mul(3, a1) ^ a2 ^ a3;
        col[1] = a0 ^ gf_mul(2, a1) ^ gf_mul(3, a2) ^ a3;
        col[2] = a0 ^ a1 ^ gf_mul(2, a2) ^ gf_mul(3, a3);
        col[3] = gf_mul(3, a0) ^ a1 ^ a2 ^ gf_mul(2, a3);
    }
}

fn inv_mix_columns(s: &mut [u8; 16]) {
    for c in 0..4 {
        let col = &mut s[4 * c..4 * c + 4];
        let [a0, a1, a2, a3] = [col[0], col[1], col[2], col[3]];
        col[0] = gf_mul(14, a0) ^ gf_mul(11, a1) ^ gf_mul(13, a2) ^ gf_mul(9, a3);
        col[1] = gf_mul(9, a0) ^ gf_mul(14, a1) ^ gf_mul(11, a2) ^ gf_mul(13, a3);
        col[2] = gf_mul(13, a0) ^ gf_mul(9, a1) ^ gf_mul(14, a2) ^ gf_mul(11, a3);
        col[3] = gf_mul(11, a0) ^ gf_mul(13, a1) ^ gf_mul(9, a2) ^ gf_mul(14, a3);
    }
}
