//! Block cipher modes over the grid dispatch engine.
//!
//! ECB both ways, counter mode both ways and CBC decryption run as
//! per-block kernels; only CBC encryption is inherently sequential (a
//! block's ciphertext feeds the next block), so it runs as a plain
//! host loop and never touches a backend. Inputs larger than one grid
//! are chained across dispatches: the counter keeps a running block
//! offset and CBC decryption carries the previous grid's last
//! ciphertext block as the next grid's IV.
//!
//! Counter derivation is the lane-carry scheme of [`ctr_state`]: lane
//! 0 is the low word and carries ripple upward. That is self-
//! consistent between encrypt and decrypt here but is not the
//! big-endian counter of SP 800-38A, so ciphertexts are not
//! interchangeable with standard CTR implementations.

mod cbc;
mod ctr;
mod ecb;
pub mod kernels;
mod padding;

pub use cbc::{cbc_decrypt, cbc_encrypt};
pub use ctr::ctr;
pub use ecb::ecb;
pub use padding::{pad, unpad};

use std::fmt;
use std::str::FromStr;

use aes_core::{AesError, Block128};
use dispatch_engine::{BackendId, DispatchError, DispatchStats, Engine};
use grid_model::{GridDims, GridError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Ecb,
    Ctr,
    Cbc,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ecb => "ecb",
            Mode::Ctr => "ctr",
            Mode::Cbc => "cbc",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "ecb" => Ok(Mode::Ecb),
            "ctr" => Ok(Mode::Ctr),
            "cbc" => Ok(Mode::Cbc),
            other => Err(format!("unknown mode `{other}` (ecb|ctr|cbc)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Encrypt,
    Decrypt,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Encrypt => "enc",
            Direction::Decrypt => "dec",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Direction, String> {
        match s {
            "enc" | "encrypt" => Ok(Direction::Encrypt),
            "dec" | "decrypt" => Ok(Direction::Decrypt),
            other => Err(format!("unknown direction `{other}` (enc|dec)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PaddingPolicy {
    /// Input must already be block-aligned.
    None,
    /// PKCS#7: append n bytes of value n, 1 <= n <= 16.
    #[default]
    Pkcs7,
}

impl FromStr for PaddingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<PaddingPolicy, String> {
        match s {
            "none" => Ok(PaddingPolicy::None),
            "pkcs7" => Ok(PaddingPolicy::Pkcs7),
            other => Err(format!("unknown padding `{other}` (pkcs7|none)")),
        }
    }
}

/// Everything a mode run needs to know about its cipher setup.
#[derive(Debug, Clone)]
pub struct ModeParams {
    pub mode: Mode,
    pub direction: Direction,
    pub key: Vec<u8>,
    /// Required for CTR and CBC; ignored by ECB.
    pub iv: Option<Block128>,
    /// Ignored by CTR, which has stream semantics.
    pub padding: PaddingPolicy,
}

impl ModeParams {
    fn require_iv(&self) -> Result<Block128, ModeError> {
        self.iv.ok_or(ModeError::MissingIv(self.mode))
    }
}

/// Where a mode run executes: which engine, backend, and grid shape.
///
/// The grid shape only controls chunking; outputs are identical for
/// any dims, which the test suites assert.
#[derive(Clone, Copy)]
pub struct ModeContext<'e> {
    pub engine: &'e Engine,
    pub backend: BackendId,
    pub dims: GridDims,
}

impl<'e> ModeContext<'e> {
    pub fn new(engine: &'e Engine, backend: BackendId) -> ModeContext<'e> {
        ModeContext {
            engine,
            backend,
            dims: GridDims::DEFAULT,
        }
    }

    pub fn with_dims(engine: &'e Engine, backend: BackendId, dims: GridDims) -> ModeContext<'e> {
        ModeContext {
            engine,
            backend,
            dims,
        }
    }
}

#[derive(Debug, Error)]
pub enum ModeError {
    #[error("data length {0} is not block-aligned (16 bytes) and padding is `none`")]
    NotBlockAligned(usize),
    #[error("padding verification failed")]
    BadPadding,
    #[error("mode `{0}` requires an IV")]
    MissingIv(Mode),
    #[error(transparent)]
    Aes(#[from] AesError),
    #[error(transparent)]
    Dispatch(#[from] DispatchError),
}

impl From<GridError> for ModeError {
    fn from(e: GridError) -> ModeError {
        match e {
            GridError::NotBlockAligned(n) => ModeError::NotBlockAligned(n),
            // Mode code only packs and addresses within bounds.
            GridError::OutOfBounds { .. } => unreachable!("mode layer stays in bounds: {e}"),
        }
    }
}

/// The mode capability matrix: which (mode, direction) pairs run as
/// grid dispatches. Everything does except CBC encryption, where each
/// block depends on the previous block's ciphertext.
pub fn uses_engine(mode: Mode, direction: Direction) -> bool {
    !matches!((mode, direction), (Mode::Cbc, Direction::Encrypt))
}

/// Route to the right mode operation.
pub fn process(ctx: &ModeContext, data: &[u8], params: &ModeParams) -> Result<Vec<u8>, ModeError> {
    process_with_stats(ctx, data, params).map(|(bytes, _)| bytes)
}

/// Same as [`process`], returning the accumulated dispatch timing
/// split across all grids of the run. The host-sequential CBC
/// encryption path reports its loop time as kernel time with zero
/// copies.
pub fn process_with_stats(
    ctx: &ModeContext,
    data: &[u8],
    params: &ModeParams,
) -> Result<(Vec<u8>, DispatchStats), ModeError> {
    match (params.mode, params.direction) {
        (Mode::Ecb, _) => ecb::ecb_with_stats(ctx, data, params),
        (Mode::Ctr, _) => ctr::ctr_with_stats(ctx, data, params),
        (Mode::Cbc, Direction::Decrypt) => cbc::cbc_decrypt_with_stats(ctx, data, params),
        (Mode::Cbc, Direction::Encrypt) => cbc::cbc_encrypt_with_stats(data, params),
    }
}

/// Borrow-or-pad the input according to direction and policy.
fn prepared_input<'a>(
    data: &'a [u8],
    direction: Direction,
    padding: PaddingPolicy,
) -> Result<std::borrow::Cow<'a, [u8]>, ModeError> {
    match (direction, padding) {
        (Direction::Encrypt, PaddingPolicy::Pkcs7) => {
            Ok(std::borrow::Cow::Owned(pad(data, PaddingPolicy::Pkcs7)))
        }
        _ => {
            if data.len().is_multiple_of(16) {
                Ok(std::borrow::Cow::Borrowed(data))
            } else {
                Err(ModeError::NotBlockAligned(data.len()))
            }
        }
    }
}

/// Strip padding from a finished decryption if the policy asks for it.
fn finish_decrypt(
    out: Vec<u8>,
    direction: Direction,
    padding: PaddingPolicy,
) -> Result<Vec<u8>, ModeError> {
    match (direction, padding) {
        (Direction::Decrypt, PaddingPolicy::Pkcs7) => unpad(&out, PaddingPolicy::Pkcs7),
        _ => Ok(out),
    }
}
