use std::sync::Arc;
use std::time::Instant;

use aes_core::{encrypt_block, expand_key, Block128};
use dispatch_engine::{DispatchStats, Uniforms};
use grid_model::{pack, unpack_into};

use crate::{finish_decrypt, kernels, prepared_input, Direction, ModeContext, ModeError, ModeParams};

/// Grid-parallel CBC decryption.
///
/// The kernel XORs each decrypted cell with its previous ciphertext
/// cell, which reads as zero at the grid origin; the true IV is then
/// XORed into the chunk's first output block on the host. Across
/// chunks the IV hands off to the last ciphertext block of the
/// previous chunk, which is plain sequential CBC restated per grid.
pub fn cbc_decrypt(ctx: &ModeContext, data: &[u8], params: &ModeParams) -> Result<Vec<u8>, ModeError> {
    cbc_decrypt_with_stats(ctx, data, params).map(|(bytes, _)| bytes)
}

pub(crate) fn cbc_decrypt_with_stats(
    ctx: &ModeContext,
    data: &[u8],
    params: &ModeParams,
) -> Result<(Vec<u8>, DispatchStats), ModeError> {
    let iv = params.require_iv()?;
    let schedule = Arc::new(expand_key(&params.key)?);
    if !data.len().is_multiple_of(16) {
        return Err(ModeError::NotBlockAligned(data.len()));
    }
    let spec = kernels::cbc_decrypt();
    let uniforms = Uniforms::new(schedule, Block128::ZERO, 0);

    let mut out = Vec::with_capacity(data.len());
    let mut stats = DispatchStats::default();
    let mut chunk_iv = iv;
    let mut rest = data;
    while !rest.is_empty() {
        let (grid, remainder) = pack(rest, ctx.dims)?;
        let consumed = rest.len() - remainder;
        let (result, chunk_stats) = ctx.engine.dispatch(&spec, &grid, &uniforms, ctx.backend)?;
        stats.accumulate(&chunk_stats);

        // Host-side first-block patch: the kernel saw a zero neighbor
        // at the grid origin, the chunk IV belongs there.
        let chunk_start = out.len();
        unpack_into(&result, &mut out);
        let first_block = &mut out[chunk_start..chunk_start + 16];
        let first = Block128::from_bytes((&*first_block).try_into().unwrap()) ^ chunk_iv;
        first_block.copy_from_slice(&first.to_bytes());

        chunk_iv = Block128::from_bytes(rest[consumed - 16..consumed].try_into().unwrap());
        rest = &rest[consumed..];
    }
    let out = finish_decrypt(out, Direction::Decrypt, params.padding)?;
    Ok((out, stats))
}

/// Host-sequential CBC encryption.
///
/// Each ciphertext block is an input to the next, so this never
/// dispatches to a backend; it is the one (mode, direction) pair
/// outside the engine path.
pub fn cbc_encrypt(data: &[u8], params: &ModeParams) -> Result<Vec<u8>, ModeError> {
    cbc_encrypt_with_stats(data, params).map(|(bytes, _)| bytes)
}

pub(crate) fn cbc_encrypt_with_stats(
    data: &[u8],
    params: &ModeParams,
) -> Result<(Vec<u8>, DispatchStats), ModeError> {
    let iv = params.require_iv()?;
    let schedule = expand_key(&params.key)?;
    let input = prepared_input(data, Direction::Encrypt, params.padding)?;
    let tables = aes_core::tables();

    let start = Instant::now();
    let mut out = Vec::with_capacity(input.len());
    let mut previous = iv;
    for chunk in input.chunks_exact(16) {
        let block = Block128::from_bytes(chunk.try_into().unwrap());
        previous = encrypt_block(block ^ previous, &schedule, tables);
        out.extend_from_slice(&previous.to_bytes());
    }
    let stats = DispatchStats {
        copy_in_ns: 0,
        kernel_ns: u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX),
        copy_out_ns: 0,
        bytes_processed: input.len() as u64,
    };
    Ok((out, stats))
}
