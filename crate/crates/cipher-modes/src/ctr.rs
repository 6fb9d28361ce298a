use std::borrow::Cow;
use std::sync::Arc;

use aes_core::expand_key;
use dispatch_engine::{DispatchStats, Uniforms};
use grid_model::{pack, unpack_into};

use crate::{kernels, ModeContext, ModeError, ModeParams};

/// Counter mode over the engine. Encrypt and decrypt are the same
/// XOR, any data length is accepted, and chunking stays seamless
/// because each grid's uniforms carry the running block offset.
pub fn ctr(ctx: &ModeContext, data: &[u8], params: &ModeParams) -> Result<Vec<u8>, ModeError> {
    ctr_with_stats(ctx, data, params).map(|(bytes, _)| bytes)
}

pub(crate) fn ctr_with_stats(
    ctx: &ModeContext,
    data: &[u8],
    params: &ModeParams,
) -> Result<(Vec<u8>, DispatchStats), ModeError> {
    let iv = params.require_iv()?;
    let schedule = Arc::new(expand_key(&params.key)?);
    let spec = kernels::ctr_xor();

    // Zero-fill the final partial block into the grid; the surplus
    // keystream bytes are truncated after the run.
    let tail = data.len() % 16;
    let input: Cow<'_, [u8]> = if tail == 0 {
        Cow::Borrowed(data)
    } else {
        let mut padded = Vec::with_capacity(data.len() + 16 - tail);
        padded.extend_from_slice(data);
        padded.resize(data.len() + 16 - tail, 0);
        Cow::Owned(padded)
    };

    let mut out = Vec::with_capacity(input.len());
    let mut stats = DispatchStats::default();
    let mut base_block_offset = 0u64;
    let mut rest = &input[..];
    while !rest.is_empty() {
        let (grid, remainder) = pack(rest, ctx.dims)?;
        let consumed = rest.len() - remainder;
        let uniforms = Uniforms::new(schedule.clone(), iv, base_block_offset);
        let (result, chunk_stats) = ctx.engine.dispatch(&spec, &grid, &uniforms, ctx.backend)?;
        stats.accumulate(&chunk_stats);
        unpack_into(&result, &mut out);
        base_block_offset += grid.used() as u64;
        rest = &rest[consumed..];
    }
    out.truncate(data.len());
    Ok((out, stats))
}
