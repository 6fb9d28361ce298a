use std::sync::Arc;

use aes_core::{expand_key, Block128};
use dispatch_engine::{DispatchStats, Uniforms};
use grid_model::{pack, unpack_into};

use crate::{finish_decrypt, kernels, prepared_input, Direction, ModeContext, ModeError, ModeParams};

/// ECB over the engine: every block independent, chunked across grids
/// when the data outgrows one.
pub fn ecb(ctx: &ModeContext, data: &[u8], params: &ModeParams) -> Result<Vec<u8>, ModeError> {
    ecb_with_stats(ctx, data, params).map(|(bytes, _)| bytes)
}

pub(crate) fn ecb_with_stats(
    ctx: &ModeContext,
    data: &[u8],
    params: &ModeParams,
) -> Result<(Vec<u8>, DispatchStats), ModeError> {
    let schedule = Arc::new(expand_key(&params.key)?);
    let input = prepared_input(data, params.direction, params.padding)?;
    let spec = match params.direction {
        Direction::Encrypt => kernels::ecb_encrypt(),
        Direction::Decrypt => kernels::ecb_decrypt(),
    };
    let uniforms = Uniforms::new(schedule, Block128::ZERO, 0);

    let mut out = Vec::with_capacity(input.len());
    let mut stats = DispatchStats::default();
    let mut rest = &input[..];
    while !rest.is_empty() {
        let (grid, remainder) = pack(rest, ctx.dims)?;
        let consumed = rest.len() - remainder;
        let (result, chunk_stats) = ctx.engine.dispatch(&spec, &grid, &uniforms, ctx.backend)?;
        stats.accumulate(&chunk_stats);
        unpack_into(&result, &mut out);
        rest = &rest[consumed..];
    }
    let out = finish_decrypt(out, params.direction, params.padding)?;
    Ok((out, stats))
}
