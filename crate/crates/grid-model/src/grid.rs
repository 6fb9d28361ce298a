use std::fmt;

use aes_core::Block128;

use crate::{Coord, GridDims, GridError};

/// A fixed-capacity grid of blocks with a valid prefix.
///
/// Cells with block id below `used` hold data; every cell at or past
/// `used` is all-zero. The prefix plays the role of the region of
/// interest: kernels run only on it.
///
/// Storage is a flat word vector (four 32-bit lanes per cell) so that
/// capacity-sized grids allocate through the zeroed-page fast path and
/// cost only what is actually touched.
#[derive(Clone, PartialEq, Eq)]
pub struct BlockGrid {
    dims: GridDims,
    words: Vec<u32>,
    used: usize,
}

impl BlockGrid {
    pub fn zeroed(dims: GridDims) -> BlockGrid {
        BlockGrid {
            dims,
            words: vec![0u32; dims.capacity_blocks() * 4],
            used: 0,
        }
    }

    /// Assemble a grid from a flat lane-word buffer.
    ///
    /// Panics unless `words` fills the capacity exactly (four words per
    /// cell) and `used` is within it. Debug builds spot-check the
    /// all-zero tail invariant near the boundary, where off-by-one
    /// writes would land; a full scan would touch every page of a
    /// capacity-sized grid and dominate small dispatches.
    pub fn from_words(dims: GridDims, words: Vec<u32>, used: usize) -> BlockGrid {
        assert_eq!(
            words.len(),
            dims.capacity_blocks() * 4,
            "word count mismatch"
        );
        assert!(used <= dims.capacity_blocks(), "used exceeds capacity");
        debug_assert!(
            words[used * 4..(used * 4 + 1024).min(words.len())]
                .iter()
                .all(|&w| w == 0),
            "tail past `used` must stay zero"
        );
        BlockGrid { dims, words, used }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    /// Number of valid blocks; ids `0..used` hold data.
    pub fn used(&self) -> usize {
        self.used
    }

    /// Flat lane words, four per cell in block-id order.
    pub fn words(&self) -> &[u32] {
        &self.words
    }

    /// Cell by block id. Panics past capacity.
    pub fn cell(&self, id: usize) -> Block128 {
        let w = &self.words[id * 4..id * 4 + 4];
        Block128::new(w[0], w[1], w[2], w[3])
    }

    /// Cell by coordinate, `None` when out of bounds.
    pub fn get(&self, c: Coord) -> Option<Block128> {
        if self.dims.contains(c) {
            Some(self.cell(c.y as usize * self.dims.width() + c.x as usize))
        } else {
            None
        }
    }
}

impl fmt::Debug for BlockGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // The cell payload is data, not state; keep dumps readable.
        f.debug_struct("BlockGrid")
            .field("dims", &self.dims)
            .field("used", &self.used)
            .finish_non_exhaustive()
    }
}

/// Pack a block-aligned byte stream into a grid, row-major.
///
/// Fills as many cells as fit, zeroes the rest, and reports how many
/// bytes did not fit so callers can chain further grids.
pub fn pack(data: &[u8], dims: GridDims) -> Result<(BlockGrid, usize), GridError> {
    if !data.len().is_multiple_of(16) {
        return Err(GridError::NotBlockAligned(data.len()));
    }
    let blocks = data.len() / 16;
    let used = blocks.min(dims.capacity_blocks());
    let mut words = vec![0u32; dims.capacity_blocks() * 4];
    for (word, chunk) in words.iter_mut().zip(data.chunks_exact(4)) {
        *word = u32::from_be_bytes(chunk.try_into().unwrap());
    }
    let remainder = data.len() - used * 16;
    Ok((BlockGrid { dims, words, used }, remainder))
}

/// Serialize the valid prefix back to bytes, in block-id order.
pub fn unpack(grid: &BlockGrid) -> Vec<u8> {
    let mut out = Vec::with_capacity(grid.used() * 16);
    unpack_into(grid, &mut out);
    out
}

/// Append the valid prefix's bytes to `out` without an intermediate
/// buffer; multi-grid operations concatenate chunks this way.
pub fn unpack_into(grid: &BlockGrid, out: &mut Vec<u8>) {
    let words = &grid.words[..grid.used * 4];
    let start = out.len();
    out.resize(start + words.len() * 4, 0);
    for (slot, word) in out[start..].chunks_exact_mut(4).zip(words) {
        slot.copy_from_slice(&word.to_be_bytes());
    }
}
