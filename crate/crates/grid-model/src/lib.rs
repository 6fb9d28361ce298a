//! Byte streams as a 2D grid of 128-bit cells.
//!
//! Data is packed row-major into a fixed-size grid of [`Block128`]
//! cells, with a prefix count (`used`) marking the valid region —
//! everything past it is defined to be zero. Cell addressing, the
//! previous-cell wrap used by chained decryption, and the lane-carry
//! counter derivation live here as plain functions so kernels and
//! hosts share one definition.

mod addr;
mod grid;

pub use addr::{block_id, ctr_state, prev_coord};
pub use grid::{pack, unpack, unpack_into, BlockGrid};

use thiserror::Error;

pub use aes_core::Block128;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum GridError {
    #[error("data length {0} is not a multiple of the 16-byte block size")]
    NotBlockAligned(usize),
    #[error("coordinate ({x}, {y}) is outside a {width}x{height} grid")]
    OutOfBounds {
        x: i64,
        y: i64,
        width: usize,
        height: usize,
    },
}

/// Grid dimensions in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridDims {
    width: usize,
    height: usize,
}

impl GridDims {
    /// 2048x2048 cells, 64 MiB of block data.
    pub const DEFAULT: GridDims = GridDims::new(2048, 2048);

    /// Panics if either dimension is zero.
    pub const fn new(width: usize, height: usize) -> GridDims {
        assert!(width >= 1 && height >= 1, "grid dimensions must be >= 1");
        GridDims { width, height }
    }

    pub const fn width(self) -> usize {
        self.width
    }

    pub const fn height(self) -> usize {
        self.height
    }

    pub const fn capacity_blocks(self) -> usize {
        self.width * self.height
    }

    pub const fn capacity_bytes(self) -> usize {
        self.capacity_blocks() * 16
    }

    pub fn contains(self, c: Coord) -> bool {
        c.x >= 0 && c.y >= 0 && (c.x as usize) < self.width && (c.y as usize) < self.height
    }

    /// Row-major coordinate of a block id. Panics if out of range.
    pub fn coord_of(self, id: usize) -> Coord {
        assert!(id < self.capacity_blocks(), "block id {id} out of range");
        Coord::new((id % self.width) as i64, (id / self.width) as i64)
    }
}

/// Signed cell coordinates.
///
/// Signed so that the previous-cell wrap at the origin can express
/// y = -1; a `Coord` is in-bounds iff `0 <= x < width` and
/// `0 <= y < height`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coord {
    pub x: i64,
    pub y: i64,
}

impl Coord {
    pub const fn new(x: i64, y: i64) -> Coord {
        Coord { x, y }
    }
}
