use aes_core::Block128;

use crate::{Coord, GridDims, GridError};

/// Row-major block id of an in-bounds coordinate: `x + y * width`.
pub fn block_id(c: Coord, dims: GridDims) -> Result<u64, GridError> {
    if !dims.contains(c) {
        return Err(GridError::OutOfBounds {
            x: c.x,
            y: c.y,
            width: dims.width(),
            height: dims.height(),
        });
    }
    Ok(c.x as u64 + c.y as u64 * dims.width() as u64)
}

/// Coordinate of the previous block in row-major order.
///
/// Steps left within a row and wraps to the end of the previous row at
/// a row start. For the origin the result is `(width - 1, -1)`, which
/// is out of bounds on purpose: reading it must yield the zero block.
pub fn prev_coord(c: Coord, dims: GridDims) -> Coord {
    if c.x == 0 {
        Coord::new(dims.width() as i64 - 1, c.y - 1)
    } else {
        Coord::new(c.x - 1, c.y)
    }
}

/// Counter state for a block: the block id added into the IV with lane
/// carries.
///
/// Lane `w0` is the least significant; a wrap there increments `w1`,
/// and so on up to `w3` — 128-bit addition across the lanes in that
/// order. This is not the big-endian counter of standard CTR; the two
/// are deliberately distinct (see the mode layer's docs).
pub fn ctr_state(iv: Block128, block_id: u64) -> Block128 {
    let lo = block_id as u32;
    let hi = (block_id >> 32) as u32;
    let (w0, carry0) = iv.w0.overflowing_add(lo);
    let (w1a, carry1a) = iv.w1.overflowing_add(hi);
    let (w1, carry1b) = w1a.overflowing_add(carry0 as u32);
    let (w2, carry2) = iv.w2.overflowing_add((carry1a || carry1b) as u32);
    let w3 = iv.w3.wrapping_add(carry2 as u32);
    Block128::new(w0, w1, w2, w3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_id_examples() {
        let dims = GridDims::new(2048, 2048);
        assert_eq!(block_id(Coord::new(0, 0), dims).unwrap(), 0);
        assert_eq!(block_id(Coord::new(3, 2), dims).unwrap(), 4099);
        assert!(block_id(Coord::new(-1, 0), dims).is_err());
        assert!(block_id(Coord::new(0, 2048), dims).is_err());
    }

    #[test]
    fn block_id_is_a_bijection_on_a_small_grid() {
        let dims = GridDims::new(5, 3);
        let mut seen = vec![false; dims.capacity_blocks()];
        for y in 0..3 {
            for x in 0..5 {
                let id = block_id(Coord::new(x, y), dims).unwrap() as usize;
                assert!(!seen[id]);
                seen[id] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn prev_coord_steps_and_wraps() {
        let dims = GridDims::new(2048, 2048);
        assert_eq!(prev_coord(Coord::new(5, 7), dims), Coord::new(4, 7));
        assert_eq!(prev_coord(Coord::new(0, 7), dims), Coord::new(2047, 6));
        let origin_prev = prev_coord(Coord::new(0, 0), dims);
        assert_eq!(origin_prev, Coord::new(2047, -1));
        assert!(!dims.contains(origin_prev));
    }

    #[test]
    fn walking_prev_visits_descending_block_ids() {
        let dims = GridDims::new(4, 3);
        let last = dims.capacity_blocks() - 1;
        let mut c = dims.coord_of(last);
        for expected in (0..last).rev() {
            c = prev_coord(c, dims);
            assert_eq!(block_id(c, dims).unwrap(), expected as u64);
        }
    }

    #[test]
    fn counter_examples() {
        let iv = Block128::new(7, 8, 9, 10);
        assert_eq!(ctr_state(iv, 0), iv);

        let near_wrap = Block128::new(0xffff_ffff, 8, 9, 10);
        assert_eq!(ctr_state(near_wrap, 1), Block128::new(0, 9, 9, 10));

        // Full cascade, hand-traced through the nested carries.
        let cascade = Block128::new(0xffff_ffff, 0xffff_ffff, 0xffff_ffff, 0);
        assert_eq!(ctr_state(cascade, 1), Block128::new(0, 0, 0, 1));
    }

    #[test]
    fn counter_additivity_spot_checks() {
        let iv = Block128::new(0xffff_fff0, 0xffff_ffff, 3, 4);
        for (a, b) in [(0u64, 0u64), (15, 1), (16, 16), (0x7fff_ffff, 0x8000_0000)] {
            assert_eq!(
                ctr_state(iv, a + b),
                ctr_state(ctr_state(iv, a), b),
                "a={a} b={b}"
            );
        }
    }
}
