//! The per-block kernels the engine-path modes dispatch.
//!
//! Each kernel reads its own input cell (plus, for chained
//! decryption, the previous cell) and the uniforms — nothing else, so
//! every cell can run in any order on any backend.

use aes_core::{decrypt_block, encrypt_block};
use dispatch_engine::{read_cell, KernelKind, KernelSpec, Uniforms};
use grid_model::{block_id, ctr_state, prev_coord};

pub fn ecb_encrypt() -> KernelSpec {
    KernelSpec::new(KernelKind::EcbEncrypt, false, |c, grid, u: &Uniforms| {
        encrypt_block(read_cell(grid, c), &u.schedule, u.tables)
    })
}

pub fn ecb_decrypt() -> KernelSpec {
    KernelSpec::new(KernelKind::EcbDecrypt, false, |c, grid, u: &Uniforms| {
        decrypt_block(read_cell(grid, c), &u.schedule, u.tables)
    })
}

/// Counter keystream XORed over the cell; its own inverse, so it
/// serves both directions.
pub fn ctr_xor() -> KernelSpec {
    KernelSpec::new(KernelKind::CtrXor, false, |c, grid, u: &Uniforms| {
        let local = block_id(c, grid.dims()).expect("kernel coordinates are in bounds");
        let counter = ctr_state(u.iv, u.base_block_offset + local);
        let keystream = encrypt_block(counter, &u.schedule, u.tables);
        read_cell(grid, c) ^ keystream
    })
}

/// Decrypt the cell and XOR the previous ciphertext cell, which is the
/// zero block at the origin; the host patches the true IV into block 0
/// after readback, keeping the kernel free of position branches.
pub fn cbc_decrypt() -> KernelSpec {
    KernelSpec::new(KernelKind::CbcDecrypt, true, |c, grid, u: &Uniforms| {
        let plain = decrypt_block(read_cell(grid, c), &u.schedule, u.tables);
        plain ^ read_cell(grid, prev_coord(c, grid.dims()))
    })
}
