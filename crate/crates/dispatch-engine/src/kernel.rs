use std::fmt;
use std::sync::Arc;

use aes_core::{Block128, RoundKeySchedule, TTableSet};
use grid_model::{BlockGrid, Coord};

/// Identifies a kernel for backends that carry their own compiled
/// variants. Host backends run the closure regardless of the kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    EcbEncrypt,
    EcbDecrypt,
    CtrXor,
    CbcDecrypt,
    /// Host-only closure with no device counterpart.
    Custom,
}

/// The per-cell function: output cell = f(coord, input grid, uniforms).
pub type KernelFn = Arc<dyn Fn(Coord, &BlockGrid, &Uniforms) -> Block128 + Send + Sync>;

/// A kernel plus the facts a backend needs to schedule it.
///
/// The kernel must be deterministic and read nothing but the input
/// grid and the uniforms; in particular it can never observe another
/// output cell.
#[derive(Clone)]
pub struct KernelSpec {
    pub kind: KernelKind,
    /// True only for kernels that read cells other than their own
    /// (chained decryption); lets backends reason about input reuse.
    pub reads_neighbors: bool,
    pub kernel: KernelFn,
}

impl KernelSpec {
    pub fn new(
        kind: KernelKind,
        reads_neighbors: bool,
        kernel: impl Fn(Coord, &BlockGrid, &Uniforms) -> Block128 + Send + Sync + 'static,
    ) -> KernelSpec {
        KernelSpec {
            kind,
            reads_neighbors,
            kernel: Arc::new(kernel),
        }
    }

    /// A host-only kernel for tests and experiments.
    pub fn custom(
        kernel: impl Fn(Coord, &BlockGrid, &Uniforms) -> Block128 + Send + Sync + 'static,
    ) -> KernelSpec {
        KernelSpec::new(KernelKind::Custom, false, kernel)
    }
}

impl fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelSpec")
            .field("kind", &self.kind)
            .field("reads_neighbors", &self.reads_neighbors)
            .finish_non_exhaustive()
    }
}

/// Small immutable per-dispatch parameters, as opposed to bulk tables.
///
/// `base_block_offset` is the global block id of this dispatch's cell
/// 0; counter kernels add it to the local id so multi-grid runs keep a
/// continuous counter stream.
#[derive(Clone)]
pub struct Uniforms {
    pub schedule: Arc<RoundKeySchedule>,
    pub iv: Block128,
    pub base_block_offset: u64,
    pub tables: &'static TTableSet,
}

impl Uniforms {
    pub fn new(schedule: Arc<RoundKeySchedule>, iv: Block128, base_block_offset: u64) -> Uniforms {
        Uniforms {
            schedule,
            iv,
            base_block_offset,
            tables: aes_core::tables(),
        }
    }
}

impl fmt::Debug for Uniforms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Uniforms")
            .field("schedule", &self.schedule)
            .field("iv", &self.iv)
            .field("base_block_offset", &self.base_block_offset)
            .finish_non_exhaustive()
    }
}
