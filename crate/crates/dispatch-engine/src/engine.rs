use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;
use std::time::Instant;

use aes_core::Block128;
use grid_model::{BlockGrid, Coord};
use thiserror::Error;

use crate::kernel::{KernelSpec, Uniforms};
use crate::stats::DispatchStats;

/// Environment variable that force-disables the device backend, so CI
/// runs stay deterministic on machines that happen to have a GPU.
pub const DISABLE_DEVICE_ENV: &str = "AESGRID_DISABLE_DEVICE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendId {
    /// Single-threaded host loop; the definition of correct output.
    Reference,
    /// Multithreaded host backend over contiguous block-id ranges.
    Parallel,
    /// Compute device (only with the `device` feature and hardware).
    Device,
}

impl fmt::Display for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendId::Reference => "reference",
            BackendId::Parallel => "parallel",
            BackendId::Device => "device",
        })
    }
}

impl FromStr for BackendId {
    type Err = String;

    fn from_str(s: &str) -> Result<BackendId, String> {
        match s {
            "ref" | "reference" => Ok(BackendId::Reference),
            "par" | "parallel" => Ok(BackendId::Parallel),
            "device" => Ok(BackendId::Device),
            other => Err(format!("unknown backend `{other}` (ref|par|device)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum DispatchError {
    #[error("backend `{0}` is not available")]
    BackendUnavailable(BackendId),
    #[error("kernel panicked; dispatch produced no grid")]
    KernelPanic,
    #[error("grid capacity {capacity_bytes} B exceeds the per-dispatch cap of {cap_bytes} B")]
    CapExceeded { capacity_bytes: u64, cap_bytes: u64 },
    #[error("kernel {0:?} has no device implementation")]
    UnsupportedKernel(crate::KernelKind),
    #[error("device lost during dispatch; safe to retry")]
    DeviceLost,
    #[error("device error: {0}")]
    Device(String),
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Worker lanes for the parallel backend; 0 means one per
    /// available hardware thread.
    pub parallel_threads: usize,
    /// Minimum blocks handed to one worker task, to amortize spawn
    /// cost. Partitioning never affects results, only scheduling.
    pub min_blocks_per_task: usize,
    /// Per-dispatch work cap in bytes of grid capacity. Oversized
    /// grids are refused so no single dispatch runs unboundedly long;
    /// callers chunk instead.
    pub cap_bytes: u64,
}

impl Default for EngineConfig {
    fn default() -> EngineConfig {
        EngineConfig {
            parallel_threads: 0,
            min_blocks_per_task: 4096,
            cap_bytes: 64 << 20,
        }
    }
}

/// Backend registry and dispatch entry point.
///
/// Construction probes the device backend once (when compiled in and
/// not disabled), so the backend set is stable for the engine's
/// lifetime.
pub struct Engine {
    cfg: EngineConfig,
    threads: usize,
    dispatches: AtomicU64,
    #[cfg(feature = "device")]
    device: Option<std::sync::Mutex<crate::device::DeviceContext>>,
}

impl Default for Engine {
    fn default() -> Engine {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Engine {
        Engine::with_config(EngineConfig::default())
    }

    pub fn with_config(cfg: EngineConfig) -> Engine {
        let threads = if cfg.parallel_threads == 0 {
            thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            cfg.parallel_threads
        };
        Engine {
            cfg,
            threads,
            dispatches: AtomicU64::new(0),
            #[cfg(feature = "device")]
            device: crate::device::DeviceContext::new().map(std::sync::Mutex::new),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    /// Resolved worker lane count for the parallel backend.
    pub fn parallel_threads(&self) -> usize {
        self.threads
    }

    /// Always contains the host backends; contains `Device` iff a
    /// compute device initialized successfully.
    pub fn list_backends(&self) -> Vec<BackendId> {
        let mut backends = vec![BackendId::Reference, BackendId::Parallel];
        if self.has_device() {
            backends.push(BackendId::Device);
        }
        backends
    }

    fn has_device(&self) -> bool {
        #[cfg(feature = "device")]
        {
            self.device.is_some()
        }
        #[cfg(not(feature = "device"))]
        {
            false
        }
    }

    /// Dispatches attempted so far; lets tests assert which operations
    /// actually go through the engine.
    pub fn dispatch_count(&self) -> u64 {
        self.dispatches.load(Ordering::Relaxed)
    }

    /// Run `spec` over the valid region of `input` on the chosen
    /// backend.
    ///
    /// The output grid has the same dims and `used`, with cell `i`
    /// equal to `kernel(coord(i), input, uniforms)`; results are
    /// bit-identical across backends and repeated runs.
    pub fn dispatch(
        &self,
        spec: &KernelSpec,
        input: &BlockGrid,
        uniforms: &Uniforms,
        backend: BackendId,
    ) -> Result<(BlockGrid, DispatchStats), DispatchError> {
        let capacity_bytes = input.dims().capacity_bytes() as u64;
        if capacity_bytes > self.cfg.cap_bytes {
            return Err(DispatchError::CapExceeded {
                capacity_bytes,
                cap_bytes: self.cfg.cap_bytes,
            });
        }
        self.dispatches.fetch_add(1, Ordering::Relaxed);
        match backend {
            BackendId::Reference => self.host_dispatch(spec, input, uniforms, 1),
            BackendId::Parallel => self.host_dispatch(spec, input, uniforms, self.threads),
            BackendId::Device => self.device_dispatch(spec, input, uniforms),
        }
    }

    #[cfg(feature = "device")]
    fn device_dispatch(
        &self,
        spec: &KernelSpec,
        input: &BlockGrid,
        uniforms: &Uniforms,
    ) -> Result<(BlockGrid, DispatchStats), DispatchError> {
        let ctx = self
            .device
            .as_ref()
            .ok_or(DispatchError::BackendUnavailable(BackendId::Device))?;
        ctx.lock()
            .expect("device context poisoned")
            .dispatch(spec, input, uniforms)
    }

    #[cfg(not(feature = "device"))]
    fn device_dispatch(
        &self,
        _spec: &KernelSpec,
        _input: &BlockGrid,
        _uniforms: &Uniforms,
    ) -> Result<(BlockGrid, DispatchStats), DispatchError> {
        Err(DispatchError::BackendUnavailable(BackendId::Device))
    }

    fn host_dispatch(
        &self,
        spec: &KernelSpec,
        input: &BlockGrid,
        uniforms: &Uniforms,
        threads: usize,
    ) -> Result<(BlockGrid, DispatchStats), DispatchError> {
        let dims = input.dims();
        let used = input.used();

        // Stage the input into the dispatch's private grid; only the
        // valid region carries data, the tail is zero by invariant.
        let start = Instant::now();
        let staged = {
            let mut words = vec![0u32; dims.capacity_blocks() * 4];
            words[..used * 4].copy_from_slice(&input.words()[..used * 4]);
            BlockGrid::from_words(dims, words, used)
        };
        let copy_in_ns = elapsed_ns(start);

        let start = Instant::now();
        let mut computed = vec![0u32; dims.capacity_blocks() * 4];
        if used > 0 {
            let kernel = &spec.kernel;
            let write_cell = |slot: &mut [u32], value: Block128| {
                slot.copy_from_slice(&value.words());
            };
            let run = AssertUnwindSafe(|| {
                let task = used.div_ceil(threads).max(self.cfg.min_blocks_per_task);
                if threads <= 1 || used <= task {
                    for (id, slot) in computed[..used * 4].chunks_mut(4).enumerate() {
                        write_cell(slot, kernel(dims.coord_of(id), &staged, uniforms));
                    }
                } else {
                    thread::scope(|scope| {
                        for (index, span) in computed[..used * 4].chunks_mut(task * 4).enumerate()
                        {
                            let staged = &staged;
                            let write_cell = &write_cell;
                            scope.spawn(move || {
                                let base = index * task;
                                for (offset, slot) in span.chunks_mut(4).enumerate() {
                                    let coord = dims.coord_of(base + offset);
                                    write_cell(slot, kernel(coord, staged, uniforms));
                                }
                            });
                        }
                    });
                }
            });
            catch_unwind(run).map_err(|_| DispatchError::KernelPanic)?;
        }
        // Clamp to the timer's resolution: work happened.
        let kernel_ns = if used > 0 {
            elapsed_ns(start).max(1)
        } else {
            elapsed_ns(start)
        };

        // Read results back out of the dispatch-private buffer.
        let start = Instant::now();
        let mut out_words = vec![0u32; dims.capacity_blocks() * 4];
        out_words[..used * 4].copy_from_slice(&computed[..used * 4]);
        let output = BlockGrid::from_words(dims, out_words, used);
        let copy_out_ns = elapsed_ns(start);

        Ok((
            output,
            DispatchStats {
                copy_in_ns,
                kernel_ns,
                copy_out_ns,
                bytes_processed: used as u64 * 16,
            },
        ))
    }
}

fn elapsed_ns(start: Instant) -> u64 {
    u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX)
}

/// Load a cell, with reads outside the grid yielding the zero block —
/// the convention the previous-cell wrap at the origin relies on.
pub fn read_cell(grid: &BlockGrid, c: Coord) -> Block128 {
    grid.get(c).unwrap_or(Block128::ZERO)
}
