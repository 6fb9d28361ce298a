//! Run a per-block kernel over a grid's valid region.
//!
//! The execution contract is the pixel-shader one: a kernel is invoked
//! once per valid cell, may read only the input grid and the uniforms,
//! and writes exactly its own output cell. Nothing a kernel can
//! observe depends on scheduling, so every backend — sequential
//! reference, multithreaded, or a compute device — must produce
//! bit-identical grids.
//!
//! Dispatches stage their input into a private grid and copy results
//! back out, and both copies are timed separately from kernel work, so
//! callers can see how transfer overhead amortizes with size.

mod engine;
mod kernel;
mod stats;

#[cfg(feature = "device")]
pub mod device;

pub use engine::{read_cell, BackendId, DispatchError, Engine, EngineConfig, DISABLE_DEVICE_ENV};
pub use kernel::{KernelFn, KernelKind, KernelSpec, Uniforms};
pub use stats::DispatchStats;
