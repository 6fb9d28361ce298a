//! Compute-device backend over wgpu.
//!
//! The built-in cipher kernels are WGSL compute shaders embedded at
//! build time, restricted to 32-bit unsigned integer operations and
//! table loads so they stay portable across compute dialects. The
//! fused tables are uploaded once per context into a read-only
//! storage buffer; round keys and the IV travel in a small uniform
//! block per dispatch. Host-only (`Custom`) kernels have no device
//! variant and are refused.
//!
//! Context creation degrades to `None` — never an error — when no
//! adapter is present or when [`DISABLE_DEVICE_ENV`] is set, so hosts
//! without a GPU simply do not list the backend.

use std::sync::mpsc;
use std::time::Instant;

use bytemuck::{Pod, Zeroable};
use grid_model::BlockGrid;

use crate::engine::{DispatchError, DISABLE_DEVICE_ENV};
use crate::kernel::{KernelKind, KernelSpec, Uniforms};
use crate::stats::DispatchStats;

const KERNEL_SOURCE: &str = include_str!("kernels.wgsl");
const WORKGROUP: u32 = 64;
const TABLE_WORDS: usize = 8 * 256;

#[repr(C)]
#[derive(Clone, Copy, Pod, Zeroable)]
struct RawParams {
    round_keys: [[u32; 4]; 15],
    iv: [u32; 4],
    rounds: u32,
    width: u32,
    used: u32,
    base_lo: u32,
    base_hi: u32,
    pad: [u32; 3],
}

pub struct DeviceContext {
    device: wgpu::Device,
    queue: wgpu::Queue,
    bind_layout: wgpu::BindGroupLayout,
    ecb_encrypt: wgpu::ComputePipeline,
    ecb_decrypt: wgpu::ComputePipeline,
    ctr_xor: wgpu::ComputePipeline,
    cbc_decrypt: wgpu::ComputePipeline,
    tables_buf: wgpu::Buffer,
    params_buf: wgpu::Buffer,
    pub adapter_name: String,
}

impl DeviceContext {
    /// Probe for a compute device and prepare pipelines and the table
    /// upload. `None` when disabled or no adapter answers.
    pub fn new() -> Option<DeviceContext> {
        if std::env::var_os(DISABLE_DEVICE_ENV).is_some_and(|v| !v.is_empty()) {
            return None;
        }
        let instance = wgpu::Instance::default();
        let adapter = pollster::block_on(instance.request_adapter(&wgpu::RequestAdapterOptions {
            power_preference: wgpu::PowerPreference::HighPerformance,
            ..Default::default()
        }))?;
        let adapter_name = adapter.get_info().name;
        let (device, queue) = pollster::block_on(adapter.request_device(
            &wgpu::DeviceDescriptor {
                label: Some("aesgrid"),
                required_limits: wgpu::Limits::downlevel_defaults(),
                ..Default::default()
            },
            None,
        ))
        .ok()?;

        let module = device.create_shader_module(wgpu::ShaderModuleDescriptor {
            label: Some("cipher kernels"),
            source: wgpu::ShaderSource::Wgsl(KERNEL_SOURCE.into()),
        });

        let buffer_entry = |binding, ty| wgpu::BindGroupLayoutEntry {
            binding,
            visibility: wgpu::ShaderStages::COMPUTE,
            ty: wgpu::BindingType::Buffer {
                ty,
                has_dynamic_offset: false,
                min_binding_size: None,
            },
            count: None,
        };
        let bind_layout = device.create_bind_group_layout(&wgpu::BindGroupLayoutDescriptor {
            label: Some("cipher bindings"),
            entries: &[
                buffer_entry(0, wgpu::BufferBindingType::Uniform),
                buffer_entry(1, wgpu::BufferBindingType::Storage { read_only: true }),
                buffer_entry(2, wgpu::BufferBindingType::Storage { read_only: true }),
                buffer_entry(3, wgpu::BufferBindingType::Storage { read_only: false }),
            ],
        });
        let pipeline_layout = device.create_pipeline_layout(&wgpu::PipelineLayoutDescriptor {
            label: None,
            bind_group_layouts: &[&bind_layout],
            push_constant_ranges: &[],
        });
        let pipeline = |entry: &str| {
            device.create_compute_pipeline(&wgpu::ComputePipelineDescriptor {
                label: Some(entry),
                layout: Some(&pipeline_layout),
                module: &module,
                entry_point: Some(entry),
                compilation_options: Default::default(),
                cache: None,
            })
        };

        // Tables are bit-identical to the host set and uploaded once.
        let tables = aes_core::tables();
        let mut table_words = Vec::with_capacity(TABLE_WORDS);
        for table in [
            &tables.t0, &tables.t1, &tables.t2, &tables.t3, &tables.it0, &tables.it1,
            &tables.it2, &tables.it3,
        ] {
            table_words.extend_from_slice(table);
        }
        let tables_buf = device.create_buffer(&wgpu::BufferDescriptor {
            label: Some("fused tables"),
            size: (TABLE_WORDS * 4) as u64,
            usage: wgpu::BufferUsages::STORAGE | wgpu::BufferUsages::COPY_DST,
            mapped_at_creation: false,
        });
        queue.write_buffer(&tables_buf, 0, bytemuck::cast_slice(&table_words));

        let params_buf = device.create_buffer(&wgpu::BufferDescriptor {
            label: Some("dispatch params"),
            size: std::mem::size_of::<RawParams>() as u64,
            usage: wgpu::BufferUsages::UNIFORM | wgpu::BufferUsages::COPY_DST,
            mapped_at_creation: false,
        });

        Some(DeviceContext {
            ecb_encrypt: pipeline("ecb_encrypt"),
            ecb_decrypt: pipeline("ecb_decrypt"),
            ctr_xor: pipeline("ctr_xor"),
            cbc_decrypt: pipeline("cbc_decrypt"),
            device,
            queue,
            bind_layout,
            tables_buf,
            params_buf,
            adapter_name,
        })
    }

    pub fn dispatch(
        &mut self,
        spec: &KernelSpec,
        input: &BlockGrid,
        uniforms: &Uniforms,
    ) -> Result<(BlockGrid, DispatchStats), DispatchError> {
        let pipeline = match spec.kind {
            KernelKind::EcbEncrypt => &self.ecb_encrypt,
            KernelKind::EcbDecrypt => &self.ecb_decrypt,
            KernelKind::CtrXor => &self.ctr_xor,
            KernelKind::CbcDecrypt => &self.cbc_decrypt,
            KernelKind::Custom => return Err(DispatchError::UnsupportedKernel(spec.kind)),
        };
        let dims = input.dims();
        let used = input.used();
        if used == 0 {
            return Ok((BlockGrid::zeroed(dims), DispatchStats::default()));
        }

        let keys = match spec.kind {
            KernelKind::EcbDecrypt | KernelKind::CbcDecrypt => uniforms.schedule.dec_keys(),
            _ => uniforms.schedule.enc_keys(),
        };
        let mut round_keys = [[0u32; 4]; 15];
        round_keys[..keys.len()].copy_from_slice(keys);
        let raw = RawParams {
            round_keys,
            iv: uniforms.iv.words(),
            rounds: uniforms.schedule.rounds() as u32,
            width: dims.width() as u32,
            used: used as u32,
            base_lo: uniforms.base_block_offset as u32,
            base_hi: (uniforms.base_block_offset >> 32) as u32,
            pad: [0; 3],
        };

        // Upload: uniforms plus the valid cells.
        let start = Instant::now();
        let cell_bytes = (used * 16) as u64;
        let cells_in = self.device.create_buffer(&wgpu::BufferDescriptor {
            label: Some("cells in"),
            size: cell_bytes,
            usage: wgpu::BufferUsages::STORAGE | wgpu::BufferUsages::COPY_DST,
            mapped_at_creation: false,
        });
        let cells_out = self.device.create_buffer(&wgpu::BufferDescriptor {
            label: Some("cells out"),
            size: cell_bytes,
            usage: wgpu::BufferUsages::STORAGE | wgpu::BufferUsages::COPY_SRC,
            mapped_at_creation: false,
        });
        let readback = self.device.create_buffer(&wgpu::BufferDescriptor {
            label: Some("readback"),
            size: cell_bytes,
            usage: wgpu::BufferUsages::MAP_READ | wgpu::BufferUsages::COPY_DST,
            mapped_at_creation: false,
        });
        self.queue
            .write_buffer(&self.params_buf, 0, bytemuck::bytes_of(&raw));
        self.queue
            .write_buffer(&cells_in, 0, bytemuck::cast_slice(&input.words()[..used * 4]));
        self.queue.submit(None);
        let _ = self.device.poll(wgpu::Maintain::Wait);
        let copy_in_ns = elapsed_ns(start);

        // Kernel pass over the valid rows.
        let start = Instant::now();
        let bind = self.device.create_bind_group(&wgpu::BindGroupDescriptor {
            label: None,
            layout: &self.bind_layout,
            entries: &[
                bind_entry(0, &self.params_buf),
                bind_entry(1, &self.tables_buf),
                bind_entry(2, &cells_in),
                bind_entry(3, &cells_out),
            ],
        });
        let mut encoder = self
            .device
            .create_command_encoder(&wgpu::CommandEncoderDescriptor { label: None });
        {
            let mut pass = encoder.begin_compute_pass(&wgpu::ComputePassDescriptor {
                label: None,
                timestamp_writes: None,
            });
            pass.set_pipeline(pipeline);
            pass.set_bind_group(0, &bind, &[]);
            let width = dims.width() as u32;
            let rows = used.div_ceil(dims.width()) as u32;
            pass.dispatch_workgroups(width.div_ceil(WORKGROUP), rows, 1);
        }
        self.queue.submit(Some(encoder.finish()));
        let _ = self.device.poll(wgpu::Maintain::Wait);
        let kernel_ns = elapsed_ns(start).max(1);

        // Readback into a fresh grid.
        let start = Instant::now();
        let mut encoder = self
            .device
            .create_command_encoder(&wgpu::CommandEncoderDescriptor { label: None });
        encoder.copy_buffer_to_buffer(&cells_out, 0, &readback, 0, cell_bytes);
        self.queue.submit(Some(encoder.finish()));
        let slice = readback.slice(..);
        let (tx, rx) = mpsc::channel();
        slice.map_async(wgpu::MapMode::Read, move |result| {
            let _ = tx.send(result);
        });
        let _ = self.device.poll(wgpu::Maintain::Wait);
        match rx.recv() {
            Ok(Ok(())) => {}
            Ok(Err(_)) | Err(_) => return Err(DispatchError::DeviceLost),
        }
        let mut words = vec![0u32; dims.capacity_blocks() * 4];
        {
            let mapped = slice.get_mapped_range();
            words[..used * 4].copy_from_slice(bytemuck::cast_slice(&mapped));
        }
        readback.unmap();
        let output = BlockGrid::from_words(dims, words, used);
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

fn bind_entry(binding: u32, buffer: &wgpu::Buffer) -> wgpu::BindGroupEntry<'_> {
    wgpu::BindGroupEntry {
        binding,
        resource: buffer.as_entire_binding(),
    }
}

fn elapsed_ns(start: Instant) -> u64 {
    u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX)
}
