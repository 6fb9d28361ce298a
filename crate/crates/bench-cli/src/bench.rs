use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::str::FromStr;
use std::thread;
use std::time::Instant;

use aes_core::Block128;
use cipher_modes::{
    process, process_with_stats, Direction, Mode, ModeContext, ModeError, ModeParams,
    PaddingPolicy,
};
use dispatch_engine::{BackendId, DispatchStats, Engine, EngineConfig};

use crate::cli::BenchArgs;
use crate::data::{checksum, pseudorandom};

pub const CSV_HEADER: &str =
    "mode,direction,key_size,backend,threads,data_bytes,mb_per_sec,copy_in_ns,kernel_ns,copy_out_ns,repetitions";

/// One benchmark cell: everything that identifies a row except the
/// measured numbers.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub mode: Mode,
    pub direction: Direction,
    /// Key size in bits.
    pub key_size: usize,
    pub backend: BackendId,
    /// Resolved worker lanes for the row (1 for reference, 0 marks
    /// device rows where lanes are not meaningful).
    pub threads: usize,
    pub data_bytes: usize,
}

impl BenchConfig {
    /// Input stream for this cell. Depends only on the cipher setup
    /// and size, never on backend or threads, so every backend is
    /// measured - and verified - on identical bytes.
    pub fn data(&self) -> Vec<u8> {
        pseudorandom(self.data_bytes, self.data_seed())
    }

    pub fn params(&self) -> ModeParams {
        ModeParams {
            mode: self.mode,
            direction: self.direction,
            key: pseudorandom(self.key_size / 8, 0x6b65_7973 ^ self.key_size as u64),
            iv: Some(Block128::new(0x0123_4567, 0x89ab_cdef, 0x0bad_f00d, 0x1234_5678)),
            padding: PaddingPolicy::None,
        }
    }

    fn data_seed(&self) -> u64 {
        let mode = match self.mode {
            Mode::Ecb => 1u64,
            Mode::Ctr => 2,
            Mode::Cbc => 3,
        };
        let dir = match self.direction {
            Direction::Encrypt => 1u64,
            Direction::Decrypt => 2,
        };
        (self.data_bytes as u64)
            .wrapping_mul(0x9e3b)
            .wrapping_add(mode * 0x1_0000)
            .wrapping_add(dir * 0x100_0000)
            .wrapping_add(self.key_size as u64)
    }
}

#[derive(Debug, Clone)]
pub struct Measurement {
    /// Aggregate throughput: bytes * reps / total seconds / 2^20.
    pub mb_per_sec: f64,
    /// Per-repetition throughputs, for medians.
    pub per_rep_mb_per_sec: Vec<f64>,
    /// Engine time split, averaged per repetition.
    pub copy_in_ns: u64,
    pub kernel_ns: u64,
    pub copy_out_ns: u64,
    pub repetitions: usize,
    pub output_checksum: u64,
}

impl Measurement {
    pub fn median_mb_per_sec(&self) -> f64 {
        let mut sorted = self.per_rep_mb_per_sec.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        sorted[sorted.len() / 2]
    }
}

/// Time `reps` runs of one configuration, after one untimed warm-up.
/// The wall clock wraps the whole operation, staging copies included.
pub fn measure(
    engine: &Engine,
    config: &BenchConfig,
    reps: usize,
) -> Result<Measurement, ModeError> {
    let data = config.data();
    let params = config.params();
    let ctx = ModeContext::new(engine, config.backend);

    let warm = process(&ctx, &data, &params)?;
    let output_checksum = checksum(&warm);

    let mut stats_sum = DispatchStats::default();
    let mut per_rep = Vec::with_capacity(reps);
    let mut total_ns: u128 = 0;
    for _ in 0..reps {
        let start = Instant::now();
        let (_, stats) = process_with_stats(&ctx, &data, &params)?;
        let ns = start.elapsed().as_nanos().max(1);
        total_ns += ns;
        per_rep.push(mb_per_sec(data.len(), ns));
        stats_sum.accumulate(&stats);
    }

    Ok(Measurement {
        mb_per_sec: mb_per_sec(data.len() * reps, total_ns),
        per_rep_mb_per_sec: per_rep,
        copy_in_ns: stats_sum.copy_in_ns / reps as u64,
        kernel_ns: stats_sum.kernel_ns / reps as u64,
        copy_out_ns: stats_sum.copy_out_ns / reps as u64,
        repetitions: reps,
        output_checksum,
    })
}

fn mb_per_sec(bytes: usize, ns: u128) -> f64 {
    (bytes as f64 / (1u64 << 20) as f64) / (ns as f64 / 1e9)
}

/// Parse a size like `64`, `16K`, `4M` or `1G` (binary suffixes).
pub fn parse_size(s: &str) -> Result<usize, String> {
    let s = s.trim();
    let (digits, shift) = match s.as_bytes().last() {
        Some(b'K' | b'k') => (&s[..s.len() - 1], 10),
        Some(b'M' | b'm') => (&s[..s.len() - 1], 20),
        Some(b'G' | b'g') => (&s[..s.len() - 1], 30),
        _ => (s, 0),
    };
    let n: usize = digits
        .parse()
        .map_err(|_| format!("bad size `{s}` (expected digits with optional K/M/G)"))?;
    n.checked_shl(shift)
        .filter(|&v| v > 0)
        .ok_or_else(|| format!("size `{s}` is zero or out of range"))
}

enum BenchFailure {
    Usage(String),
    Runtime(String),
}

pub fn cmd_bench(args: &BenchArgs) -> i32 {
    let mut sink: Box<dyn Write> = if args.csv == "-" {
        Box::new(io::stdout())
    } else {
        match File::create(&args.csv) {
            Ok(f) => Box::new(f),
            Err(err) => {
                eprintln!("error: creating {}: {err}", args.csv);
                return 1;
            }
        }
    };
    match run_bench(args, &mut sink) {
        Ok(()) => 0,
        Err(BenchFailure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(BenchFailure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn run_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), BenchFailure> {
    let usage = BenchFailure::Usage;
    if args.reps < 3 {
        return Err(usage(format!("--reps {} is below the minimum of 3", args.reps)));
    }
    let sizes = args
        .sizes
        .iter()
        .map(|s| parse_size(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    if let Some(bad) = sizes.iter().find(|&&s| s % 16 != 0) {
        return Err(usage(format!("size {bad} is not a multiple of the 16-byte block")));
    }
    let modes = args
        .modes
        .iter()
        .map(|s| Mode::from_str(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let backends = args
        .backends
        .iter()
        .map(|s| BackendId::from_str(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    for &bits in &args.key_sizes {
        if !matches!(bits, 128 | 192 | 256) {
            return Err(usage(format!("key size {bits} (expected 128, 192 or 256)")));
        }
    }

    // One engine per distinct lane count; 0 resolves to the hardware.
    let auto = thread::available_parallelism().map_or(1, |n| n.get());
    let lane_counts: Vec<usize> = args
        .threads
        .iter()
        .map(|&t| if t == 0 { auto } else { t })
        .collect();
    let mut engines: BTreeMap<usize, Engine> = BTreeMap::new();
    for &lanes in &lane_counts {
        engines.entry(lanes).or_insert_with(|| {
            Engine::with_config(EngineConfig {
                parallel_threads: lanes,
                ..EngineConfig::default()
            })
        });
    }
    let default_engine = engines.values().next().expect("at least one engine");

    writeln!(out, "{CSV_HEADER}").map_err(io_failure)?;
    for &mode in &modes {
        for direction in [Direction::Encrypt, Direction::Decrypt] {
            for &key_size in &args.key_sizes {
                for &backend in &backends {
                    let row_lanes: &[usize] = match backend {
                        BackendId::Parallel => &lane_counts,
                        BackendId::Reference => &[1],
                        BackendId::Device => &[0],
                    };
                    for &threads in row_lanes {
                        for &data_bytes in &sizes {
                            let config = BenchConfig {
                                mode,
                                direction,
                                key_size,
                                backend,
                                threads,
                                data_bytes,
                            };
                            write_row(out, &config, args.reps, &engines, default_engine)?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn write_row(
    out: &mut dyn Write,
    config: &BenchConfig,
    reps: usize,
    engines: &BTreeMap<usize, Engine>,
    default_engine: &Engine,
) -> Result<(), BenchFailure> {
    let prefix = format!(
        "{},{},{},{},{},{}",
        config.mode, config.direction, config.key_size, config.backend, config.threads,
        config.data_bytes
    );

    let engine = match config.backend {
        BackendId::Parallel => engines.get(&config.threads).unwrap_or(default_engine),
        _ => default_engine,
    };
    if config.backend == BackendId::Device
        && !engine.list_backends().contains(&BackendId::Device)
    {
        writeln!(out, "{prefix},skipped,skipped,skipped,skipped,0").map_err(io_failure)?;
        return Ok(());
    }

    let measurement = measure(engine, config, reps)
        .map_err(|e| BenchFailure::Runtime(format!("benchmarking {prefix}: {e}")))?;

    // The bench path must not disturb correctness: one output per
    // configuration is checked against the reference backend.
    let reference = BenchConfig {
        backend: BackendId::Reference,
        ..config.clone()
    };
    let reference_out = process(
        &ModeContext::new(default_engine, BackendId::Reference),
        &reference.data(),
        &reference.params(),
    )
    .map_err(|e| BenchFailure::Runtime(format!("verifying {prefix}: {e}")))?;
    if checksum(&reference_out) != measurement.output_checksum {
        return Err(BenchFailure::Runtime(format!(
            "output of {prefix} disagrees with the reference backend"
        )));
    }

    writeln!(
        out,
        "{prefix},{:.3},{},{},{},{}",
        measurement.mb_per_sec,
        measurement.copy_in_ns,
        measurement.kernel_ns,
        measurement.copy_out_ns,
        measurement.repetitions
    )
    .map_err(io_failure)?;
    Ok(())
}

fn io_failure(err: io::Error) -> BenchFailure {
    BenchFailure::Runtime(format!("writing csv: {err}"))
}
