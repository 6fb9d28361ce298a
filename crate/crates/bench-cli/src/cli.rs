use std::path::PathBuf;
use std::str::FromStr;

use cipher_modes::{Direction, Mode, PaddingPolicy};
use clap::{Args, Parser, Subcommand};
use dispatch_engine::BackendId;

#[derive(Parser, Debug)]
#[command(
    name = "aesgrid",
    version,
    about = "Data-parallel AES over a grid of 128-bit cells"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encrypt or decrypt a file.
    Crypt(CryptArgs),
    /// Sweep configurations and emit throughput CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct CryptArgs {
    #[arg(long, value_parser = Mode::from_str)]
    pub mode: Mode,

    #[arg(long, value_parser = Direction::from_str)]
    pub direction: Direction,

    /// Cipher key, hex-encoded (16, 24 or 32 bytes).
    #[arg(long = "key-hex")]
    pub key_hex: String,

    /// IV, hex-encoded 16 bytes; required for cbc and ctr.
    #[arg(long = "iv-hex")]
    pub iv_hex: Option<String>,

    #[arg(long, default_value = "par", value_parser = BackendId::from_str)]
    pub backend: BackendId,

    #[arg(long, default_value = "pkcs7", value_parser = PaddingPolicy::from_str)]
    pub pad: PaddingPolicy,

    #[arg(long = "in")]
    pub input: PathBuf,

    #[arg(long = "out")]
    pub output: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Data sizes, comma-separated, with optional K/M/G suffix.
    #[arg(long, value_delimiter = ',', default_value = "16K,256K,4M,64M")]
    pub sizes: Vec<String>,

    #[arg(long, value_delimiter = ',', default_value = "ecb")]
    pub modes: Vec<String>,

    #[arg(long = "key-sizes", value_delimiter = ',', default_value = "128,256")]
    pub key_sizes: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_value = "ref,par")]
    pub backends: Vec<String>,

    /// Worker lane counts for the parallel backend; 0 = one per
    /// hardware thread.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub threads: Vec<usize>,

    /// Timed repetitions per configuration (>= 3); one extra warm-up
    /// run is never timed.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,

    /// CSV destination, `-` for stdout.
    #[arg(long, default_value = "-")]
    pub csv: String,
}
