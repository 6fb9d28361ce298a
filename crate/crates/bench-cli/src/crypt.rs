use std::fs;

use aes_core::{Block128, KeySize};
use cipher_modes::{process, Direction, Mode, ModeContext, ModeError, ModeParams};
use dispatch_engine::{BackendId, Engine};

use crate::cli::CryptArgs;

/// Run one mode over a file. Returns the process exit status.
pub fn cmd_crypt(args: &CryptArgs) -> i32 {
    let key = match hex::decode(&args.key_hex) {
        Ok(key) => key,
        Err(err) => return usage(&format!("--key-hex is not valid hex: {err}")),
    };
    if KeySize::from_key_len(key.len()).is_none() {
        return usage(&format!(
            "--key-hex decodes to {} bytes; expected 16, 24 or 32",
            key.len()
        ));
    }

    let needs_iv = matches!(args.mode, Mode::Cbc | Mode::Ctr);
    let iv = match (&args.iv_hex, needs_iv) {
        (Some(iv_hex), _) => match hex::decode(iv_hex) {
            Ok(bytes) if bytes.len() == 16 => {
                Some(Block128::from_bytes(&bytes.try_into().unwrap()))
            }
            Ok(bytes) => {
                return usage(&format!(
                    "--iv-hex decodes to {} bytes; expected exactly 16",
                    bytes.len()
                ))
            }
            Err(err) => return usage(&format!("--iv-hex is not valid hex: {err}")),
        },
        (None, true) => return usage(&format!("--mode {} requires --iv-hex", args.mode)),
        (None, false) => None,
    };

    let engine = Engine::new();
    if args.mode == Mode::Cbc
        && args.direction == Direction::Encrypt
        && args.backend != BackendId::Reference
    {
        eprintln!(
            "warning: cbc encryption chains blocks and cannot run on the {} backend; \
             running sequentially on the host",
            args.backend
        );
    }
    if args.backend == BackendId::Device && !engine.list_backends().contains(&BackendId::Device) {
        return usage("backend `device` is not available on this machine");
    }

    let data = match fs::read(&args.input) {
        Ok(data) => data,
        Err(err) => return failure(&format!("reading {}: {err}", args.input.display())),
    };

    let params = ModeParams {
        mode: args.mode,
        direction: args.direction,
        key,
        iv,
        padding: args.pad,
    };
    let ctx = ModeContext::new(&engine, args.backend);
    let out = match process(&ctx, &data, &params) {
        Ok(out) => out,
        Err(err @ (ModeError::MissingIv(_) | ModeError::Aes(_))) => return usage(&err.to_string()),
        Err(err) => return failure(&err.to_string()),
    };

    match fs::write(&args.output, out) {
        Ok(()) => 0,
        Err(err) => failure(&format!("writing {}: {err}", args.output.display())),
    }
}

fn usage(message: &str) -> i32 {
    eprintln!("error: {message}");
    2
}

fn failure(message: &str) -> i32 {
    eprintln!("error: {message}");
    1
}
