use crate::{ModeError, PaddingPolicy};

/// Apply a padding policy. PKCS#7 always appends between 1 and 16
/// bytes, each holding the pad length; `none` is the identity.
pub fn pad(data: &[u8], policy: PaddingPolicy) -> Vec<u8> {
    match policy {
        PaddingPolicy::None => data.to_vec(),
        PaddingPolicy::Pkcs7 => {
            let n = 16 - data.len() % 16;
            let mut out = Vec::with_capacity(data.len() + n);
            out.extend_from_slice(data);
            out.resize(data.len() + n, n as u8);
            out
        }
    }
}

/// Verify and strip padding. PKCS#7 requires a block-aligned,
/// non-empty input whose last `n` bytes all equal `n`.
pub fn unpad(data: &[u8], policy: PaddingPolicy) -> Result<Vec<u8>, ModeError> {
    match policy {
        PaddingPolicy::None => Ok(data.to_vec()),
        PaddingPolicy::Pkcs7 => {
            if data.is_empty() || !data.len().is_multiple_of(16) {
                return Err(ModeError::BadPadding);
            }
            let n = *data.last().unwrap() as usize;
            if n == 0 || n > 16 || data[data.len() - n..].iter().any(|&b| b as usize != n) {
                return Err(ModeError::BadPadding);
            }
            Ok(data[..data.len() - n].to_vec())
        }
    }
}
