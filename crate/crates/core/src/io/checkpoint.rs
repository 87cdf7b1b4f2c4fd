//! Binary vorticity checkpoints.
//!
//! Layout, all little-endian: magic `W2S1`, `u32` version, `u32` n, then
//! `n × n` `f64` samples row-major with the x-index fastest.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::error::FieldError;
use crate::spectral::{GridSpec, RealField};

pub const MAGIC: &[u8; 4] = b"W2S1";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 12;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes {0:?}, expected \"W2S1\"")]
    BadMagic([u8; 4]),
    #[error("unsupported checkpoint version {0}")]
    UnsupportedVersion(u32),
    #[error("truncated checkpoint: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("checkpoint has {0} trailing bytes")]
    TrailingBytes(usize),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("invalid field: {0}")]
    InvalidField(FieldError),
}

pub fn encode_checkpoint(field: &RealField) -> Vec<u8> {
    let n = field.grid().n();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * n * n);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<RealField, CheckpointError> {
    if bytes.len() < HEADER_LEN {
        return Err(CheckpointError::Truncated { expected: HEADER_LEN, found: bytes.len() });
    }
    let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
    if &magic != MAGIC {
        return Err(CheckpointError::BadMagic(magic));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(CheckpointError::UnsupportedVersion(version));
    }
    let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let grid = GridSpec::new(n).map_err(CheckpointError::InvalidField)?;
    let expected = HEADER_LEN + 8 * grid.len();
    if bytes.len() < expected {
        return Err(CheckpointError::Truncated { expected, found: bytes.len() });
    }
    if bytes.len() > expected {
        return Err(CheckpointError::TrailingBytes(bytes.len() - expected));
    }
    let values: Vec<f64> = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(CheckpointError::NonFinite(i));
    }
    RealField::new(grid, values).map_err(CheckpointError::InvalidField)
}

pub fn write_checkpoint(field: &RealField, path: impl AsRef<Path>) -> Result<(), CheckpointError> {
    fs::write(path, encode_checkpoint(field))?;
    Ok(())
}

pub fn read_checkpoint(path: impl AsRef<Path>) -> Result<RealField, CheckpointError> {
    decode_checkpoint(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> RealField {
        RealField::from_fn(GridSpec::new(16).unwrap(), |x, y| (x + 0.2).cos() * (2.0 * y).sin() + y.cos())
            .unwrap()
    }

    #[test]
    fn header_layout() {
        let bytes = encode_checkpoint(&field());
        assert_eq!(&bytes[0..4], b"W2S1");
        assert_eq!(&bytes[4..8], &[1, 0, 0, 0]);
        assert_eq!(&bytes[8..12], &[16, 0, 0, 0]);
        assert_eq!(bytes.len(), 12 + 8 * 256);
        // second sample is x-index 1, y-index 0
        let v1 = f64::from_le_bytes(bytes[20..28].try_into().unwrap());
        assert_eq!(v1, field().values()[1]);
    }

    #[test]
    fn file_round_trip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.w2s"), dir.path().join("b.w2s"));
        write_checkpoint(&field(), &a).unwrap();
        let back = read_checkpoint(&a).unwrap();
        assert_eq!(back, field());
        write_checkpoint(&back, &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn error_categories() {
        let bytes = encode_checkpoint(&field());
        assert!(matches!(decode_checkpoint(&bytes[..100]), Err(CheckpointError::Truncated { .. })));
        assert!(matches!(decode_checkpoint(&bytes[..5]), Err(CheckpointError::Truncated { .. })));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode_checkpoint(&bad), Err(CheckpointError::BadMagic(_))));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(matches!(decode_checkpoint(&bad), Err(CheckpointError::UnsupportedVersion(2))));
        let mut bad = bytes.clone();
        bad[12..20].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(matches!(decode_checkpoint(&bad), Err(CheckpointError::NonFinite(0))));
        let mut bad = bytes.clone();
        bad.push(0);
        assert!(matches!(decode_checkpoint(&bad), Err(CheckpointError::TrailingBytes(1))));
        let mut bad = bytes;
        bad[8] = 15;
        assert!(matches!(decode_checkpoint(&bad), Err(CheckpointError::InvalidField(_))));
    }
}
