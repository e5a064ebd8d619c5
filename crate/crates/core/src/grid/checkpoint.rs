//! Binary checkpoints.
//!
//! Layout, all little-endian: magic `MBRNCKPT` (8 bytes), format version `u32`, provenance
//! tag (32 bytes, the run's config hash), `n` `u64`,
//! half-width `f64`, stencil order `u32`, dissipation `f64`, cfl `f64`, time `f64`, value
//! count `u64`, then `phi` and `pi` as `f64` arrays of `n^3` entries each.

use std::io::{Read, Write};

use super::spec::GridSpec;
use super::state::FieldState;
use crate::error::GridError;

pub const MAGIC: &[u8; 8] = b"MBRNCKPT";
pub const VERSION: u32 = 2;

/// Provenance tag stored in every checkpoint.
pub type Tag = [u8; 32];

fn io(e: std::io::Error) -> GridError {
    GridError::Checkpoint(e.to_string())
}

pub fn write_checkpoint<W: Write>(mut w: W, grid: &GridSpec, s: &FieldState, tag: &Tag) -> Result<(), GridError> {
    let count = grid.len() as u64;
    if s.phi.len() != grid.len() || s.pi.len() != grid.len() {
        return Err(GridError::Checkpoint("state does not match the grid".into()));
    }
    let mut buf = Vec::with_capacity(64 + 16 * grid.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(tag);
    buf.extend_from_slice(&(grid.n as u64).to_le_bytes());
    buf.extend_from_slice(&grid.half_width.to_le_bytes());
    buf.extend_from_slice(&(grid.order as u32).to_le_bytes());
    buf.extend_from_slice(&grid.dissipation.to_le_bytes());
    buf.extend_from_slice(&grid.cfl.to_le_bytes());
    buf.extend_from_slice(&s.t.to_le_bytes());
    buf.extend_from_slice(&count.to_le_bytes());
    for v in s.phi.iter().chain(&s.pi) {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf).map_err(io)
}

struct Cursor<'a> {
    b: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], GridError> {
        let s = self.b.get(self.at..self.at + N).ok_or_else(|| GridError::Checkpoint("truncated file".into()))?;
        self.at += N;
        Ok(s.try_into().expect("length checked"))
    }
    fn u32(&mut self) -> Result<u32, GridError> {
        Ok(u32::from_le_bytes(self.take()?))
    }
    fn u64(&mut self) -> Result<u64, GridError> {
        Ok(u64::from_le_bytes(self.take()?))
    }
    fn f64(&mut self) -> Result<f64, GridError> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<(GridSpec, FieldState, Tag), GridError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(io)?;
    let mut c = Cursor { b: &bytes, at: 0 };
    if &c.take::<8>()? != MAGIC {
        return Err(GridError::Checkpoint("bad magic".into()));
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(GridError::Checkpoint(format!("unsupported version {version}")));
    }
    let tag = c.take::<32>()?;
    let n = c.u64()? as usize;
    let half_width = c.f64()?;
    let order = c.u32()? as usize;
    let dissipation = c.f64()?;
    let cfl = c.f64()?;
    let t = c.f64()?;
    let count = c.u64()? as usize;
    let grid = GridSpec { half_width, n, order, dissipation, cfl };
    grid.validate()?;
    if count != grid.len() {
        return Err(GridError::Checkpoint(format!("value count {count} does not match n = {n}")));
    }
    let mut read = |len: usize| -> Result<Vec<f64>, GridError> { (0..len).map(|_| c.f64()).collect() };
    let phi = read(count)?;
    let pi = read(count)?;
    if c.at != bytes.len() {
        return Err(GridError::Checkpoint("trailing bytes".into()));
    }
    Ok((grid, FieldState { t, phi, pi }, tag))
}
