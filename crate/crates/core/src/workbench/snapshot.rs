//! Binary snapshot files.
//!
//! Layout: magic `HSTK1`, then little-endian `u32` version, ncomp, N, K,
//! `f64` h and time, then `(re, im)` pairs in component, m, n, k order.

use std::io::Read;
use std::path::Path;

use ndarray::Array4;
use num_complex::Complex64;

use super::output::write_atomic;
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

pub const MAGIC: &[u8; 5] = b"HSTK1";
pub const VERSION: u32 = 1;

pub fn encode(field: &SpectralField, time: f64) -> Vec<u8> {
    let g = &field.grid;
    let mut out = Vec::with_capacity(37 + 16 * field.coeffs.len());
    out.extend_from_slice(MAGIC);
    for v in [VERSION, field.ncomp() as u32, g.n() as u32, g.k() as u32] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&g.h().to_le_bytes());
    out.extend_from_slice(&time.to_le_bytes());
    // standard layout iterates component-major, then m, n, k
    for c in field.coeffs.iter() {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let chunk = self.bytes.get(self.pos..end).ok_or_else(|| Error::Snapshot("truncated file".into()))?;
        self.pos = end;
        Ok(chunk.try_into().expect("length checked"))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

pub fn decode(bytes: &[u8]) -> Result<(SpectralField, f64)> {
    let mut cur = Cursor { bytes, pos: 0 };
    if &cur.take::<5>()? != MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let version = cur.u32()?;
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let (ncomp, n, k) = (cur.u32()? as usize, cur.u32()? as usize, cur.u32()? as usize);
    let (h, time) = (cur.f64()?, cur.f64()?);
    let grid = Grid::new(n, k, h).map_err(|e| Error::Snapshot(e.to_string()))?;
    let count = ncomp * n * n * k;
    if bytes.len() != cur.pos + 16 * count {
        return Err(Error::Snapshot(format!("expected {} coefficient bytes, found {}", 16 * count, bytes.len() - cur.pos)));
    }
    let mut data = Vec::with_capacity(count);
    for _ in 0..count {
        data.push(Complex64::new(cur.f64()?, cur.f64()?));
    }
    let coeffs = Array4::from_shape_vec((ncomp, n, n, k), data).expect("length checked");
    Ok((SpectralField { grid, coeffs }, time))
}

pub fn write_snapshot(path: &Path, field: &SpectralField, time: f64) -> Result<()> {
    write_atomic(path, |w| w.write_all(&encode(field, time)))
}

pub fn read_snapshot(path: &Path) -> Result<(SpectralField, f64)> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::Snapshot(format!("cannot read {}: {e}", path.display())))?;
    decode(&bytes)
}
