//! Binary label-grid archives.
//!
//! Layout, all integers and floats little-endian:
//!
//! | bytes | field                                   |
//! |-------|-----------------------------------------|
//! | 8     | magic `MLMGRID\0`                       |
//! | 4     | format version (1)                      |
//! | 4, 4  | `nx`, `ny`                              |
//! | 8     | candidate count `M` (validity bits)     |
//! | 8, 8  | `pitch_x`, `pitch_y`                    |
//! | 24    | origin `x, y, z`                        |
//! | 24    | transmitter `x, y, z`                   |
//! | 32·nx·ny | cell digests, row-major from `y_min` |
//!
//! The no-multipath digest is implied by `M`.

use std::fs;
use std::path::Path;

use crate::cells::{cell_id, CellId, LabelGrid};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::tracer::ValidityVector;

const MAGIC: &[u8; 8] = b"MLMGRID\0";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 4 + 8 + 16 + 24 + 24;

pub fn encode_label_grid(grid: &LabelGrid, candidate_count: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 32 * grid.labels.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.nx as u32).to_le_bytes());
    out.extend_from_slice(&(grid.ny as u32).to_le_bytes());
    out.extend_from_slice(&(candidate_count as u64).to_le_bytes());
    for v in [grid.pitch_x, grid.pitch_y]
        .into_iter()
        .chain(grid.origin.to_array())
        .chain(grid.tx.to_array())
    {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for id in &grid.labels {
        out.extend_from_slice(id.digest());
    }
    out
}

/// Decodes an archive into the grid and its candidate count.
pub fn decode_label_grid(bytes: &[u8]) -> std::result::Result<(LabelGrid, usize), String> {
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err("not a label-grid archive".into());
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(8);
    if version != VERSION {
        return Err(format!("unsupported archive version {version}"));
    }
    let (nx, ny) = (u32_at(12) as usize, u32_at(16) as usize);
    let candidates = u64_at(20) as usize;
    let (pitch_x, pitch_y) = (f64_at(28), f64_at(36));
    let origin = Vec3::new(f64_at(44), f64_at(52), f64_at(60));
    let tx = Vec3::new(f64_at(68), f64_at(76), f64_at(84));
    let expected = nx
        .checked_mul(ny)
        .and_then(|n| n.checked_mul(32))
        .and_then(|n| n.checked_add(HEADER_LEN));
    if expected != Some(bytes.len()) {
        return Err(format!("archive of {} bytes does not hold a {nx}x{ny} grid", bytes.len()));
    }
    if !(pitch_x > 0.0 && pitch_y > 0.0) {
        return Err("non-positive pitch".into());
    }
    let none = cell_id(&ValidityVector::zeros(candidates));
    let labels = bytes[HEADER_LEN..]
        .chunks_exact(32)
        .map(|c| {
            let digest: [u8; 32] = c.try_into().unwrap();
            CellId::from_parts(digest, &digest == none.digest())
        })
        .collect();
    let mut grid = LabelGrid::new(nx, ny, pitch_x, pitch_y, origin, labels);
    grid.tx = tx;
    Ok((grid, candidates))
}

pub fn write_label_grid(grid: &LabelGrid, candidate_count: usize, path: &Path) -> Result<()> {
    fs::write(path, encode_label_grid(grid, candidate_count)).map_err(|e| Error::io(path, e))
}

pub fn read_label_grid(path: &Path) -> Result<(LabelGrid, usize)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_label_grid(&bytes).map_err(|message| Error::Archive { path: path.into(), message })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_keeps_no_multipath_flag() {
        let los = cell_id(&ValidityVector::from_bits([true, false, false]));
        let none = cell_id(&ValidityVector::zeros(3));
        let mut g = LabelGrid::new(2, 2, 0.5, 0.25, Vec3::new(-1.0, 2.0, 1.5), vec![los, none, none, los]);
        g.tx = Vec3::new(0.0, 0.0, 32.0);
        let (back, m) = decode_label_grid(&encode_label_grid(&g, 3)).unwrap();
        assert_eq!(m, 3);
        assert_eq!(back, g);
        assert!(back.labels[1].is_no_multipath());
    }

    #[test]
    fn truncated_archive_is_rejected() {
        let los = cell_id(&ValidityVector::from_bits([true]));
        let g = LabelGrid::new(2, 1, 1.0, 1.0, Vec3::ZERO, vec![los, los]);
        let bytes = encode_label_grid(&g, 1);
        assert!(decode_label_grid(&bytes[..bytes.len() - 1]).is_err());
        assert!(decode_label_grid(b"garbage").is_err());
    }
}
