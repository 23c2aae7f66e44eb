use std::fmt;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::tracer::ValidityVector;

/// Identity of a multipath cell: SHA-256 of the canonical serialization of
/// its validity vector (8-byte little-endian bit length, then the bits packed
/// LSB-first and zero-padded to a byte).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    digest: [u8; 32],
    no_multipath: bool,
}

impl CellId {
    pub fn from_parts(digest: [u8; 32], no_multipath: bool) -> CellId {
        CellId { digest, no_multipath }
    }

    pub fn digest(&self) -> &[u8; 32] {
        &self.digest
    }

    /// Whether the underlying validity vector is all zeros.
    pub fn is_no_multipath(&self) -> bool {
        self.no_multipath
    }

    pub fn hex(&self) -> String {
        hex::encode(self.digest)
    }
}

impl fmt::Debug for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellId({}{})", &self.hex()[..12], if self.no_multipath { ", none" } else { "" })
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

pub fn cell_id(vector: &ValidityVector) -> CellId {
    let mut sha = Sha256::new();
    sha.update((vector.len() as u64).to_le_bytes());
    sha.update(vector.to_bytes());
    CellId { digest: sha.finalize().into(), no_multipath: vector.is_all_zero() }
}

/// Computes a [`CellId`] from bits fed in order, without holding the vector.
#[derive(Clone)]
pub struct CellHasher {
    sha: Sha256,
    expected: u64,
    seen: u64,
    partial: u8,
    any_set: bool,
}

impl CellHasher {
    pub fn new(bit_len: usize) -> CellHasher {
        let mut sha = Sha256::new();
        sha.update((bit_len as u64).to_le_bytes());
        CellHasher { sha, expected: bit_len as u64, seen: 0, partial: 0, any_set: false }
    }

    pub fn push(&mut self, bit: bool) {
        let pos = (self.seen % 8) as u8;
        if bit {
            self.partial |= 1 << pos;
            self.any_set = true;
        }
        self.seen += 1;
        if pos == 7 {
            self.sha.update([self.partial]);
            self.partial = 0;
        }
    }

    pub fn absorb(&mut self, bits: &BitSlice<u8, Lsb0>) {
        // Whole bytes can go straight through once aligned.
        let mut rest = bits;
        while self.seen % 8 != 0 && !rest.is_empty() {
            self.push(rest[0]);
            rest = &rest[1..];
        }
        let whole = rest.len() / 8 * 8;
        if whole > 0 {
            let mut bytes = Vec::with_capacity(whole / 8);
            for chunk in rest[..whole].chunks_exact(8) {
                bytes.push(chunk.load_le::<u8>());
            }
            self.any_set |= bytes.iter().any(|&b| b != 0);
            self.sha.update(&bytes);
            self.seen += whole as u64;
        }
        for bit in rest[whole..].iter().by_vals() {
            self.push(bit);
        }
    }

    /// # Panics
    /// Panics if the number of bits pushed differs from the declared length.
    pub fn finish(mut self) -> CellId {
        assert_eq!(self.seen, self.expected, "CellHasher fed the wrong number of bits");
        if self.seen % 8 != 0 {
            self.sha.update([self.partial]);
        }
        CellId { digest: self.sha.finalize().into(), no_multipath: !self.any_set }
    }
}

/// An 8-bit RGBA color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rgba(pub [u8; 4]);

impl Rgba {
    pub const TRANSPARENT: Rgba = Rgba([0, 0, 0, 0]);

    pub fn alpha(&self) -> u8 {
        self.0[3]
    }

    pub fn hex(&self) -> String {
        format!("#{}", hex::encode(self.0))
    }
}

pub const CELL_SATURATION: f64 = 0.65;
pub const CELL_LIGHTNESS: f64 = 0.55;

/// Display color of a cell. The no-multipath cell is fully transparent;
/// any other cell gets the hue encoded by the first two digest bytes.
pub fn color_of(id: &CellId) -> Rgba {
    if id.no_multipath {
        return Rgba::TRANSPARENT;
    }
    let hue = u16::from_be_bytes([id.digest[0], id.digest[1]]) as f64 / 65536.0 * 360.0;
    let [r, g, b] = hsl_to_rgb(hue, CELL_SATURATION, CELL_LIGHTNESS);
    Rgba([r, g, b, 255])
}

fn hsl_to_rgb(hue_deg: f64, s: f64, l: f64) -> [u8; 3] {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let h = hue_deg / 60.0;
    let x = c * (1.0 - (h % 2.0 - 1.0).abs());
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    [r, g, b].map(|v| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8)
}
