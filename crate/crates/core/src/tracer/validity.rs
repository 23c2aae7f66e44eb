use std::ops::Range;

use bitvec::prelude::*;

use super::{trace_candidate, CandidateEnumeration};
use crate::geometry::{Scene, Vec3};

/// One bit per candidate of an enumeration; bit `j` is set iff candidate `j`
/// yields a valid path.
///
/// Bits are stored little-endian within each byte, which is also their
/// canonical serialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ValidityVector(BitVec<u8, Lsb0>);

impl ValidityVector {
    pub fn zeros(len: usize) -> ValidityVector {
        ValidityVector(BitVec::repeat(false, len))
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> ValidityVector {
        ValidityVector(bits.into_iter().collect())
    }

    /// Rebuilds a vector from its packed bytes and bit length.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Option<ValidityVector> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let mut bits = BitVec::<u8, Lsb0>::from_slice(bytes);
        if bits[len..].any() {
            return None;
        }
        bits.truncate(len);
        Some(ValidityVector(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.0[index]
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.0.set(index, value);
    }

    pub fn count_ones(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.not_any()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().by_vals()
    }

    /// Packed bits, padded with zero bits to a whole byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bits = self.0.clone();
        bits.set_uninitialized(false);
        bits.into_vec()
    }

    /// Number of positions where the two vectors differ; `None` when lengths differ.
    pub fn hamming(&self, other: &ValidityVector) -> Option<usize> {
        if self.len() != other.len() {
            return None;
        }
        Some((self.0.clone() ^ other.0.as_bitslice()).count_ones())
    }
}

/// Evaluates the candidates in `range` and pushes one bit per candidate.
pub fn validity_bits(
    tx: Vec3,
    rx: Vec3,
    enumeration: &CandidateEnumeration,
    range: Range<usize>,
    scene: &Scene,
    mut push: impl FnMut(bool),
) {
    let mut ids = Vec::with_capacity(enumeration.max_order());
    for j in range {
        enumeration.decode_into(j, &mut ids);
        push(trace_candidate(tx, rx, &ids, scene).is_some());
    }
}

/// The full validity vector of a TX/RX pair.
pub fn validity_vector(tx: Vec3, rx: Vec3, enumeration: &CandidateEnumeration, scene: &Scene) -> ValidityVector {
    let mut bits = BitVec::with_capacity(enumeration.total_count());
    validity_bits(tx, rx, enumeration, 0..enumeration.total_count(), scene, |b| bits.push(b));
    ValidityVector(bits)
}
