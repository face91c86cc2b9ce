//! Subsets of a finite carrier, stored as bit masks.

use std::cmp::Ordering;

use crate::algebra::{ElementId, MAX_ELEMENTS};

/// A subset of a carrier of `n <= 64` elements.
///
/// Ordered by cardinality first, then lexicographically by sorted member indices,
/// which lists `{1}` before larger systems and the full carrier last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementSubset {
    n: u8,
    bits: u64,
}

impl ElementSubset {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS, "carrier too large for a subset mask");
        Self {
            n: n as u8,
            bits: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        s.bits = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        s
    }

    pub fn from_bits(n: usize, bits: u64) -> Self {
        let full = Self::full(n);
        assert_eq!(bits & !full.bits, 0, "subset bits outside the carrier");
        Self { n: n as u8, bits }
    }

    pub fn from_members(n: usize, members: impl IntoIterator<Item = ElementId>) -> Self {
        let mut s = Self::empty(n);
        for m in members {
            s.insert(m);
        }
        s
    }

    pub fn carrier_size(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn insert(&mut self, x: ElementId) {
        assert!(
            x.index() < self.carrier_size(),
            "element outside the carrier"
        );
        self.bits |= 1 << x.index();
    }

    #[inline]
    pub fn contains(&self, x: ElementId) -> bool {
        self.bits >> x.index() & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.carrier_size())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            bits: self.bits & other.bits,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            bits: self.bits | other.bits,
        }
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        let bits = self.bits;
        (0..self.carrier_size())
            .filter(move |i| bits >> i & 1 == 1)
            .map(ElementId::new)
    }
}

impl Ord for ElementSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ElementSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
