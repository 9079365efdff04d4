//! A fixed-width bitset over at most [`BitSet::CAPACITY`] positions.
//!
//! Everything in this crate is finite and small, so sets of positions are a
//! single `u128` word: copying is free and the set algebra is one instruction.

use std::fmt;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet(u128);

impl BitSet {
    pub const CAPACITY: usize = 128;

    #[inline]
    pub const fn empty() -> Self {
        BitSet(0)
    }

    /// The set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= Self::CAPACITY);
        if n == Self::CAPACITY {
            BitSet(u128::MAX)
        } else {
            BitSet((1u128 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < Self::CAPACITY);
        BitSet(1u128 << i)
    }

    #[inline]
    pub const fn from_bits(bits: u128) -> Self {
        BitSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < Self::CAPACITY && (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < Self::CAPACITY);
        self.0 |= 1u128 << i;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < Self::CAPACITY);
        self.0 &= !(1u128 << i);
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        let mut s = self;
        s.insert(i);
        s
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        BitSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        BitSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        BitSet(self.0 & !other.0)
    }

    /// Complement relative to `{0, .., n-1}`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        BitSet(!self.0 & Self::full(n).0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, in increasing numeric order, starting with the
    /// empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Canonical ordering used for deterministic output: by cardinality, then
    /// by bit pattern.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then(self.0.cmp(&other.0))
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = BitSet::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Iterator over the subsets of a mask (Gosper-free submask walk).
pub struct Subsets {
    mask: u128,
    next: Option<u128>,
}

impl Iterator for Subsets {
    type Item = BitSet;

    fn next(&mut self) -> Option<BitSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(BitSet(cur))
    }
}

impl IntoIterator for BitSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_every_submask_once() {
        let mask: BitSet = [1, 4, 7].into_iter().collect();
        let subs: Vec<_> = mask.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], BitSet::empty());
        assert_eq!(*subs.last().unwrap(), mask);
        for s in &subs {
            assert!(s.is_subset(mask));
        }
        let mut dedup = subs.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 8);
    }

    #[test]
    fn empty_mask_has_one_subset() {
        assert_eq!(BitSet::empty().subsets().count(), 1);
    }

    #[test]
    fn full_width_edges() {
        let all = BitSet::full(128);
        assert_eq!(all.len(), 128);
        assert!(all.contains(127));
        assert_eq!(BitSet::full(0), BitSet::empty());
        assert_eq!(BitSet::singleton(3).complement(4).len(), 3);
    }
}
