//! Fixed-universe bit sets over point ids `[0, n)`.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;

const WORD: usize = 64;

/// A subset of `[0, len)`. Equality and hashing are extensional
/// (unused high bits are always zero).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    len: usize,
    words: SmallVec<[u64; 1]>,
}

impl PointSet {
    pub fn empty(len: usize) -> Self {
        let words = SmallVec::from_elem(0, len.div_ceil(WORD));
        PointSet { len, words }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn singleton(len: usize, x: usize) -> Self {
        let mut s = Self::empty(len);
        s.insert(x);
        s
    }

    pub fn from_iter_in(len: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in items {
            s.insert(i);
        }
        s
    }

    /// Size of the universe, not the cardinality.
    #[inline]
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len, "point {i} outside universe {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn union_with(&mut self, other: &PointSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn complement(&self) -> PointSet {
        let mut s = PointSet::empty(self.len);
        for i in 0..self.len {
            if !self.contains(i) {
                s.insert(i);
            }
        }
        s
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Image of the set under a total map table.
    pub fn image(&self, map: &[usize]) -> PointSet {
        PointSet::from_iter_in(self.len, self.iter().map(|i| map[i]))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

/// Wire form carries only the members; the universe is recovered by
/// the caller (see [`PointSet::with_universe`]).
impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(d)?;
        let len = items.iter().max().map_or(0, |m| m + 1);
        Ok(PointSet::from_iter_in(len, items))
    }
}

impl PointSet {
    /// Re-home a set onto a (larger or equal) universe.
    pub fn with_universe(&self, len: usize) -> PointSet {
        PointSet::from_iter_in(len, self.iter().filter(|&i| i < len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops_across_word_boundary() {
        let mut s = PointSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert_eq!(s.count(), 3);
        let c = s.complement();
        assert_eq!(c.count(), 127);
        assert!(!c.intersects(&s));
        assert!(s.is_subset(&PointSet::full(130)));
        s.remove(64);
        assert!(!s.contains(64));
    }

    #[test]
    fn image_under_map() {
        let s = PointSet::from_iter_in(4, [0, 1, 3]);
        assert_eq!(s.image(&[2, 2, 0, 1]).to_vec(), vec![1, 2]);
    }
}
