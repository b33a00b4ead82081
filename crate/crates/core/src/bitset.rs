use std::fmt;

use serde::{Serialize, Serializer};

const WORDS: usize = 4;

/// Largest group order an [`ElementSet`] can address.
pub const MAX_ORDER: usize = WORDS * 64;

/// A subset of the elements `{0, .., n-1}` of a group, stored as a fixed
/// 256-bit mask with a cached cardinality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet {
    // Field order matters for the derived `Ord`: smaller sets sort first.
    len: u16,
    words: [u64; WORDS],
}

impl ElementSet {
    pub const fn new() -> Self {
        Self { len: 0, words: [0; WORDS] }
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ORDER, "order {n} exceeds ElementSet capacity");
        let mut words = [0u64; WORDS];
        for (w, word) in words.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        Self { len: n as u16, words }
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::new();
        s.insert(i);
        s
    }

    /// Builds a set from the low bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut words = [0u64; WORDS];
        words[0] = mask;
        Self { len: mask.count_ones() as u16, words }
    }

    /// The first 64 bits. Only meaningful for groups of order at most 64.
    pub fn low_mask(&self) -> u64 {
        self.words[0]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Parity of the cardinality: 0 for even, 1 for odd.
    #[inline]
    pub fn parity(&self) -> u8 {
        (self.len & 1) as u8
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < MAX_ORDER && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Inserts `i`, returning `true` if it was not already present.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < MAX_ORDER, "element index {i} out of range");
        let bit = 1u64 << (i % 64);
        let word = &mut self.words[i / 64];
        if *word & bit == 0 {
            *word |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Removes `i`, returning `true` if it was present.
    pub fn remove(&mut self, i: usize) -> bool {
        if !self.contains(i) {
            return false;
        }
        self.words[i / 64] &= !(1u64 << (i % 64));
        self.len -= 1;
        true
    }

    #[must_use]
    pub fn with(mut self, i: usize) -> Self {
        self.insert(i);
        self
    }

    #[must_use]
    pub fn without(mut self, i: usize) -> Self {
        self.remove(i);
        self
    }

    fn from_words(words: [u64; WORDS]) -> Self {
        let len = words.iter().map(|w| w.count_ones()).sum::<u32>() as u16;
        Self { len, words }
    }

    #[must_use]
    pub fn union(&self, other: &Self) -> Self {
        Self::from_words(std::array::from_fn(|w| self.words[w] | other.words[w]))
    }

    #[must_use]
    pub fn intersection(&self, other: &Self) -> Self {
        Self::from_words(std::array::from_fn(|w| self.words[w] & other.words[w]))
    }

    #[must_use]
    pub fn difference(&self, other: &Self) -> Self {
        Self::from_words(std::array::from_fn(|w| self.words[w] & !other.words[w]))
    }

    #[inline]
    pub fn is_subset(&self, other: &Self) -> bool {
        self.len <= other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.is_subset(self)
    }

    /// Largest member plus one, or 0 for the empty set.
    pub fn bound(&self) -> usize {
        for w in (0..WORDS).rev() {
            if self.words[w] != 0 {
                return w * 64 + 64 - self.words[w].leading_zeros() as usize;
            }
        }
        0
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Iter {
        Iter { words: self.words, word: 0 }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::new();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl Extend<usize> for ElementSet {
    fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
        for i in iter {
            self.insert(i);
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] &= w - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
        }
        None
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_sets_have_expected_size() {
        for n in [0, 1, 5, 63, 64, 65, 128, 200, 256] {
            let s = ElementSet::full(n);
            assert_eq!(s.len(), n);
            assert_eq!(s.iter().count(), n);
            assert_eq!(s.bound(), n);
        }
    }

    #[test]
    fn insert_and_remove_track_len() {
        let mut s = ElementSet::new();
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(130));
        assert_eq!(s.len(), 2);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert_eq!(s.to_vec(), vec![130]);
    }

    #[test]
    fn ordering_puts_smaller_sets_first() {
        let a = ElementSet::from_iter([200]);
        let b = ElementSet::from_iter([0, 1]);
        assert!(a < b);
    }

    fn arb_set() -> impl Strategy<Value = (ElementSet, Vec<usize>)> {
        prop::collection::vec(0usize..MAX_ORDER, 0..40).prop_map(|v| (v.iter().copied().collect(), v))
    }

    proptest! {
        #[test]
        fn cardinality_is_popcount((s, raw) in arb_set()) {
            let mut dedup = raw.clone();
            dedup.sort_unstable();
            dedup.dedup();
            prop_assert_eq!(s.len(), dedup.len());
            prop_assert_eq!(s.to_vec(), dedup);
        }

        #[test]
        fn set_algebra_agrees_with_members((a, _) in arb_set(), (b, _) in arb_set()) {
            let u = a.union(&b);
            let i = a.intersection(&b);
            let d = a.difference(&b);
            for x in 0..MAX_ORDER {
                prop_assert_eq!(u.contains(x), a.contains(x) || b.contains(x));
                prop_assert_eq!(i.contains(x), a.contains(x) && b.contains(x));
                prop_assert_eq!(d.contains(x), a.contains(x) && !b.contains(x));
            }
            prop_assert_eq!(u.len() + i.len(), a.len() + b.len());
            prop_assert!(i.is_subset(&a) && a.is_subset(&u));
            prop_assert_eq!(a.is_subset(&b), a.iter().all(|x| b.contains(x)));
        }
    }
}
