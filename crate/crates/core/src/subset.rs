//! Fixed-width bitsets over a finite ground set `0..n`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// Largest ground set representable by a [`Subset`].
pub const MAX_GROUND: usize = 512;

const WORDS: usize = MAX_GROUND / 64;

/// A subset of `0..MAX_GROUND`, stored as a bitmask.
///
/// Subsets are `Copy`; all set operations are word-parallel. The total order
/// is the lexicographic order of the ascending element sequences, so
/// `{0,1} < {0,1,2} < {0,2} < {1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset {
    words: [u64; WORDS],
}

impl Subset {
    pub const fn empty() -> Self {
        Subset { words: [0; WORDS] }
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND, "ground size {n} exceeds {MAX_GROUND}");
        let mut s = Subset::empty();
        for (w, word) in s.words.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn singleton(x: usize) -> Self {
        let mut s = Subset::empty();
        s.insert(x);
        s
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < MAX_GROUND, "element {x} out of range");
        self.words[x / 64] |= 1u64 << (x % 64);
    }

    pub fn remove(&mut self, x: usize) {
        if x < MAX_GROUND {
            self.words[x / 64] &= !(1u64 << (x % 64));
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        x < MAX_GROUND && self.words[x / 64] & (1u64 << (x % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut out = *self;
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        let mut out = *self;
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
        out
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        let mut out = *self;
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
        out
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    /// Size of `self ∩ other` without materialising it.
    pub fn intersection_len(&self, other: &Subset) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Largest element, if any.
    pub fn last(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> Iter {
        Iter {
            words: self.words,
            word: 0,
        }
    }

    /// Image under an index map; `map[x]` must be defined for every element.
    pub fn map(&self, map: &[usize]) -> Subset {
        self.iter().map(|x| map[x]).collect()
    }

    /// Subset from the low bits of `mask`, i.e. `{i : bit i of mask set}`.
    pub fn from_mask(mask: u64) -> Subset {
        let mut s = Subset::empty();
        s.words[0] = mask;
        s
    }

    /// The first word of the bitmask; exact for subsets of `0..64`.
    pub fn low_mask(&self) -> u64 {
        self.words[0]
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Subset::empty();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for Subset {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
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

impl IntoIterator for &Subset {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        self.union(&rhs)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        self.intersection(&rhs)
    }
}

impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        self.difference(&rhs)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{0,1,2}` style, no spaces.
impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_len() {
        assert_eq!(Subset::full(0).len(), 0);
        assert_eq!(Subset::full(63).len(), 63);
        assert_eq!(Subset::full(64).len(), 64);
        assert_eq!(Subset::full(130).len(), 130);
        assert_eq!(Subset::full(MAX_GROUND).len(), MAX_GROUND);
        assert_eq!(Subset::full(130).last(), Some(129));
    }

    #[test]
    fn order_is_lexicographic_on_elements() {
        let a: Subset = [0, 1].iter().collect();
        let b: Subset = [0, 1, 2].iter().collect();
        let c: Subset = [0, 2].iter().collect();
        let d: Subset = [1].iter().collect();
        assert!(a < b && b < c && c < d);
        assert!(Subset::empty() < a);
    }

    #[test]
    fn iteration_crosses_words() {
        let s: Subset = [3, 64, 65, 300, 511].iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 64, 65, 300, 511]);
        assert_eq!(s.first(), Some(3));
        assert_eq!(s.to_string(), "{3,64,65,300,511}");
    }

    #[test]
    fn set_algebra() {
        let a: Subset = [0, 1, 2].iter().collect();
        let b: Subset = [2, 3].iter().collect();
        assert_eq!((a | b).len(), 4);
        assert_eq!(a & b, Subset::singleton(2));
        assert_eq!((a - b).len(), 2);
        assert!(Subset::singleton(2).is_subset_of(&a));
        assert!(a.intersects(&b));
        assert_eq!(a.intersection_len(&b), 1);
    }
}
