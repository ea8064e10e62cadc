//! Permutations of `0..n` and generated groups.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// A bijection of `0..n`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    /// Validates that `images` is a bijection of `0..images.len()`.
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &y) in images.iter().enumerate() {
            if y >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {y} of {i} is out of range 0..{n}"
                )));
            }
            if seen[y] {
                return Err(Error::InvalidPermutation(format!("{y} is hit twice")));
            }
            seen[y] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n || touched[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle element {x} is out of range or repeated"
                    )));
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::new(images)
    }

    /// Rotation `x ↦ x + k mod n`.
    pub fn rotation(n: usize, k: usize) -> Perm {
        Perm((0..n).map(|x| (x + k) % n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn has_fixed_point(&self) -> bool {
        self.0.iter().enumerate().any(|(i, &y)| i == y)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&y| self.0[y]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &y) in self.0.iter().enumerate() {
            inv[y] = i;
        }
        Perm(inv)
    }

    pub fn image_set(&self, s: &Subset) -> Subset {
        s.map(&self.0)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, y) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{y}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `[2,0,1]` or `2 0 1` into a permutation.
pub fn parse_perm(text: &str) -> Result<Perm> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    let images = t
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidPermutation(format!("bad entry `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if images.is_empty() {
        return Err(Error::InvalidPermutation("empty permutation".into()));
    }
    Perm::new(images)
}

/// The group generated by `gens` on `0..degree`, sorted, identity first.
/// Fails once more than `cap` elements are found.
pub fn generate_group(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::InvalidPermutation(format!(
                "generator {g} has degree {} not {degree}",
                g.degree()
            )));
        }
    }
    let id = Perm::identity(degree);
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    // Finite groups: closure under right multiplication by generators
    // contains inverses.
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.compose(g);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "group size",
                        size: seen.len(),
                        cap,
                    });
                }
                queue.push_back(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}
