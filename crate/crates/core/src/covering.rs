//! The covering algebra: refinement, joins, meets, stars, star-refinement,
//! the two excision constructions, and the point-projection map.
//!
//! Relations follow the usual convention `coarse ⪯ fine`: `fine` refines
//! `coarse` when every member of `fine` lies inside some member of `coarse`.
//! Functions that build coverings return canonical ones (no empty,
//! duplicate or non-maximal members, sorted); [`Covering::new`] keeps a raw
//! member list for replaying constructions verbatim.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_GROUND};
use crate::uniformity::{complexity, is_admissible, UniformStructure};

/// The ground set `{0, ..., size-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<GroundSet> {
        if size == 0 {
            return Err(Error::EmptyGround);
        }
        if size > MAX_GROUND {
            return Err(Error::CapExceeded {
                what: "ground",
                size,
                cap: MAX_GROUND,
            });
        }
        Ok(GroundSet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size)
    }

    /// Errors if `s` has an element outside the ground set.
    pub fn check(&self, s: &Subset) -> Result<()> {
        match s.last() {
            Some(x) if x >= self.size => Err(Error::ElementOutOfRange {
                element: x,
                ground: self.size,
            }),
            _ => Ok(()),
        }
    }

    pub fn same_as(&self, other: &GroundSet) -> Result<()> {
        if self.size != other.size {
            return Err(Error::GroundMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }
}

/// A finite family of subsets whose union is the ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Covering {
    ground: GroundSet,
    members: Vec<Subset>,
    canonical: bool,
}

impl Covering {
    /// Raw covering: members are kept as given (order, duplicates, empties).
    pub fn new(ground: GroundSet, members: Vec<Subset>) -> Result<Covering> {
        let mut union = Subset::empty();
        for m in &members {
            ground.check(m)?;
            union = union | *m;
        }
        let missing = ground.full() - union;
        if !missing.is_empty() {
            return Err(Error::NotACovering {
                missing: missing.to_string(),
            });
        }
        Ok(Covering {
            ground,
            members,
            canonical: false,
        })
    }

    /// Canonical covering built from `members`.
    pub fn canonical(ground: GroundSet, members: Vec<Subset>) -> Result<Covering> {
        Ok(Covering::new(ground, members)?.canonicalize())
    }

    pub fn from_lists(ground: GroundSet, lists: &[Vec<usize>]) -> Result<Covering> {
        let mut members = Vec::with_capacity(lists.len());
        for l in lists {
            let mut s = Subset::empty();
            for &x in l {
                if x >= ground.size() {
                    return Err(Error::ElementOutOfRange {
                        element: x,
                        ground: ground.size(),
                    });
                }
                s.insert(x);
            }
            members.push(s);
        }
        Covering::new(ground, members)
    }

    /// The partition into singletons.
    pub fn singletons(ground: GroundSet) -> Covering {
        Covering {
            ground,
            members: (0..ground.size()).map(Subset::singleton).collect(),
            canonical: true,
        }
    }

    /// `{X}`.
    pub fn whole(ground: GroundSet) -> Covering {
        Covering {
            ground,
            members: vec![ground.full()],
            canonical: true,
        }
    }

    pub fn canonicalize(&self) -> Covering {
        if self.canonical {
            return self.clone();
        }
        Covering {
            ground: self.ground,
            members: canonical_members(self.members.clone()),
            canonical: true,
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// True when the members are pairwise disjoint and non-empty.
    pub fn is_partition(&self) -> bool {
        let mut seen = Subset::empty();
        for m in &self.members {
            if m.is_empty() || m.intersects(&seen) {
                return false;
            }
            seen = seen | *m;
        }
        true
    }

    /// Member lists, for serialisation.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.iter().collect()).collect()
    }
}

impl fmt::Display for Covering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Drops empties, duplicates and non-maximal members; sorts the rest.
pub fn canonical_members(mut members: Vec<Subset>) -> Vec<Subset> {
    members.retain(|m| !m.is_empty());
    members.sort_unstable();
    members.dedup();
    members.sort_by_key(|m| std::cmp::Reverse(m.len()));
    let mut kept: Vec<Subset> = Vec::with_capacity(members.len());
    for m in members {
        if !kept.iter().any(|k| m.is_subset_of(k)) {
            kept.push(m);
        }
    }
    kept.sort();
    kept
}

/// A finite partial map between index sets, e.g. a matching.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PartialMap {
    assignment: BTreeMap<usize, usize>,
    injective: bool,
}

impl PartialMap {
    pub fn new(assignment: BTreeMap<usize, usize>) -> PartialMap {
        let mut images: Vec<usize> = assignment.values().copied().collect();
        images.sort_unstable();
        let injective = images.windows(2).all(|w| w[0] != w[1]);
        PartialMap {
            assignment,
            injective,
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> PartialMap {
        PartialMap::new(pairs.into_iter().collect())
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.assignment.get(&x).copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.assignment.contains_key(&x)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment.keys().copied()
    }

    pub fn image(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment.values().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignment.iter().map(|(&a, &b)| (a, b))
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    /// The inverse of an injective map.
    pub fn inverse(&self) -> Option<PartialMap> {
        if !self.injective {
            return None;
        }
        Some(PartialMap::from_pairs(self.iter().map(|(a, b)| (b, a))))
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        Ok(())
    }
}

/// `coarse ⪯ fine`: every member of `fine` lies in some member of `coarse`.
pub fn refines(coarse: &Covering, fine: &Covering) -> Result<bool> {
    coarse.ground.same_as(&fine.ground)?;
    Ok(refines_members(coarse.members(), fine.members()))
}

pub(crate) fn refines_members(coarse: &[Subset], fine: &[Subset]) -> bool {
    fine.iter()
        .all(|f| coarse.iter().any(|c| f.is_subset_of(c)))
}

/// `⋁ coverings`: all intersections taking one member from each input.
pub fn join(coverings: &[Covering]) -> Result<Covering> {
    let (first, rest) = coverings.split_first().ok_or(Error::EmptyList)?;
    let mut acc = first.canonicalize().members;
    for c in rest {
        first.ground.same_as(&c.ground)?;
        acc = join_members(&acc, c.members());
    }
    Ok(Covering {
        ground: first.ground,
        members: acc,
        canonical: true,
    })
}

pub(crate) fn join_members(a: &[Subset], b: &[Subset]) -> Vec<Subset> {
    let mut cells = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let c = *x & *y;
            if !c.is_empty() {
                cells.push(c);
            }
        }
    }
    cells.sort_unstable();
    cells.dedup();
    canonical_members(cells)
}

/// `⋀ coverings`: the union of the member lists.
pub fn meet(coverings: &[Covering]) -> Result<Covering> {
    let (first, rest) = coverings.split_first().ok_or(Error::EmptyList)?;
    let mut members = first.members.clone();
    for c in rest {
        first.ground.same_as(&c.ground)?;
        members.extend_from_slice(c.members());
    }
    Ok(Covering {
        ground: first.ground,
        members: canonical_members(members),
        canonical: true,
    })
}

/// `St(s, cover)`: the union of members meeting `s`.
pub fn star_of_set(s: &Subset, cover: &Covering) -> Subset {
    star_in(s, cover.members())
}

pub fn star_of_point(x: usize, cover: &Covering) -> Subset {
    star_in(&Subset::singleton(x), cover.members())
}

pub(crate) fn star_in(s: &Subset, members: &[Subset]) -> Subset {
    members
        .iter()
        .filter(|m| m.intersects(s))
        .fold(Subset::empty(), |acc, m| acc | *m)
}

/// `cover^{*,n}`, member by member (raw: one star per input member).
pub fn star_power(cover: &Covering, n: usize) -> Covering {
    let mut members = cover.members.clone();
    for _ in 0..n {
        members = members.iter().map(|m| star_in(m, &members)).collect();
    }
    Covering {
        ground: cover.ground,
        members,
        canonical: cover.canonical && n == 0,
    }
}

/// `coarse ⪯* fine`, i.e. `coarse ⪯ fine*`.
pub fn is_star_refinement(coarse: &Covering, fine: &Covering) -> Result<bool> {
    refines(coarse, &star_power(fine, 1))
}

/// `{U∖S : U∈u} ∪ {St(x,v) : x∈S}`, canonicalised.
pub fn excise_with_stars(u: &Covering, v: &Covering, s: &Subset) -> Result<Covering> {
    u.ground.same_as(&v.ground)?;
    u.ground.check(s)?;
    let mut members: Vec<Subset> = u.members.iter().map(|m| *m - *s).collect();
    members.extend(s.iter().map(|x| star_of_point(x, v)));
    Covering::canonical(u.ground, members)
}

/// `{U∖F : U∈u} ∪ patch`, canonicalised. Requires `F ⊆ ⋃patch`.
pub fn excise_finite(u: &Covering, patch: &[Subset], f: &Subset) -> Result<Covering> {
    u.ground.check(f)?;
    let mut covered = Subset::empty();
    for p in patch {
        u.ground.check(p)?;
        covered = covered | *p;
    }
    let uncovered = *f - covered;
    if !uncovered.is_empty() {
        return Err(Error::Precondition {
            precondition: "coverage",
            detail: format!("{uncovered} lies outside the patch"),
        });
    }
    let mut members: Vec<Subset> = u.members.iter().map(|m| *m - *f).collect();
    members.extend_from_slice(patch);
    Covering::canonical(u.ground, members)
}

/// Point projection for a covering whose complexity equals its size.
///
/// Returns `π` from member indices of `canonical(u)` to points with
/// `St(π(U), v) ⊆ U` and `St(π(U), v)` contained in no other member. Points
/// of each member are scanned in ascending order; the first witness wins.
pub fn point_projection(
    u: &Covering,
    v: &Covering,
    structure: &UniformStructure,
) -> Result<PartialMap> {
    let u = u.canonicalize();
    for (name, c) in [("u", &u), ("v", v)] {
        if !is_admissible(c, structure)? {
            return Err(Error::Precondition {
                precondition: "admissible",
                detail: format!("{name} = {c} is not admissible"),
            });
        }
    }
    let n = complexity(&u, structure)?;
    if n != u.len() {
        return Err(Error::Precondition {
            precondition: "complexity",
            detail: format!("N(u) = {n} but |canonical(u)| = {}", u.len()),
        });
    }
    if !is_star_refinement(&u, v)? {
        return Err(Error::Precondition {
            precondition: "star-refinement",
            detail: format!("{v} does not star-refine {u}"),
        });
    }
    let mut pairs = BTreeMap::new();
    for (i, member) in u.members().iter().enumerate() {
        let witness = member.iter().find(|&x| {
            let star = star_of_point(x, v);
            star.is_subset_of(member)
                && !u
                    .members()
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && star.is_subset_of(other))
        });
        match witness {
            Some(x) => {
                pairs.insert(i, x);
            }
            None => {
                return Err(Error::Assertion(format!(
                    "no projection point in member {member} of {u}"
                )))
            }
        }
    }
    let pi = PartialMap::new(pairs);
    if !pi.is_injective() {
        return Err(Error::Assertion(format!(
            "projection {pi} is not injective"
        )));
    }
    Ok(pi)
}
