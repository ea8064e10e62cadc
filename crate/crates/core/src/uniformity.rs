//! Finite uniformities given by a chain of base coverings.
//!
//! A covering is admissible (a uniform covering) when the finest base refines
//! it. Uniform complexity `N(u)` is the least size of an admissible covering
//! refining `u`. Any such covering can be coarsened member-wise to members of
//! `u`, so `N(u)` is the least number of members of `u` that together contain
//! every member of the finest base: a set cover over the finest base. When
//! the finest base is a partition this is the zero-class quotient, where each
//! member `U` is replaced by the union of the blocks inside it.

use crate::covering::{
    is_star_refinement, refines, refines_members, star_of_point, Covering, GroundSet,
};
use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::setcover::min_cover;
use crate::subset::{Subset, MAX_GROUND};

/// Ground set plus a chain `B_0 ⪯* B_1 ⪯* ... ⪯* B_k` of canonical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformStructure {
    ground: GroundSet,
    bases: Vec<Covering>,
}

impl UniformStructure {
    /// Validates the `chain` and `star-chain` invariants.
    pub fn new(bases: Vec<Covering>) -> Result<UniformStructure> {
        let first = bases.first().ok_or(Error::EmptyList)?;
        let ground = first.ground();
        let bases: Vec<Covering> = bases.iter().map(Covering::canonicalize).collect();
        for (i, pair) in bases.windows(2).enumerate() {
            ground.same_as(&pair[1].ground())?;
            if !refines(&pair[0], &pair[1])? {
                return Err(Error::Invariant {
                    invariant: "chain",
                    detail: format!("base {} does not refine base {}", i + 1, i),
                });
            }
            if !is_star_refinement(&pair[0], &pair[1])? {
                return Err(Error::Invariant {
                    invariant: "star-chain",
                    detail: format!("base {} does not star-refine base {}", i + 1, i),
                });
            }
        }
        Ok(UniformStructure { ground, bases })
    }

    /// The discrete uniformity: a single base of singletons.
    pub fn discrete(ground: GroundSet) -> UniformStructure {
        UniformStructure {
            ground,
            bases: vec![Covering::singletons(ground)],
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn bases(&self) -> &[Covering] {
        &self.bases
    }

    pub fn finest(&self) -> &Covering {
        self.bases.last().expect("non-empty chain")
    }
}

/// Pairwise disjoint non-empty blocks covering the ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Subset>,
}

impl Partition {
    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, x: usize) -> Option<&Subset> {
        self.blocks.iter().find(|b| b.contains(x))
    }
}

/// `w` is admissible iff the finest base refines it.
pub fn is_admissible(w: &Covering, s: &UniformStructure) -> Result<bool> {
    refines(w, s.finest())
}

/// Blocks `P(x) = ⋂_i St(x, B_i)`.
///
/// On a chain whose finest base is not a partition (a truncated metric
/// grid, say) the sets `P(x)` can overlap; that is reported as
/// [`Error::ZeroClassesOverlap`].
pub fn zero_partition(s: &UniformStructure) -> Result<Partition> {
    let n = s.ground.size();
    let classes: Vec<Subset> = (0..n)
        .map(|x| {
            s.bases
                .iter()
                .fold(s.ground.full(), |acc, b| acc & star_of_point(x, b))
        })
        .collect();
    let mut blocks: Vec<Subset> = Vec::new();
    for (x, c) in classes.iter().enumerate() {
        if !c.contains(x) {
            return Err(Error::Assertion(format!("P({x}) misses {x}")));
        }
        if let Some(b) = blocks.iter().find(|b| b.intersects(c)) {
            if b != c {
                return Err(Error::ZeroClassesOverlap { point: x });
            }
        } else {
            blocks.push(*c);
        }
    }
    blocks.sort();
    Ok(Partition { blocks })
}

/// The members of `canonical(u)` forming a minimum admissible subfamily.
pub fn complexity_witness(u: &Covering, s: &UniformStructure) -> Result<Vec<Subset>> {
    s.ground.same_as(&u.ground())?;
    let u = u.canonicalize();
    let finest = s.finest().members();
    if finest.len() > MAX_GROUND {
        return Err(Error::CapExceeded {
            what: "finest base members",
            size: finest.len(),
            cap: MAX_GROUND,
        });
    }
    let sets: Vec<Subset> = u
        .members()
        .iter()
        .map(|m| {
            finest
                .iter()
                .enumerate()
                .filter(|(_, b)| b.is_subset_of(m))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    match min_cover(finest.len(), &sets) {
        Some(picked) => Ok(picked.into_iter().map(|i| u.members()[i]).collect()),
        None => Err(Error::Inadmissible {
            covering: u.to_string(),
        }),
    }
}

/// Uniform complexity `N(u)`; `u` must be admissible.
pub fn complexity(u: &Covering, s: &UniformStructure) -> Result<usize> {
    complexity_witness(u, s).map(|w| w.len())
}

/// `N(u)` by exhaustive search over subfamilies of `canonical(u)` in order
/// of increasing size, testing admissibility directly.
pub fn complexity_bruteforce(u: &Covering, s: &UniformStructure, guards: &Guards) -> Result<usize> {
    s.ground.same_as(&u.ground())?;
    let n = s.ground.size();
    if n > guards.bruteforce_ground {
        return Err(Error::CapExceeded {
            what: "brute-force ground",
            size: n,
            cap: guards.bruteforce_ground,
        });
    }
    let u = u.canonicalize();
    if !is_admissible(&u, s)? {
        return Err(Error::Inadmissible {
            covering: u.to_string(),
        });
    }
    let members = u.members();
    let finest = s.finest().members();
    for k in 1..=members.len() {
        let mut pick = Vec::with_capacity(k);
        if any_combination(members, k, 0, &mut pick, &mut |fam| {
            refines_members(fam, finest)
        }) {
            return Ok(k);
        }
    }
    Err(Error::Assertion(format!("no admissible subfamily of {u}")))
}

fn any_combination(
    items: &[Subset],
    k: usize,
    start: usize,
    pick: &mut Vec<Subset>,
    test: &mut dyn FnMut(&[Subset]) -> bool,
) -> bool {
    if pick.len() == k {
        return test(pick);
    }
    let need = k - pick.len();
    for i in start..=items.len().saturating_sub(need) {
        pick.push(items[i]);
        if any_combination(items, k, i + 1, pick, test) {
            return true;
        }
        pick.pop();
    }
    false
}
