//! Seeded random instances for property suites.
//!
//! Every generator draws from the caller's RNG only, so a fixed seed fixes
//! the instance.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::covering::{join, meet, Covering, GroundSet};
use crate::dynamics::{image_cover, DynamicalInstance};
use crate::error::Result;
use crate::guards::Guards;
use crate::matching::BipartiteGraph;
use crate::perm::{generate_group, Perm};
use crate::subset::Subset;
use crate::uniformity::{complexity_witness, UniformStructure};

pub fn subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Subset {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

pub fn nonempty_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Subset {
    let mut s = subset(rng, n, p);
    if s.is_empty() {
        s.insert(rng.gen_range(0..n));
    }
    s
}

/// Up to `max_members` random members, then singletons for uncovered points.
pub fn covering<R: Rng>(rng: &mut R, n: usize, max_members: usize) -> Covering {
    let ground = GroundSet::new(n).expect("n >= 1");
    let k = rng.gen_range(1..=max_members.max(1));
    let p = rng.gen_range(0.2..0.7);
    let mut members: Vec<Subset> = (0..k).map(|_| nonempty_subset(rng, n, p)).collect();
    let covered = members.iter().fold(Subset::empty(), |a, m| a | *m);
    members.extend((ground.full() - covered).iter().map(Subset::singleton));
    Covering::new(ground, members).expect("covers")
}

pub fn partition<R: Rng>(rng: &mut R, n: usize, max_blocks: usize) -> Covering {
    let ground = GroundSet::new(n).expect("n >= 1");
    let k = rng.gen_range(1..=max_blocks.clamp(1, n));
    let mut blocks = vec![Subset::empty(); k];
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    for (i, &x) in points.iter().enumerate() {
        let b = if i < k { i } else { rng.gen_range(0..k) };
        blocks[b].insert(x);
    }
    Covering::new(ground, blocks).expect("partition")
}

/// A covering refined by `finest`: random unions of its members.
pub fn admissible_covering<R: Rng>(rng: &mut R, finest: &Covering, max_members: usize) -> Covering {
    let base = finest.members();
    let k = rng.gen_range(1..=max_members.max(1));
    let p = rng.gen_range(0.2..0.6);
    let mut members: Vec<Subset> = (0..k)
        .map(|_| {
            let mut m = base
                .iter()
                .filter(|_| rng.gen_bool(p))
                .fold(Subset::empty(), |a, b| a | *b);
            m = m | base[rng.gen_range(0..base.len())];
            m
        })
        .collect();
    for b in base {
        if !members.iter().any(|m| b.is_subset_of(m)) {
            members.push(*b);
        }
    }
    Covering::new(finest.ground(), members).expect("covers")
}

/// A two- or three-level chain under the whole space. The finest base is a
/// partition, a random covering, or the star-chain meet of both.
pub fn structure<R: Rng>(rng: &mut R, n: usize) -> UniformStructure {
    let ground = GroundSet::new(n).expect("n >= 1");
    let whole = Covering::whole(ground);
    loop {
        let finest = match rng.gen_range(0..3) {
            0 => partition(rng, n, n),
            1 => covering(rng, n, n),
            _ => {
                let p = partition(rng, n, n);
                let c = covering(rng, n, 3);
                match join(&[p.clone(), c]) {
                    Ok(j) => {
                        if let Ok(s) = UniformStructure::new(vec![whole.clone(), p, j]) {
                            return s;
                        }
                        continue;
                    }
                    Err(_) => continue,
                }
            }
        };
        return UniformStructure::new(vec![whole.clone(), finest]).expect("two-level chain");
    }
}

/// Bipartite graph on `0..left` × `0..right` with edge probability `p`.
pub fn bipartite_graph<R: Rng>(rng: &mut R, left: usize, right: usize, p: f64) -> BipartiteGraph {
    let edges: Vec<(usize, usize)> = (0..left)
        .flat_map(|x| (0..right).map(move |y| (x, y)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    BipartiteGraph::new(0..left, 0..right, edges).expect("labels in range")
}

pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm::new(v).expect("shuffle is a bijection")
}

/// A dynamical instance whose structure is invariant under the generated
/// group by construction: the finest base is the join or the meet of the
/// orbit of a random covering or partition.
pub fn dynamical_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    max_gens: usize,
    guards: &Guards,
) -> Result<DynamicalInstance> {
    let ground = GroundSet::new(n)?;
    let gens: Vec<Perm> = (0..rng.gen_range(0..=max_gens))
        .map(|_| permutation(rng, n))
        .collect();
    let group = generate_group(n, &gens, guards.group_cap)?;
    let seed = if rng.gen_bool(0.5) {
        partition(rng, n, n)
    } else {
        covering(rng, n, 3)
    };
    let orbit = group
        .iter()
        .map(|g| image_cover(g, &seed))
        .collect::<Result<Vec<_>>>()?;
    let finest = if rng.gen_bool(0.7) {
        join(&orbit)?
    } else {
        meet(&orbit)?
    };
    let bases = if rng.gen_bool(0.2) {
        vec![Covering::singletons(ground)]
    } else {
        vec![Covering::whole(ground), finest]
    };
    DynamicalInstance::new(UniformStructure::new(bases)?, gens, guards)
}

/// An injective partial map on `0..n` defined on a random domain.
pub fn partial_injection<R: Rng>(rng: &mut R, n: usize, p: f64) -> crate::covering::PartialMap {
    let mut targets: Vec<usize> = (0..n).collect();
    targets.shuffle(rng);
    crate::covering::PartialMap::from_pairs((0..n).zip(targets).filter(|_| rng.gen_bool(p)))
}

/// `(s, u, v, w)` with `u ⪯ v`, `u ⪯ w` all admissible and
/// `N(u) = |canonical(v)|`.
pub fn refinement_injection_case<R: Rng>(
    rng: &mut R,
    n: usize,
) -> Result<(UniformStructure, Covering, Covering, Covering)> {
    let s = structure(rng, n);
    let u = admissible_covering(rng, s.finest(), n);
    let v = Covering::new(s.ground(), complexity_witness(&u, &s)?)?;
    let extra = admissible_covering(rng, s.finest(), n);
    let w = join(&[u.clone(), extra])?;
    Ok((s, u, v, w))
}
