//! Bipartite matchings, the Hall/Ore deficiency formula, and matchings
//! induced by coverings.

use std::collections::BTreeMap;

use crate::covering::{refines, star_power, Covering, PartialMap};
use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::perm::Perm;
use crate::subset::Subset;
use crate::uniformity::{complexity, is_admissible, UniformStructure};

/// `(X, Y, R)` with vertices labelled by `usize`. The two sides are
/// separate even when labels coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Vec<usize>,
    right: Vec<usize>,
    // adj[i]: sorted right positions adjacent to left position i.
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Labels are sorted and deduplicated; edges must use existing labels.
    pub fn new(
        left: impl IntoIterator<Item = usize>,
        right: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<BipartiteGraph> {
        let mut left: Vec<usize> = left.into_iter().collect();
        left.sort_unstable();
        left.dedup();
        let mut right: Vec<usize> = right.into_iter().collect();
        right.sort_unstable();
        right.dedup();
        let mut adj = vec![Vec::new(); left.len()];
        for (x, y) in edges {
            let i = left
                .binary_search(&x)
                .map_err(|_| Error::NotFound(format!("left vertex {x}")))?;
            let j = right
                .binary_search(&y)
                .map_err(|_| Error::NotFound(format!("right vertex {y}")))?;
            adj[i].push(j);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(BipartiteGraph { left, right, adj })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        match (self.left.binary_search(&x), self.right.binary_search(&y)) {
            (Ok(i), Ok(j)) => self.adj[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(move |(i, a)| a.iter().map(move |&j| (self.left[i], self.right[j])))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// `N_B(S)` for a set of left labels, as right labels.
    pub fn neighbourhood(&self, s: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = s
            .iter()
            .filter_map(|x| self.left.binary_search(x).ok())
            .flat_map(|i| self.adj[i].iter().map(|&j| self.right[j]))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `φ` is injective and every `(x, φ(x))` is an edge.
    pub fn is_matching(&self, phi: &PartialMap) -> bool {
        phi.is_injective() && phi.iter().all(|(x, y)| self.has_edge(x, y))
    }
}

/// A maximum matching, left labels to right labels.
///
/// Kuhn's augmenting paths, left vertices and neighbours in ascending order.
pub fn max_matching(b: &BipartiteGraph) -> PartialMap {
    let mut owner: Vec<Option<usize>> = vec![None; b.right.len()];
    for i in 0..b.left.len() {
        let mut seen = vec![false; b.right.len()];
        augment(b, i, &mut seen, &mut owner);
    }
    PartialMap::from_pairs(
        owner
            .iter()
            .enumerate()
            .filter_map(|(j, o)| o.map(|i| (b.left[i], b.right[j]))),
    )
}

fn augment(b: &BipartiteGraph, i: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for &j in &b.adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if owner[j].is_none_or(|k| augment(b, k, seen, owner)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

pub fn matching_number(b: &BipartiteGraph) -> usize {
    max_matching(b).len()
}

/// `|X| − max_{S ⊆ X} (|S| − |N_B(S)|)` by enumerating every `S`.
pub fn deficiency_bound(b: &BipartiteGraph, guards: &Guards) -> Result<usize> {
    let n = b.left.len();
    if n > guards.deficiency_left {
        return Err(Error::CapExceeded {
            what: "deficiency left side",
            size: n,
            cap: guards.deficiency_left,
        });
    }
    let nbr: Vec<Subset> = b.adj.iter().map(|a| a.iter().collect()).collect();
    let mut best = 0usize;
    max_deficiency(&nbr, 0, 0, Subset::empty(), &mut best);
    Ok(n - best)
}

fn max_deficiency(nbr: &[Subset], i: usize, size: usize, hood: Subset, best: &mut usize) {
    if i == nbr.len() {
        *best = (*best).max(size.saturating_sub(hood.len()));
        return;
    }
    max_deficiency(nbr, i + 1, size, hood, best);
    max_deficiency(nbr, i + 1, size + 1, hood | nbr[i], best);
}

pub fn has_perfect_matching(b: &BipartiteGraph) -> bool {
    matching_number(b) == b.left.len()
}

/// `B(E, F, 𝒰)`: `(x, y)` is an edge iff some member contains both.
pub fn covering_graph(e: &Subset, f: &Subset, u: &Covering) -> Result<BipartiteGraph> {
    let ground = u.ground();
    ground.check(e)?;
    ground.check(f)?;
    let members = u.members();
    let edges: Vec<(usize, usize)> = e
        .iter()
        .flat_map(|x| {
            let star = members
                .iter()
                .filter(|m| m.contains(x))
                .fold(Subset::empty(), |a, m| a | *m);
            (star & *f).iter().map(move |y| (x, y)).collect::<Vec<_>>()
        })
        .collect();
    BipartiteGraph::new(e.iter(), f.iter(), edges)
}

/// `μ(E, F, 𝒰)`, the matching number of [`covering_graph`].
pub fn mu(e: &Subset, f: &Subset, u: &Covering) -> Result<usize> {
    Ok(matching_number(&covering_graph(e, f, u)?))
}

/// `f^m(x)`, or `None` once the orbit leaves the domain.
pub fn iterate(f: &PartialMap, x: usize, m: usize) -> Option<usize> {
    (0..m).try_fold(x, |y, _| f.get(y))
}

/// One element `g` of a matching transfer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub g: Perm,
    /// Maximum matching in `B(F₀, gF₀, 𝒰)`.
    pub psi0: PartialMap,
    /// Matching in `B(F₁, gF₁, 𝒰)` of the same size.
    pub psi1: PartialMap,
}

/// Moves maximum matchings from `F₀` to `F₁` along the bijection
/// `Φ: F₁ → F₀`, one per `g ∈ E`.
///
/// The hypothesis on `Φ` is checked against the members of `𝒰` and of
/// `g⁻¹(𝒰)` for `g` in `e_maps` exactly as given.
pub fn transfer_matching(
    u: &Covering,
    e_maps: &[Perm],
    f0: &Subset,
    f1: &Subset,
    phi: &PartialMap,
) -> Result<Vec<Transfer>> {
    let ground = u.ground();
    ground.check(f0)?;
    ground.check(f1)?;
    for g in e_maps {
        if g.degree() != ground.size() {
            return Err(Error::InvalidPermutation(format!(
                "{g} does not act on the ground set"
            )));
        }
    }
    let dom: Subset = phi.domain().collect();
    let img: Subset = phi.image().collect();
    if dom != *f1 || img != *f0 || !phi.is_injective() {
        return Err(Error::Precondition {
            precondition: "bijection",
            detail: format!("Φ = {phi} is not a bijection {f1} → {f0}"),
        });
    }
    let mut guard: Vec<Subset> = u.members().to_vec();
    for g in e_maps {
        let inv = g.inverse();
        guard.extend(u.members().iter().map(|m| inv.image_set(m)));
    }
    for (x, fx) in phi.iter() {
        if let Some(m) = guard.iter().find(|m| m.contains(fx) && !m.contains(x)) {
            return Err(Error::Precondition {
                precondition: "membership",
                detail: format!("Φ({x}) = {fx} lies in {m} but {x} does not"),
            });
        }
    }
    let phi_inv = phi.inverse().expect("injective");
    e_maps
        .iter()
        .map(|g| {
            let g_inv = g.inverse();
            let g0 = g.image_set(f0);
            let g1 = g.image_set(f1);
            let psi0 = max_matching(&covering_graph(f0, &g0, u)?);
            let psi1 = PartialMap::from_pairs(f1.iter().filter_map(|x| {
                let y0 = psi0.get(phi.get(x)?)?;
                Some((x, g.apply(phi_inv.get(g_inv.apply(y0))?)))
            }));
            let target = covering_graph(f1, &g1, u)?;
            if !target.is_matching(&psi1) || psi1.len() != psi0.len() {
                return Err(Error::Assertion(format!(
                    "transferred map {psi1} is not a matching of size {} for g = {g}",
                    psi0.len()
                )));
            }
            Ok(Transfer {
                g: g.clone(),
                psi0,
                psi1,
            })
        })
        .collect()
}

/// Result of [`compatible_matching`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleMatching {
    /// Maximum matching in `B(E, F, 𝒰)`.
    pub phi0: PartialMap,
    /// Matching in `B(E∖F, F∖E, 𝒰^{*,n−1})`.
    pub phi1: PartialMap,
    /// `μ(E, F, 𝒰) = |dom φ₀|`.
    pub mu: usize,
    pub overlap: usize,
    pub n: usize,
}

impl CompatibleMatching {
    /// `|dom φ₁| ≥ μ − (1 + 1/n)|E ∩ F|`, in integers.
    pub fn bound_holds(&self) -> bool {
        let n = self.n as i64;
        n * self.phi1.len() as i64 >= n * self.mu as i64 - (n + 1) * self.overlap as i64
    }
}

/// Follows `φ₀`-chains out of `E ∖ F` to points of `F ∖ E` reached within
/// `n` steps. Injectivity, the star-power edges and the cardinality bound
/// are all asserted.
pub fn compatible_matching(
    u: &Covering,
    e: &Subset,
    f: &Subset,
    n: usize,
) -> Result<CompatibleMatching> {
    if n == 0 {
        return Err(Error::Precondition {
            precondition: "n >= 1",
            detail: "n = 0".into(),
        });
    }
    let phi0 = max_matching(&covering_graph(e, f, u)?);
    let mut assignment = BTreeMap::new();
    for x in phi0.domain() {
        if f.contains(x) {
            continue;
        }
        let nu = (1..=n + 1)
            .take_while(|&m| iterate(&phi0, x, m).is_some())
            .last()
            .expect("x is in the domain");
        if nu > n {
            continue;
        }
        let y = iterate(&phi0, x, nu).expect("defined up to nu");
        if !e.contains(y) {
            assignment.insert(x, y);
        }
    }
    let phi1 = PartialMap::new(assignment);
    let out = CompatibleMatching {
        mu: phi0.len(),
        overlap: e.intersection_len(f),
        phi0,
        phi1,
        n,
    };
    if !out.phi1.is_injective() {
        return Err(Error::Assertion(format!(
            "φ₁ = {} is not injective",
            out.phi1
        )));
    }
    let target = covering_graph(&(*e - *f), &(*f - *e), &star_power(u, n - 1))?;
    if !target.is_matching(&out.phi1) {
        return Err(Error::Assertion(format!(
            "φ₁ = {} leaves B(E∖F, F∖E, 𝒰^(*,{}))",
            out.phi1,
            n - 1
        )));
    }
    if !out.bound_holds() {
        return Err(Error::Assertion(format!(
            "|dom φ₁| = {} below μ − (1+1/{n})·{}",
            out.phi1.len(),
            out.overlap
        )));
    }
    Ok(out)
}

/// A perfect matching between members, `V ↦ φ(V)` with `V ∩ φ(V) ≠ ∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementInjection {
    /// Members of `canonical(v)`.
    pub from: Vec<Subset>,
    /// Members of `canonical(w)`.
    pub to: Vec<Subset>,
    /// Index map `from → to`.
    pub map: PartialMap,
}

impl RefinementInjection {
    pub fn pairs(&self) -> impl Iterator<Item = (Subset, Subset)> + '_ {
        self.map.iter().map(|(i, j)| (self.from[i], self.to[j]))
    }
}

/// Injects the members of `v` into those of `w` along intersections, given
/// `𝒰 ⪯ 𝒱`, `𝒰 ⪯ 𝒲` and `N(𝒰) = |canonical(𝒱)|`.
pub fn refinement_injection(
    u: &Covering,
    v: &Covering,
    w: &Covering,
    s: &UniformStructure,
) -> Result<RefinementInjection> {
    for (name, c) in [("u", u), ("v", v), ("w", w)] {
        if !is_admissible(c, s)? {
            return Err(Error::Precondition {
                precondition: "admissible",
                detail: format!("{name} = {c} is not admissible"),
            });
        }
    }
    if !refines(u, v)? || !refines(u, w)? {
        return Err(Error::Precondition {
            precondition: "refinement",
            detail: "u must be refined by both v and w".into(),
        });
    }
    let from = v.canonicalize().members().to_vec();
    let to = w.canonicalize().members().to_vec();
    let n_u = complexity(u, s)?;
    if n_u != from.len() {
        return Err(Error::Precondition {
            precondition: "complexity",
            detail: format!("N(u) = {n_u} but |canonical(v)| = {}", from.len()),
        });
    }
    let edges: Vec<(usize, usize)> = (0..from.len())
        .flat_map(|i| {
            let to = &to;
            let a = from[i];
            (0..to.len())
                .filter(move |&j| a.intersects(&to[j]))
                .map(move |j| (i, j))
        })
        .collect();
    let graph = BipartiteGraph::new(0..from.len(), 0..to.len(), edges)?;
    let map = max_matching(&graph);
    if map.len() != from.len() {
        return Err(Error::Assertion(format!(
            "member graph has no perfect matching ({} of {})",
            map.len(),
            from.len()
        )));
    }
    Ok(RefinementInjection { from, to, map })
}
