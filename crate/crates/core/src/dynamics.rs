//! Finite dynamical systems `(X, G)`: the matching invariant `μ(X,G)`, the
//! asymptotic complexity `ω(X,G)`, and the witness coverings built in the
//! proofs relating them.
//!
//! Both invariants are computed exactly by enumeration on small instances.
//! The quantifier over `E ∈ 𝓕(G)` is attained at `E = G` (the inner
//! quantity of `μ` is antitone in `E`, that of `ω` monotone), and for `μ`
//! the infimum over coverings is attained at the finest base, because
//! `μ(F, gF, 𝒰)` only loses edges as `𝒰` is refined. The literal nested
//! definitions live in [`crate::oracle`] and are checked against these.

use num_traits::One;

use crate::covering::{join, refines, star_of_point, star_power, Covering};
use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::matching::mu;
use crate::perm::{generate_group, Perm};
use crate::rational::Rational;
use crate::subset::Subset;
use crate::uniformity::{complexity, is_admissible, UniformStructure};

/// `{g(U) : U ∈ 𝒰}`, canonicalized.
pub fn image_cover(g: &Perm, u: &Covering) -> Result<Covering> {
    let ground = u.ground();
    if g.degree() != ground.size() {
        return Err(Error::GroundMismatch {
            left: g.degree(),
            right: ground.size(),
        });
    }
    Covering::canonical(ground, u.members().iter().map(|m| g.image_set(m)).collect())
}

/// A uniform structure with a group of automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicalInstance {
    structure: UniformStructure,
    generators: Vec<Perm>,
    group: Vec<Perm>,
    group_cap: usize,
}

impl DynamicalInstance {
    /// Checks the `automorphism` invariant (every `g(B_i)` and `g⁻¹(B_i)`
    /// admissible) and closes the generators into a group.
    pub fn new(
        structure: UniformStructure,
        generators: Vec<Perm>,
        guards: &Guards,
    ) -> Result<Self> {
        let n = structure.ground().size();
        for (k, g) in generators.iter().enumerate() {
            if g.degree() != n {
                return Err(Error::InvalidPermutation(format!(
                    "generator {k} has degree {} on a ground set of size {n}",
                    g.degree()
                )));
            }
            for h in [g.clone(), g.inverse()] {
                for (i, b) in structure.bases().iter().enumerate() {
                    if !is_admissible(&image_cover(&h, b)?, &structure)? {
                        return Err(Error::Invariant {
                            invariant: "automorphism",
                            detail: format!("image of base {i} under {h} is not admissible"),
                        });
                    }
                }
            }
        }
        let group = generate_group(n, &generators, guards.group_cap)?;
        Ok(DynamicalInstance {
            structure,
            generators,
            group,
            group_cap: guards.group_cap,
        })
    }

    pub fn structure(&self) -> &UniformStructure {
        &self.structure
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Sorted, identity first.
    pub fn group(&self) -> &[Perm] {
        &self.group
    }

    pub fn group_cap(&self) -> usize {
        self.group_cap
    }

    pub fn ground_size(&self) -> usize {
        self.structure.ground().size()
    }

    /// `g(𝒰)`, asserting that group elements keep admissible coverings
    /// admissible.
    pub fn image(&self, g: &Perm, u: &Covering) -> Result<Covering> {
        let out = image_cover(g, u)?;
        if is_admissible(u, &self.structure)? && !is_admissible(&out, &self.structure)? {
            return Err(Error::Assertion(format!(
                "{g} maps admissible {u} to {out}"
            )));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuReport {
    pub value: Rational,
    pub witness_f: Subset,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaReport {
    pub lower: Rational,
    pub upper: Rational,
    /// The `𝒰` attaining the outer supremum.
    pub witness_u: Covering,
    /// The `𝒱 ⪰ 𝒰` attaining its inner infimum.
    pub witness_v: Covering,
    pub exact: bool,
    /// Number of canonical admissible coverings enumerated.
    pub enumerated: usize,
}

impl OmegaReport {
    pub fn value(&self) -> Option<Rational> {
        (self.lower == self.upper).then_some(self.upper)
    }
}

fn check_mu_guards(d: &DynamicalInstance, guards: &Guards) -> Result<()> {
    let n = d.ground_size();
    if n > guards.mu_ground {
        return Err(Error::CapExceeded {
            what: "exact mu ground",
            size: n,
            cap: guards.mu_ground,
        });
    }
    if d.group.len() > guards.mu_group {
        return Err(Error::CapExceeded {
            what: "exact mu group",
            size: d.group.len(),
            cap: guards.mu_group,
        });
    }
    Ok(())
}

/// `min_{g ∈ e} μ(f, gf, B_finest) / |f|`: one witness term of `μ(X,G)`.
pub fn mu_lower_bound(d: &DynamicalInstance, f: &Subset, e: &[Perm]) -> Result<Rational> {
    if f.is_empty() {
        return Err(Error::Precondition {
            precondition: "non-empty F",
            detail: "F = {}".into(),
        });
    }
    if e.is_empty() {
        return Err(Error::Precondition {
            precondition: "non-empty E",
            detail: "E = {}".into(),
        });
    }
    d.structure.ground().check(f)?;
    let finest = d.structure.finest();
    let mut best = usize::MAX;
    for g in e {
        best = best.min(mu(f, &g.image_set(f), finest)?);
    }
    Ok(Rational::new(best as i64, f.len() as i64))
}

/// `μ(X,G) = max_F min_{g ∈ G} μ(F, gF, B_finest)/|F|`. The witness is the
/// first maximiser in descending bitmask order, so the whole ground set
/// wins ties.
pub fn exact_mu(d: &DynamicalInstance, guards: &Guards) -> Result<MuReport> {
    check_mu_guards(d, guards)?;
    let n = d.ground_size();
    let mut best: Option<(Rational, Subset)> = None;
    for mask in (1u64..1 << n).rev() {
        let f = Subset::from_mask(mask);
        let v = mu_lower_bound(d, &f, &d.group)?;
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, f));
        }
    }
    let (value, witness_f) = best.expect("non-empty ground");
    Ok(MuReport {
        value,
        witness_f,
        exact: true,
    })
}

/// All canonical admissible coverings of a ground set of at most
/// `guards.omega_ground` points, in canonical order.
pub fn admissible_coverings(s: &UniformStructure, guards: &Guards) -> Result<Vec<Covering>> {
    let n = s.ground().size();
    if n > guards.omega_ground {
        return Err(Error::CapExceeded {
            what: "omega ground",
            size: n,
            cap: guards.omega_ground,
        });
    }
    let subsets: Vec<Subset> = (1u64..1 << n).map(Subset::from_mask).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    antichains(&subsets, 0, &mut chosen, &mut |family| {
        if family.is_empty() {
            return Ok(());
        }
        let union = family.iter().fold(Subset::empty(), |a, m| a | *m);
        if union != s.ground().full() {
            return Ok(());
        }
        let c = Covering::canonical(s.ground(), family.to_vec())?;
        if is_admissible(&c, s)? {
            out.push(c);
        }
        Ok(())
    })?;
    out.sort_by(|a, b| a.members().cmp(b.members()));
    Ok(out)
}

fn antichains(
    subsets: &[Subset],
    start: usize,
    chosen: &mut Vec<Subset>,
    visit: &mut dyn FnMut(&[Subset]) -> Result<()>,
) -> Result<()> {
    visit(chosen)?;
    for i in start..subsets.len() {
        let s = subsets[i];
        if chosen
            .iter()
            .all(|c| !c.is_subset_of(&s) && !s.is_subset_of(c))
        {
            chosen.push(s);
            antichains(subsets, i + 1, chosen, visit)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// `max_{g ∈ e} N(𝒱 ∨ g𝒱) / N(𝒱)`.
pub fn omega_ratio(v: &Covering, e: &[Perm], s: &UniformStructure) -> Result<Rational> {
    let n_v = complexity(v, s)? as i64;
    let mut best = Rational::from_integer(0);
    for g in e {
        let j = join(&[v.clone(), image_cover(g, v)?])?;
        best = best.max(Rational::new(complexity(&j, s)? as i64, n_v));
    }
    Ok(best)
}

/// Exact `ω(X,G)` over canonical admissible coverings.
pub fn exact_omega(d: &DynamicalInstance, guards: &Guards) -> Result<OmegaReport> {
    let s = &d.structure;
    let all = admissible_coverings(s, guards)?;
    let mut ratios: Vec<(Rational, usize)> = Vec::with_capacity(all.len());
    for (i, v) in all.iter().enumerate() {
        ratios.push((omega_ratio(v, &d.group, s)?, i));
    }
    ratios.sort();
    let mut best: Option<(Rational, usize, usize)> = None;
    for (ui, u) in all.iter().enumerate() {
        let mut inner = None;
        for &(r, vi) in &ratios {
            if refines(u, &all[vi])? {
                inner = Some((r, vi));
                break;
            }
        }
        let (r, vi) = inner.ok_or_else(|| Error::Assertion(format!("nothing refines {u}")))?;
        if best.is_none_or(|(b, _, _)| r > b) {
            best = Some((r, ui, vi));
        }
    }
    let (value, ui, vi) = best.ok_or_else(|| Error::Assertion("no admissible coverings".into()))?;
    Ok(OmegaReport {
        lower: value,
        upper: value,
        witness_u: all[ui].clone(),
        witness_v: all[vi].clone(),
        exact: true,
        enumerated: all.len(),
    })
}

/// Best candidate for the inner infimum of `ω` at `(e, u)`.
pub fn omega_upper_search(
    d: &DynamicalInstance,
    e: &[Perm],
    u: &Covering,
    candidates: &[Covering],
) -> Result<(Rational, Covering)> {
    let s = &d.structure;
    let mut best: Option<(Rational, &Covering)> = None;
    for v in candidates {
        if !is_admissible(v, s)? {
            return Err(Error::Inadmissible {
                covering: v.to_string(),
            });
        }
        if !refines(u, v)? {
            return Err(Error::Precondition {
                precondition: "refines u",
                detail: format!("{v} does not refine {u}"),
            });
        }
        let r = omega_ratio(v, e, s)?;
        if best.is_none_or(|(b, _)| r < b) {
            best = Some((r, v));
        }
    }
    best.map(|(r, v)| (r, v.canonicalize()))
        .ok_or(Error::EmptyList)
}

/// `{U∖F : U ∈ 𝒰₁} ∪ {St(x, 𝒰₁^{*,depth−1}) ∖ (F∖{x}) : x ∈ F}`.
///
/// The points of `F` must lie in distinct members of the finest base, or
/// the result is not admissible.
pub fn excised_candidate(
    d: &DynamicalInstance,
    u1: &Covering,
    f: &Subset,
    star_depth: usize,
) -> Result<Covering> {
    let s = &d.structure;
    if !(1..=2).contains(&star_depth) {
        return Err(Error::Precondition {
            precondition: "star depth 1 or 2",
            detail: format!("depth {star_depth}"),
        });
    }
    if f.is_empty() {
        return Err(Error::Precondition {
            precondition: "non-empty F",
            detail: "F = {}".into(),
        });
    }
    s.ground().check(f)?;
    if !is_admissible(u1, s)? {
        return Err(Error::Inadmissible {
            covering: u1.to_string(),
        });
    }
    let around = star_power(u1, star_depth - 1);
    let mut members: Vec<Subset> = u1.members().iter().map(|m| *m - *f).collect();
    for x in f.iter() {
        members.push(star_of_point(x, &around) - (*f - Subset::singleton(x)));
    }
    let v = Covering::canonical(s.ground(), members)?;
    if !is_admissible(&v, s)? {
        return Err(Error::Inadmissible {
            covering: v.to_string(),
        });
    }
    let n_v = complexity(&v, s)?;
    if n_v < f.len() {
        return Err(Error::Assertion(format!(
            "N({v}) = {n_v} < |F| = {}",
            f.len()
        )));
    }
    Ok(v)
}

/// `N(⋁_{g ∈ e} g𝒱) / N(𝒱)`.
pub fn free_product_ratio(d: &DynamicalInstance, e: &[Perm], v: &Covering) -> Result<Rational> {
    let s = &d.structure;
    if e.is_empty() {
        return Err(Error::EmptyList);
    }
    if !is_admissible(v, s)? {
        return Err(Error::Inadmissible {
            covering: v.to_string(),
        });
    }
    let images = e
        .iter()
        .map(|g| d.image(g, v))
        .collect::<Result<Vec<_>>>()?;
    let j = join(&images)?;
    let r = Rational::new(complexity(&j, s)? as i64, complexity(v, s)? as i64);
    if r < Rational::one() {
        return Err(Error::Assertion(format!("free product ratio {r} < 1")));
    }
    Ok(r)
}

/// Every non-identity element of `e` is fixed-point free.
pub fn is_topologically_free(e: &[Perm]) -> bool {
    e.iter().all(|g| g.is_identity() || !g.has_fixed_point())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityReport {
    pub mu: MuReport,
    pub omega: OmegaReport,
    /// `1 ≤ ω ≤ 2`.
    pub omega_in_range: bool,
    /// `ω ≥ 2 − μ`.
    pub lower_bound_holds: bool,
    /// Finest base is a partition fixed by every generator.
    pub invariant_partition: bool,
    /// `invariant_partition ⇒ ω = 1`.
    pub partition_case_holds: bool,
    pub verdict: String,
}

impl InequalityReport {
    pub fn holds(&self) -> bool {
        self.omega_in_range && self.lower_bound_holds && self.partition_case_holds
    }
}

/// Exact `μ`, `ω` and the inequalities between them.
pub fn check_inequalities(d: &DynamicalInstance, guards: &Guards) -> Result<InequalityReport> {
    let mu = exact_mu(d, guards)?;
    let omega = exact_omega(d, guards)?;
    let one = Rational::one();
    let two = Rational::from_integer(2);
    let w = omega.upper;
    let finest = d.structure.finest();
    let mut invariant_partition = finest.is_partition();
    for g in &d.generators {
        invariant_partition &= image_cover(g, finest)? == *finest;
    }
    let verdict = if w == one {
        "amenability indicator: omega = 1; omega = 2 - mu is only claimed on perfect spaces, not asserted here"
    } else {
        "omega > 1: no amenability indicator"
    };
    Ok(InequalityReport {
        omega_in_range: one <= omega.lower && w <= two,
        lower_bound_holds: omega.lower >= two - mu.value,
        invariant_partition,
        partition_case_holds: !invariant_partition || w == one,
        verdict: verdict.to_string(),
        mu,
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::GroundSet;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn cov(n: usize, lists: &[&[usize]]) -> Covering {
        let lists: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        Covering::from_lists(g(n), &lists).unwrap()
    }

    fn set(xs: &[usize]) -> Subset {
        xs.iter().collect()
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn instance(n: usize, bases: &[&[&[usize]]], gens: &[&[&[usize]]]) -> DynamicalInstance {
        let s = UniformStructure::new(bases.iter().map(|b| cov(n, b)).collect()).unwrap();
        let gens = gens
            .iter()
            .map(|c| Perm::from_cycles(n, c).unwrap())
            .collect();
        DynamicalInstance::new(s, gens, &Guards::default()).unwrap()
    }

    #[test]
    fn image_cover_examples() {
        let u = cov(3, &[&[0], &[1, 2]]);
        let id = Perm::identity(3);
        assert_eq!(image_cover(&id, &u).unwrap(), u.canonicalize());
        let swap = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let img = image_cover(&swap, &u).unwrap();
        assert_eq!(img.to_string(), "{{0,2},{1}}");
        let back = image_cover(&swap.inverse(), &img).unwrap();
        assert!(refines(&back, &u).unwrap() && refines(&u, &back).unwrap());
    }

    #[test]
    fn automorphism_invariant() {
        let s = UniformStructure::new(vec![cov(3, &[&[0, 1], &[2]])]).unwrap();
        let bad = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        let err = DynamicalInstance::new(s, vec![bad], &Guards::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::Invariant {
                invariant: "automorphism",
                ..
            }
        ));
    }

    #[test]
    fn exact_mu_examples() {
        let d = instance(2, &[&[&[0], &[1]]], &[&[&[0, 1]]]);
        let m = exact_mu(&d, &Guards::default()).unwrap();
        assert_eq!(m.value, r(1, 1));
        assert_eq!(m.witness_f, set(&[0, 1]));

        let d = instance(3, &[&[&[0], &[1], &[2]]], &[]);
        assert_eq!(exact_mu(&d, &Guards::default()).unwrap().value, r(1, 1));

        let d = instance(3, &[&[&[0, 1], &[2]]], &[&[&[0, 1]]]);
        let m = exact_mu(&d, &Guards::default()).unwrap();
        assert_eq!((m.value, m.witness_f), (r(1, 1), set(&[0, 1, 2])));
    }

    #[test]
    fn mu_lower_bound_examples() {
        let d = instance(2, &[&[&[0], &[1]]], &[&[&[0, 1]]]);
        let id = Perm::identity(2);
        let swap = d.group()[1].clone();
        assert_eq!(mu_lower_bound(&d, &set(&[0]), &[id]).unwrap(), r(1, 1));
        assert_eq!(mu_lower_bound(&d, &set(&[0]), &[swap]).unwrap(), r(0, 1));
        assert!(mu_lower_bound(&d, &Subset::empty(), d.group()).is_err());
    }

    #[test]
    fn exact_omega_examples() {
        let guards = Guards::default();
        let d = instance(3, &[&[&[0], &[1], &[2]]], &[]);
        assert_eq!(exact_omega(&d, &guards).unwrap().value(), Some(r(1, 1)));
        let d = instance(4, &[&[&[0, 1], &[2, 3]]], &[&[&[0, 2], &[1, 3]]]);
        assert_eq!(exact_omega(&d, &guards).unwrap().value(), Some(r(1, 1)));
        let d = instance(3, &[&[&[0, 1, 2]], &[&[0, 1], &[1, 2]]], &[&[&[0, 2]]]);
        let o = exact_omega(&d, &guards).unwrap();
        assert_eq!(o.value(), Some(r(1, 1)));
        assert!(refines(&o.witness_u, &o.witness_v).unwrap());
    }

    #[test]
    fn omega_guard() {
        let d = instance(6, &[&[&[0], &[1], &[2], &[3], &[4], &[5]]], &[]);
        assert!(matches!(
            exact_omega(&d, &Guards::default()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn admissible_coverings_are_canonical_antichains() {
        let s = UniformStructure::discrete(g(3));
        let all = admissible_coverings(&s, &Guards::default()).unwrap();
        // Antichain coverings of a 3-set.
        assert_eq!(all.len(), 9);
        assert!(all.iter().all(Covering::is_canonical));
    }

    #[test]
    fn excised_candidate_examples() {
        let d = instance(4, &[&[&[0], &[1], &[2], &[3]]], &[]);
        let u1 = cov(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        let v = excised_candidate(&d, &u1, &set(&[0, 3]), 1).unwrap();
        assert_eq!(v.to_string(), "{{0,1},{1,2},{2,3}}");
        assert!(complexity(&v, d.structure()).unwrap() >= 2);
        let v2 = excised_candidate(&d, &u1, &set(&[0, 3]), 2).unwrap();
        assert_eq!(v2.to_string(), "{{0,1,2},{1,2,3}}");

        let p = instance(4, &[&[&[0, 1], &[2, 3]]], &[]);
        let u = p.structure().finest().clone();
        let v = excised_candidate(&p, &u, &set(&[0]), 1).unwrap();
        assert!(complexity(&v, p.structure()).unwrap() >= 1);
        assert!(matches!(
            excised_candidate(&p, &u, &set(&[0, 1]), 1),
            Err(Error::Inadmissible { .. })
        ));
    }

    #[test]
    fn free_product_examples() {
        let d = instance(3, &[&[&[0, 1, 2]], &[&[0, 1], &[1, 2]]], &[&[&[0, 2]]]);
        let id = Perm::identity(3);
        let v = d.structure().finest().clone();
        assert_eq!(free_product_ratio(&d, &[id], &v).unwrap(), r(1, 1));
        assert_eq!(free_product_ratio(&d, d.group(), &v).unwrap(), r(1, 1));
    }

    #[test]
    fn omega_upper_search_examples() {
        let d = instance(4, &[&[&[0, 1], &[2, 3]]], &[&[&[0, 2], &[1, 3]]]);
        let u = Covering::whole(g(4));
        let part = d.structure().finest().clone();
        let (best, v) = omega_upper_search(&d, d.group(), &u, &[u.clone(), part.clone()]).unwrap();
        assert_eq!(best, r(1, 1));
        assert_eq!(v, u);
        for inad in [Covering::singletons(g(4)), cov(4, &[&[0, 2], &[1, 3]])] {
            assert!(matches!(
                omega_upper_search(&d, d.group(), &u, &[inad]),
                Err(Error::Inadmissible { .. })
            ));
        }
    }

    #[test]
    fn topological_freeness() {
        let a = Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
        assert!(is_topologically_free(&[a]));
        let b = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        assert!(!is_topologically_free(&[b]));
        assert!(is_topologically_free(&[Perm::identity(3)]));
    }

    #[test]
    fn inequalities_on_small_instances() {
        let guards = Guards::default();
        let d = instance(2, &[&[&[0], &[1]]], &[&[&[0, 1]]]);
        let rep = check_inequalities(&d, &guards).unwrap();
        assert!(rep.holds());
        assert!(rep.invariant_partition);
        assert_eq!(rep.mu.value, r(1, 1));
        assert!(rep.verdict.starts_with("amenability indicator"));
    }
}
