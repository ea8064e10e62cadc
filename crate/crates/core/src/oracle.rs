//! Nested-quantifier brute forces for `μ(X,G)` and `ω(X,G)` on ground sets
//! of at most four points.
//!
//! These share no enumeration code with [`crate::dynamics`]. A family of
//! subsets is a 15-bit mask whose bit `s − 1` stands for the subset with
//! bitmask `s`; every family, canonical or not, is visited. A family's
//! "shadow" is the set of subsets contained in one of its members, so
//! `𝒰 ⪯ 𝒱` iff `𝒱 ⊆ shadow(𝒰)`.
//!
//! The outer quantifier over finite `E ⊆ G` ranges over every non-empty
//! subset when `|G| ≤ 6` and otherwise over singletons, pairs and `G`
//! itself. `G` is always visited, and both inner quantities are monotone in
//! `E`, so the extremum is attained there.

use crate::dynamics::DynamicalInstance;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const ORACLE_GROUND: usize = 4;

type Family = u32;

struct Model {
    n: usize,
    full: u32,
    /// `subsets_of[s]`: shadow of the single subset `s` (1-based).
    subsets_of: Vec<Family>,
    admissible_shadow: Family,
    /// Group elements as images of each point.
    group: Vec<Vec<usize>>,
}

impl Model {
    fn new(d: &DynamicalInstance) -> Result<Model> {
        let n = d.ground_size();
        if n > ORACLE_GROUND {
            return Err(Error::CapExceeded {
                what: "literal oracle ground",
                size: n,
                cap: ORACLE_GROUND,
            });
        }
        let full = (1u32 << n) - 1;
        let subsets_of: Vec<Family> = (0..=full)
            .map(|s| {
                (1..=full)
                    .filter(|&t| t & s == t)
                    .fold(0, |acc, t| acc | 1 << (t - 1))
            })
            .collect();
        let mut finest: Family = 0;
        for m in d.structure().finest().members() {
            finest |= 1 << (m.low_mask() as u32 - 1);
        }
        let group = d
            .group()
            .iter()
            .map(|g| (0..n).map(|x| g.apply(x)).collect())
            .collect();
        let mut model = Model {
            n,
            full,
            subsets_of,
            admissible_shadow: 0,
            group,
        };
        model.admissible_shadow = model.shadow(finest);
        Ok(model)
    }

    fn families(&self) -> impl Iterator<Item = Family> {
        0..(1u32 << self.full)
    }

    fn members(&self, f: Family) -> impl Iterator<Item = u32> {
        (1..=self.full).filter(move |s| f >> (s - 1) & 1 == 1)
    }

    fn union(&self, f: Family) -> u32 {
        self.members(f).fold(0, |a, s| a | s)
    }

    fn shadow(&self, f: Family) -> Family {
        self.members(f)
            .fold(0, |a, s| a | self.subsets_of[s as usize])
    }

    /// A covering of `X` refining the finest base.
    fn admissible(&self, f: Family) -> bool {
        self.union(f) == self.full && f & !self.admissible_shadow == 0
    }

    fn image_set(&self, g: &[usize], s: u32) -> u32 {
        (0..self.n)
            .filter(|&x| s >> x & 1 == 1)
            .fold(0, |a, x| a | 1 << g[x])
    }

    fn image(&self, g: &[usize], f: Family) -> Family {
        self.members(f)
            .fold(0, |a, s| a | 1 << (self.image_set(g, s) - 1))
    }

    fn join(&self, a: Family, b: Family) -> Family {
        let mut out = 0;
        for s in self.members(a) {
            for t in self.members(b) {
                let i = s & t;
                if i != 0 {
                    out |= 1 << (i - 1);
                }
            }
        }
        out
    }

    /// `inf {|𝒲| : 𝒲 admissible, 𝒰 ⪯ 𝒲}`, found as the smallest covering
    /// of `X` by admissible subsets lying inside some member of `𝒰`.
    fn complexity(&self, f: Family, memo: &mut std::collections::HashMap<Family, u32>) -> u32 {
        let allowed = self.shadow(f) & self.admissible_shadow;
        *memo.entry(allowed).or_insert_with(|| {
            (0..(1u32 << self.full))
                .filter(|w| w & !allowed == 0 && self.union(*w) == self.full)
                .map(u32::count_ones)
                .min()
                .expect("singletons are admissible")
        })
    }

    fn e_policy(&self) -> Vec<Vec<usize>> {
        let k = self.group.len();
        if k <= 6 {
            return (1u32..1 << k)
                .map(|m| (0..k).filter(|&i| m >> i & 1 == 1).collect())
                .collect();
        }
        let mut out: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
        for i in 0..k {
            for j in i + 1..k {
                out.push(vec![i, j]);
            }
        }
        out.push((0..k).collect());
        out
    }
}

/// Maximum matching between `a` and `b`, edges from `related`, by
/// exhaustive search over the right side.
fn matching_number(a: &[usize], b: &[usize], related: &dyn Fn(usize, usize) -> bool) -> usize {
    fn go(
        i: usize,
        used: u32,
        a: &[usize],
        b: &[usize],
        related: &dyn Fn(usize, usize) -> bool,
    ) -> usize {
        if i == a.len() {
            return 0;
        }
        let mut best = go(i + 1, used, a, b, related);
        for (j, &y) in b.iter().enumerate() {
            if used >> j & 1 == 0 && related(a[i], y) {
                best = best.max(1 + go(i + 1, used | 1 << j, a, b, related));
            }
        }
        best
    }
    go(0, 0, a, b, related)
}

/// `inf_E inf_𝒰 sup_F inf_{g ∈ E} μ(F, g(F), 𝒰) / |F|`.
pub fn literal_mu(d: &DynamicalInstance) -> Result<Rational> {
    let m = Model::new(d)?;
    let n = m.n;
    // μ(F, gF, 𝒰) only sees the "share a member" relation of 𝒰.
    let mut relations = std::collections::BTreeSet::new();
    for f in m.families().filter(|&f| m.admissible(f)) {
        let mut rel = 0u32;
        for s in m.members(f) {
            for x in 0..n {
                for y in 0..n {
                    if s >> x & 1 == 1 && s >> y & 1 == 1 {
                        rel |= 1 << (x * n + y);
                    }
                }
            }
        }
        relations.insert(rel);
    }
    let policy = m.e_policy();
    let mut best: Option<Rational> = None;
    for rel in relations {
        let related = move |x: usize, y: usize| rel >> (x * n + y) & 1 == 1;
        // table[F][g] = μ(F, gF, 𝒰)
        let table: Vec<Vec<usize>> = (1..=m.full)
            .map(|fs| {
                let a: Vec<usize> = (0..n).filter(|&x| fs >> x & 1 == 1).collect();
                m.group
                    .iter()
                    .map(|g| {
                        let gf = m.image_set(g, fs);
                        let b: Vec<usize> = (0..n).filter(|&y| gf >> y & 1 == 1).collect();
                        matching_number(&a, &b, &related)
                    })
                    .collect()
            })
            .collect();
        for e in &policy {
            let sup_f = (1..=m.full)
                .map(|fs| {
                    let inf_g = e
                        .iter()
                        .map(|&g| table[fs as usize - 1][g])
                        .min()
                        .expect("non-empty E");
                    Rational::new(inf_g as i64, fs.count_ones() as i64)
                })
                .max()
                .expect("non-empty ground");
            best = Some(best.map_or(sup_f, |b| b.min(sup_f)));
        }
    }
    best.ok_or_else(|| Error::Assertion("no admissible coverings".into()))
}

/// `sup_E sup_𝒰 inf_{𝒱 ⪰ 𝒰} sup_{g ∈ E} N(𝒱 ∨ g(𝒱)) / N(𝒱)`.
pub fn literal_omega(d: &DynamicalInstance) -> Result<Rational> {
    let m = Model::new(d)?;
    let mut memo = std::collections::HashMap::new();
    let admissible: Vec<Family> = m.families().filter(|&f| m.admissible(f)).collect();
    // ratio[v][g] = N(𝒱 ∨ g𝒱) / N(𝒱), kept as (numerator, denominator).
    let ratios: Vec<Vec<(u32, u32)>> = admissible
        .iter()
        .map(|&v| {
            let n_v = m.complexity(v, &mut memo);
            m.group
                .iter()
                .map(|g| (m.complexity(m.join(v, m.image(g, v)), &mut memo), n_v))
                .collect()
        })
        .collect();
    let less = |a: (u32, u32), b: (u32, u32)| a.0 * b.1 < b.0 * a.1;
    let policy = m.e_policy();
    let size = 1usize << m.full;
    let mut best: Option<(u32, u32)> = None;
    for e in &policy {
        // inf[C] = min over admissible 𝒱 ⊆ C, by a subset-minimum sweep.
        let mut inf: Vec<Option<(u32, u32)>> = vec![None; size];
        for (i, &v) in admissible.iter().enumerate() {
            let r = e
                .iter()
                .map(|&g| ratios[i][g])
                .reduce(|a, b| if less(a, b) { b } else { a })
                .expect("non-empty E");
            inf[v as usize] = Some(r);
        }
        for bit in 0..m.full {
            for c in 0..size {
                if c >> bit & 1 == 1 {
                    if let Some(r) = inf[c ^ 1 << bit] {
                        if inf[c].is_none_or(|cur| less(r, cur)) {
                            inf[c] = Some(r);
                        }
                    }
                }
            }
        }
        for &u in &admissible {
            let r = inf[m.shadow(u) as usize].expect("𝒰 refines itself");
            if best.is_none_or(|b| less(b, r)) {
                best = Some(r);
            }
        }
    }
    let (p, q) = best.ok_or_else(|| Error::Assertion("no admissible coverings".into()))?;
    Ok(Rational::new(p as i64, q as i64))
}
