//! Exact minimum set cover by branch and bound.
//!
//! Greedy gives the initial upper bound; nodes are pruned with the counting
//! bound `chosen + ⌈uncovered / best gain⌉`. Branching is on the uncovered
//! element with the fewest candidate sets, candidates ordered by descending
//! size then index, so results are deterministic.

use crate::subset::Subset;

/// A minimum subfamily of `sets` covering `0..universe`, as sorted indices
/// into `sets`. `None` when the sets do not cover the universe.
pub fn min_cover(universe: usize, sets: &[Subset]) -> Option<Vec<usize>> {
    let full = Subset::full(universe);
    let union = sets.iter().fold(Subset::empty(), |a, s| a | (*s & full));
    if union != full {
        return None;
    }
    if universe == 0 {
        return Some(Vec::new());
    }

    // Dominated sets never help: keep a set unless a strictly larger one
    // contains it, or an equal one appears earlier.
    let clipped: Vec<Subset> = sets.iter().map(|s| *s & full).collect();
    let mut cand: Vec<usize> = (0..clipped.len())
        .filter(|&i| {
            let s = &clipped[i];
            !s.is_empty()
                && !clipped
                    .iter()
                    .enumerate()
                    .any(|(j, t)| j != i && s.is_subset_of(t) && (s.len() < t.len() || j < i))
        })
        .collect();
    cand.sort_by(|&a, &b| clipped[b].len().cmp(&clipped[a].len()).then(a.cmp(&b)));

    let cand_sets: Vec<Subset> = cand.iter().map(|&i| clipped[i]).collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); universe];
    for (k, s) in cand_sets.iter().enumerate() {
        for e in s.iter() {
            containing[e].push(k);
        }
    }

    let mut search = Search {
        sets: &cand_sets,
        containing: &containing,
        best: greedy(&cand_sets, full),
    };
    let mut chosen = Vec::new();
    search.dfs(full, &mut chosen);

    let mut out: Vec<usize> = search.best.iter().map(|&k| cand[k]).collect();
    out.sort_unstable();
    Some(out)
}

/// Size of a minimum cover, `None` if infeasible.
pub fn min_cover_size(universe: usize, sets: &[Subset]) -> Option<usize> {
    min_cover(universe, sets).map(|c| c.len())
}

fn greedy(sets: &[Subset], full: Subset) -> Vec<usize> {
    let mut uncovered = full;
    let mut picked = Vec::new();
    while !uncovered.is_empty() {
        let (k, _) = sets
            .iter()
            .enumerate()
            .map(|(k, s)| (k, s.intersection_len(&uncovered)))
            .fold(
                (usize::MAX, 0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        picked.push(k);
        uncovered = uncovered - sets[k];
    }
    picked
}

struct Search<'a> {
    sets: &'a [Subset],
    containing: &'a [Vec<usize>],
    best: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self, uncovered: Subset, chosen: &mut Vec<usize>) {
        if uncovered.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let remaining = uncovered.len();
        let gain = self
            .sets
            .iter()
            .map(|s| s.intersection_len(&uncovered))
            .max()
            .unwrap_or(0);
        debug_assert!(gain > 0);
        if chosen.len() + remaining.div_ceil(gain) >= self.best.len() {
            return;
        }
        let pivot = uncovered
            .iter()
            .min_by_key(|&e| (self.containing[e].len(), e))
            .expect("non-empty");
        for &k in &self.containing[pivot] {
            chosen.push(k);
            self.dfs(uncovered - self.sets[k], chosen);
            chosen.pop();
        }
    }
}
