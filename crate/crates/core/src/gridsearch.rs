//! Grid (`K_{s,t}`) detection, codegrees, girth and the counting bound.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::binomial;
use rand::seq::index::sample;

use crate::embeddings::next_combination;
use crate::graph::{iter_bits, popcount, BipartiteGraph};
use crate::par;
use crate::rng::{derive_seed, seeded};

/// Default cap on subsets examined by [`find_kst`].
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Leading indices processed per parallel batch.
const BATCH: usize = 64;

/// A product set `left_set x right_set` of edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridWitness {
    pub left_set: Vec<usize>,
    pub right_set: Vec<usize>,
}

impl GridWitness {
    /// Whether every listed pair is an edge of `g` and neither set repeats a vertex.
    pub fn verify(&self, g: &BipartiteGraph) -> bool {
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        increasing(&self.left_set)
            && increasing(&self.right_set)
            && self
                .left_set
                .iter()
                .all(|&u| self.right_set.iter().all(|&v| g.has_edge(u, v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<GridWitness>,
    /// Subsets (pruned prefixes included) whose common neighborhood was computed.
    pub subsets_examined: u64,
    /// `true` when both orientations were covered in full; a search that stops at a
    /// witness or at the budget is not exhaustive.
    pub exhaustive: bool,
}

enum Step {
    Found(Vec<usize>, Vec<u64>),
    Done,
    Capped,
}

struct Dfs<'a> {
    g: &'a BipartiteGraph,
    s: usize,
    t: usize,
    cap: u64,
    examined: u64,
    chosen: Vec<usize>,
}

impl Dfs<'_> {
    fn extend(&mut self, acc: &[u64], next: usize) -> Step {
        if self.chosen.len() == self.s {
            return Step::Found(self.chosen.clone(), acc.to_vec());
        }
        let need = self.s - self.chosen.len();
        let n = self.g.left_size();
        let mut buf = vec![0u64; acc.len()];
        for u in next..=n - need {
            if self.examined >= self.cap {
                return Step::Capped;
            }
            self.examined += 1;
            for ((b, a), r) in buf.iter_mut().zip(acc).zip(self.g.row(u)) {
                *b = a & r;
            }
            if popcount(&buf) < self.t {
                continue;
            }
            self.chosen.push(u);
            match self.extend(&buf, u + 1) {
                Step::Done => {}
                other => return other,
            }
            self.chosen.pop();
        }
        Step::Done
    }
}

/// Searches the subtree of `s`-subsets of the left side whose least element is `lead`.
fn subtree(g: &BipartiteGraph, s: usize, t: usize, lead: usize, cap: u64) -> (Step, u64) {
    if cap == 0 {
        return (Step::Capped, 0);
    }
    let row = g.row(lead);
    if popcount(row) < t {
        return (Step::Done, 1);
    }
    let mut dfs = Dfs {
        g,
        s,
        t,
        cap: cap - 1,
        examined: 0,
        chosen: vec![lead],
    };
    let step = dfs.extend(row, lead + 1);
    (step, dfs.examined + 1)
}

/// One orientation: `s`-subsets of the left side with at least `t` common neighbors.
/// Returns the lexicographically first witness, the count examined, and completeness.
fn search_left(g: &BipartiteGraph, s: usize, t: usize, budget: u64) -> (Option<GridWitness>, u64, bool) {
    let n = g.left_size();
    if s > n {
        return (None, 0, true);
    }
    let leads = n - s + 1;
    let mut used = 0u64;
    let mut start = 0;
    while start < leads {
        let end = (start + BATCH).min(leads);
        let remaining = budget - used;
        let results = par::map_range(start..end, |lead| subtree(g, s, t, lead, remaining));
        for (step, examined) in results {
            if used + examined > budget {
                return (None, budget, false);
            }
            used += examined;
            match step {
                Step::Found(chosen, common) => {
                    let right: Vec<usize> = iter_bits(&common).take(t).collect();
                    return (
                        Some(GridWitness {
                            left_set: chosen,
                            right_set: right,
                        }),
                        used,
                        true,
                    );
                }
                Step::Capped => return (None, used, false),
                Step::Done => {}
            }
        }
        start = end;
    }
    (None, used, true)
}

/// Looks for an `s`-by-`t` grid (`s` left, `t` right vertices) and a `t`-by-`s` grid.
///
/// The side with fewer vertices is enumerated first (left on ties). Subsets are
/// visited in lexicographic order and prefixes whose common neighborhood falls below
/// `t` are pruned. The returned witness is the first one in that order, independent of
/// the number of workers. At most `budget` subsets are examined in total.
pub fn find_kst(g: &BipartiteGraph, s: usize, t: usize, budget: u64) -> SearchOutcome {
    assert!(s >= 1 && t >= 1, "grid sides must be positive");
    let transposed = g.transpose();
    let right_first = g.right_size() < g.left_size();
    let orientations: [bool; 2] = if right_first { [true, false] } else { [false, true] };
    let mut examined = 0;
    let mut exhaustive = true;
    for swap in orientations {
        let graph = if swap { &transposed } else { g };
        let (found, used, complete) = search_left(graph, s, t, budget - examined);
        examined += used;
        if let Some(w) = found {
            let w = if swap {
                GridWitness {
                    left_set: w.right_set,
                    right_set: w.left_set,
                }
            } else {
                w
            };
            return SearchOutcome {
                found: Some(w),
                subsets_examined: examined,
                exhaustive: false,
            };
        }
        if !complete {
            exhaustive = false;
            break;
        }
    }
    SearchOutcome {
        found: None,
        subsets_examined: examined,
        exhaustive,
    }
}

/// Largest common neighborhood of `s` left vertices, over all `s`-subsets when
/// `sample == 0`, otherwise over `sample` random `s`-subsets drawn from `seed`.
pub fn max_codegree(g: &BipartiteGraph, s: usize, sample_size: usize, seed: u64) -> usize {
    let n = g.left_size();
    assert!(s >= 1 && n >= s, "need at least s left vertices");
    let words = g.row_words();
    if sample_size == 0 {
        let best = par::map_range(0..n - s + 1, |lead| {
            let mut best = 0;
            let mut idx: Vec<usize> = (lead..lead + s).collect();
            let mut acc = vec![0u64; words];
            loop {
                if idx[0] != lead {
                    break;
                }
                acc.copy_from_slice(g.row(idx[0]));
                for &u in &idx[1..] {
                    for (a, r) in acc.iter_mut().zip(g.row(u)) {
                        *a &= r;
                    }
                }
                best = best.max(popcount(&acc));
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
            best
        });
        return best.into_iter().max().unwrap_or(0);
    }
    par::map_range(0..sample_size, |i| {
        let mut rng = seeded(derive_seed(seed, i as u64));
        let subset = sample(&mut rng, n, s);
        let mut acc = g.row(subset.index(0)).to_vec();
        for u in subset.iter().skip(1) {
            for (a, r) in acc.iter_mut().zip(g.row(u)) {
                *a &= r;
            }
        }
        popcount(&acc)
    })
    .into_iter()
    .max()
    .unwrap_or(0)
}

/// Both sides of the counting inequality `sum_x C(d(x), s) <= (t - 1) C(n, s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KstBound {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

/// The counting inequality over right vertices `x` with `n = left_size`. It holds
/// for every graph without an `s`-by-`t` grid, so `holds == false` proves one exists.
pub fn check_kst_bound(g: &BipartiteGraph, s: usize, t: usize) -> KstBound {
    let lhs: BigUint = g
        .right_degrees()
        .into_iter()
        .map(|d| binomial(BigUint::from(d), BigUint::from(s)))
        .sum();
    let rhs = BigUint::from(t.saturating_sub(1)) * binomial(BigUint::from(g.left_size()), BigUint::from(s));
    let holds = lhs <= rhs;
    KstBound { lhs, rhs, holds }
}

/// Length of a shortest cycle, or `None` for a forest.
pub fn girth(g: &BipartiteGraph) -> Option<usize> {
    let adj = g.adjacency_lists();
    let n = adj.len();
    par::map_range(0..n, |src| shortest_cycle_through(&adj, src))
        .into_iter()
        .flatten()
        .min()
}

/// Shortest cycle found by BFS from `src`; the minimum over all sources is the girth.
fn shortest_cycle_through(adj: &[Vec<usize>], src: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut parent = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    let mut best: Option<usize> = None;
    while let Some(u) = queue.pop_front() {
        if let Some(b) = best {
            if 2 * dist[u] + 1 >= b {
                break;
            }
        }
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                queue.push_back(w);
            } else if parent[u] != w {
                let len = dist[u] + dist[w] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn quad_loop_has_c4(g: &BipartiteGraph) -> bool {
        let (l, r) = (g.left_size(), g.right_size());
        for a in 0..l {
            for b in a + 1..l {
                for c in 0..r {
                    for d in c + 1..r {
                        if g.has_edge(a, c) && g.has_edge(a, d) && g.has_edge(b, c) && g.has_edge(b, d) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn path_graph(edges: usize) -> BipartiteGraph {
        // alternating path l0 r0 l1 r1 ...
        let mut g = BipartiteGraph::empty(edges, edges);
        for i in 0..edges {
            if i % 2 == 0 {
                g.add_edge(i / 2, i / 2);
            } else {
                g.add_edge(i / 2 + 1, i / 2);
            }
        }
        g
    }

    #[test]
    fn complete_three_by_three() {
        let g = BipartiteGraph::complete(3, 3);
        let out = find_kst(&g, 2, 2, DEFAULT_BUDGET);
        let w = out.found.unwrap();
        assert_eq!(w.left_set, vec![0, 1]);
        assert_eq!(w.right_set, vec![0, 1]);
        assert!(w.verify(&g));
        let b = check_kst_bound(&g, 2, 2);
        assert_eq!((b.lhs, b.rhs, b.holds), (9u32.into(), 3u32.into(), false));
    }

    #[test]
    fn empty_graphs() {
        let g = BipartiteGraph::empty(5, 4);
        for (s, t) in [(1, 1), (2, 2), (3, 1)] {
            let out = find_kst(&g, s, t, DEFAULT_BUDGET);
            assert!(out.found.is_none() && out.exhaustive);
            let b = check_kst_bound(&g, s, t);
            assert!(b.holds);
            assert_eq!(b.lhs, BigUint::from(0u32));
        }
        assert_eq!(girth(&g), None);
    }

    #[test]
    fn transposed_orientation() {
        // left vertex 0 adjacent to right 0,1,2: a 1-by-3 grid, and a 3-by-1 grid only
        // in the swapped orientation
        let g = BipartiteGraph::from_edges(2, 3, [(0, 0), (0, 1), (0, 2)]);
        let out = find_kst(&g, 3, 1, DEFAULT_BUDGET);
        let w = out.found.unwrap();
        assert_eq!(w.left_set, vec![0]);
        assert_eq!(w.right_set, vec![0, 1, 2]);
        assert!(w.verify(&g));
    }

    #[test]
    fn budget_marks_partial_search() {
        let g = BipartiteGraph::from_edges(40, 40, (0..40).map(|i| (i, i)));
        let out = find_kst(&g, 2, 1, 10);
        assert!(out.found.is_none());
        assert!(!out.exhaustive);
        assert!(out.subsets_examined <= 10);
        let full = find_kst(&g, 2, 1, DEFAULT_BUDGET);
        assert!(full.exhaustive && full.found.is_none());
    }

    #[test]
    fn random_small_graphs_agree_with_quadruple_loop() {
        let mut rng = seeded(11);
        for _ in 0..5000 {
            let l = rng.random_range(1..=6);
            let r = rng.random_range(1..=6);
            let mut g = BipartiteGraph::empty(l, r);
            for u in 0..l {
                for v in 0..r {
                    if rng.random_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            let out = find_kst(&g, 2, 2, DEFAULT_BUDGET);
            assert_eq!(out.found.is_some(), quad_loop_has_c4(&g));
            assert_eq!(out.exhaustive, out.found.is_none());
            if let Some(w) = &out.found {
                assert!(w.verify(&g));
            }
        }
    }

    #[test]
    fn codegree_examples() {
        assert_eq!(max_codegree(&BipartiteGraph::complete(4, 4), 2, 0, 0), 4);
        assert_eq!(max_codegree(&BipartiteGraph::from_edges(1, 1, [(0, 0)]), 1, 0, 0), 1);
        let g = BipartiteGraph::complete(5, 7);
        assert_eq!(max_codegree(&g, 3, 50, 9), 7);
    }

    #[test]
    fn codegree_exhaustive_matches_pairs() {
        let mut rng = seeded(5);
        for _ in 0..200 {
            let mut g = BipartiteGraph::empty(7, 9);
            for u in 0..7 {
                for v in 0..9 {
                    if rng.random_bool(0.4) {
                        g.add_edge(u, v);
                    }
                }
            }
            let mut best = 0;
            for a in 0..7 {
                for b in a + 1..7 {
                    best = best.max((0..9).filter(|&v| g.has_edge(a, v) && g.has_edge(b, v)).count());
                }
            }
            assert_eq!(max_codegree(&g, 2, 0, 0), best);
            assert!(max_codegree(&g, 2, 30, 1) <= best);
        }
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&BipartiteGraph::complete(2, 2)), Some(4));
        assert_eq!(girth(&path_graph(3)), None);
        // a 6-cycle l0 r0 l1 r1 l2 r2
        let g = BipartiteGraph::from_edges(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]);
        assert_eq!(girth(&g), Some(6));
    }
}
