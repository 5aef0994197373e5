//! Intersection graph of a line configuration and a best-effort independent
//! set search (greedy seeding from every vertex, then branch and bound with
//! degree-based pruning under a time budget).
//!
//! Absence of a result is never a proof of nonexistence: the search supports
//! exploration, the orbit construction carries the existence proof.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::geom::{lines_disjoint, Line};

/// Lines as vertices, an edge for every pair that meets in `P³`.
#[derive(Clone, Debug)]
pub struct IntersectionGraph {
    lines: Vec<Line>,
    edges: Vec<(u32, u32)>,
    adjacency: Vec<BitSet>,
}

impl IntersectionGraph {
    pub fn vertex_count(&self) -> usize {
        self.lines.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Unordered edge pairs `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adjacency[i].contains(j)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// True iff no two of the given vertices are adjacent.
    pub fn is_independent(&self, vertices: &[u32]) -> bool {
        for (k, &i) in vertices.iter().enumerate() {
            for &j in &vertices[k + 1..] {
                if self.is_edge(i as usize, j as usize) {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds the graph by checking disjointness of every unordered pair.
/// The sweep is partitioned across workers; the edge list is sorted, so the
/// result is independent of scheduling.
pub fn build_intersection_graph(lines: &[Line]) -> IntersectionGraph {
    let n = lines.len();
    let mut edges: Vec<(u32, u32)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let lines = &lines;
            ((i + 1)..n).filter_map(move |j| {
                if lines_disjoint(&lines[i], &lines[j]) {
                    None
                } else {
                    Some((i as u32, j as u32))
                }
            })
        })
        .collect();
    edges.sort_unstable();
    let mut adjacency = vec![BitSet::new(n); n];
    for &(i, j) in &edges {
        adjacency[i as usize].insert(j as usize);
        adjacency[j as usize].insert(i as usize);
    }
    IntersectionGraph {
        lines: lines.to_vec(),
        edges,
        adjacency,
    }
}

/// Searches for an independent set of at least `target` vertices.
///
/// Strategy: greedy minimum-residual-degree runs seeded from every vertex,
/// then branch and bound on the residual graph, pruning branches whose
/// remaining vertex pool cannot reach the incumbent. Returns the first set
/// reaching `target` (sorted), or `None` when the budget runs out — which
/// proves nothing about nonexistence.
pub fn independent_set_search(
    graph: &IntersectionGraph,
    target: usize,
    budget: Duration,
) -> Option<Vec<u32>> {
    let n = graph.vertex_count();
    if target > n {
        return None;
    }
    if target == 0 {
        return Some(Vec::new());
    }
    let deadline = Instant::now() + budget;

    let mut best: Vec<u32> = Vec::new();
    for seed in 0..n {
        let candidate = greedy_from_seed(graph, seed);
        if candidate.len() > best.len() {
            best = candidate;
            if best.len() >= target {
                best.truncate(target);
                best.sort_unstable();
                debug_assert!(graph.is_independent(&best));
                return Some(best);
            }
        }
        if Instant::now() >= deadline {
            return None;
        }
    }

    // exact phase: branch and bound, highest-degree vertex first
    let mut pool = BitSet::full(n);
    let mut chosen: Vec<u32> = Vec::new();
    let found = branch_and_bound(graph, &mut pool, &mut chosen, target, deadline);
    found.map(|mut set| {
        set.sort_unstable();
        debug_assert!(graph.is_independent(&set));
        set
    })
}

fn greedy_from_seed(graph: &IntersectionGraph, seed: usize) -> Vec<u32> {
    let n = graph.vertex_count();
    let mut pool = BitSet::full(n);
    let mut picked = Vec::new();
    let take = |v: usize, pool: &mut BitSet, picked: &mut Vec<u32>| {
        picked.push(v as u32);
        pool.remove(v);
        pool.subtract(&graph.adjacency[v]);
    };
    take(seed, &mut pool, &mut picked);
    while let Some(v) = min_residual_degree_vertex(graph, &pool) {
        take(v, &mut pool, &mut picked);
    }
    picked
}

fn min_residual_degree_vertex(graph: &IntersectionGraph, pool: &BitSet) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for v in pool.iter() {
        let d = graph.adjacency[v].intersection_len(pool);
        match best {
            Some((_, bd)) if bd <= d => {}
            _ => best = Some((v, d)),
        }
    }
    best.map(|(v, _)| v)
}

fn branch_and_bound(
    graph: &IntersectionGraph,
    pool: &mut BitSet,
    chosen: &mut Vec<u32>,
    target: usize,
    deadline: Instant,
) -> Option<Vec<u32>> {
    if chosen.len() >= target {
        return Some(chosen.clone());
    }
    // degree-based pruning: even taking the whole pool cannot reach target
    if chosen.len() + pool.len() < target {
        return None;
    }
    if Instant::now() >= deadline {
        return None;
    }
    // branch on the pool vertex of highest residual degree: excluding it
    // thins the graph fastest
    let v = pool
        .iter()
        .max_by_key(|&v| graph.adjacency[v].intersection_len(pool))?;

    // include v
    let saved = pool.clone();
    chosen.push(v as u32);
    pool.remove(v);
    pool.subtract(&graph.adjacency[v]);
    if let Some(found) = branch_and_bound(graph, pool, chosen, target, deadline) {
        return Some(found);
    }
    chosen.pop();
    *pool = saved;

    // exclude v
    pool.remove(v);
    let result = branch_and_bound(graph, pool, chosen, target, deadline);
    pool.insert(v);
    result
}

/// Fixed-capacity bit set over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    fn new(capacity: usize) -> Self {
        BitSet {
            words: vec![0; capacity.div_ceil(64)],
            len: 0,
        }
    }

    fn full(capacity: usize) -> Self {
        let mut set = Self::new(capacity);
        for w in 0..set.words.len() {
            set.words[w] = u64::MAX;
        }
        let spare = set.words.len() * 64 - capacity;
        if spare > 0 {
            *set.words.last_mut().unwrap() >>= spare;
        }
        set.len = capacity;
        set
    }

    fn len(&self) -> usize {
        self.len
    }

    fn contains(&self, v: usize) -> bool {
        self.words[v / 64] & (1 << (v % 64)) != 0
    }

    fn insert(&mut self, v: usize) {
        if !self.contains(v) {
            self.words[v / 64] |= 1 << (v % 64);
            self.len += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        if self.contains(v) {
            self.words[v / 64] &= !(1 << (v % 64));
            self.len -= 1;
        }
    }

    fn subtract(&mut self, other: &BitSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    fn intersection_len(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FieldElement;
    use crate::geom::Line;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    fn coordinate_line(i: usize, j: usize) -> Line {
        let unit = |k: usize| -> [FieldElement; 4] {
            std::array::from_fn(|c| if c == k { fe(1) } else { fe(0) })
        };
        Line::from_span_rows([unit(i), unit(j)]).unwrap()
    }

    /// Graph stub built from an explicit edge list, no geometry involved.
    fn graph_from_edges(n: usize, edge_list: &[(u32, u32)]) -> IntersectionGraph {
        let lines = vec![coordinate_line(0, 1); n];
        let mut edges = edge_list.to_vec();
        edges.sort_unstable();
        let mut adjacency = vec![BitSet::new(n); n];
        for &(i, j) in &edges {
            adjacency[i as usize].insert(j as usize);
            adjacency[j as usize].insert(i as usize);
        }
        IntersectionGraph {
            lines,
            edges,
            adjacency,
        }
    }

    #[test]
    fn coordinate_lines_make_a_tiny_graph() {
        let lines = vec![
            coordinate_line(0, 1),
            coordinate_line(2, 3),
            coordinate_line(1, 2),
        ];
        let g = build_intersection_graph(&lines);
        assert_eq!(g.vertex_count(), 3);
        // lines 0 and 1 are disjoint; line 2 meets both
        assert_eq!(g.edges(), &[(0, 2), (1, 2)]);
        assert!(!g.is_edge(0, 1));
        assert_eq!(g.degree(2), 2);
    }

    #[test]
    fn edgeless_graph_returns_everything() {
        let g = graph_from_edges(96, &[]);
        let found = independent_set_search(&g, 96, Duration::from_secs(1)).unwrap();
        assert_eq!(found.len(), 96);
        assert_eq!(found, (0..96u32).collect::<Vec<_>>());
    }

    #[test]
    fn complete_graph_has_no_pair() {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            for j in (i + 1)..5 {
                edges.push((i, j));
            }
        }
        let g = graph_from_edges(5, &edges);
        assert!(independent_set_search(&g, 2, Duration::from_secs(1)).is_none());
        assert!(independent_set_search(&g, 1, Duration::from_secs(1)).is_some());
    }

    #[test]
    fn five_cycle_needs_branching() {
        // C5: maximum independent set has size 2 on every greedy seed, and
        // size 2 is also the true maximum
        let g = graph_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let found = independent_set_search(&g, 2, Duration::from_secs(1)).unwrap();
        assert_eq!(found.len(), 2);
        assert!(g.is_independent(&found));
        assert!(independent_set_search(&g, 3, Duration::from_secs(1)).is_none());
    }

    #[test]
    fn petersen_graph_maximum_is_found() {
        // outer C5 0..4, inner pentagram 5..9, spokes i—i+5
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)];
        edges.extend([(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)]);
        edges.extend((0..5).map(|i| (i, i + 5)));
        let g = graph_from_edges(10, &edges);
        let found = independent_set_search(&g, 4, Duration::from_secs(5)).unwrap();
        assert_eq!(found.len(), 4);
        assert!(g.is_independent(&found));
        assert!(independent_set_search(&g, 5, Duration::from_secs(1)).is_none());
    }

    #[test]
    fn zero_target_is_trivially_met() {
        let g = graph_from_edges(3, &[(0, 1)]);
        assert_eq!(
            independent_set_search(&g, 0, Duration::from_secs(1)),
            Some(vec![])
        );
    }
}
