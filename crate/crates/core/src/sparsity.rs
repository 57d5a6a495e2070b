//! The (2,1) count calculus.
//!
//! Independence is decided by a pebble game (two pebbles per vertex, an edge
//! needs two pebbles on its ends, a loop two on its vertex). Subset-based
//! questions (critical sets, the brute-force oracle) go through
//! [`CountTable`], which tabulates `i(X)` for every subset of a graph with at
//! most [`MAX_SUBSET_ORDER`] vertices.

use std::collections::VecDeque;

use itertools::Itertools;

use crate::connectivity::is_k_connected;
use crate::error::{Error, Result};
use crate::graph::{bits, mask_of, Graph, Vertex};

/// Order bound for exponential subset searches.
pub const MAX_SUBSET_ORDER: usize = 20;

/// `f(G) = 2|V| - |E|`.
pub fn deficiency(g: &Graph) -> i64 {
    2 * g.order() as i64 - g.size() as i64
}

/// `i(X)`: edges with both ends in `x`, counting multiplicity and loops once.
pub fn induced_count(g: &Graph, x: &[Vertex]) -> Result<usize> {
    let mut seen = vec![false; g.order()];
    for &v in x {
        if v >= g.order() {
            return Err(Error::UnknownVertex {
                vertex: v,
                order: g.order(),
            });
        }
        seen[v] = true;
    }
    let members: Vec<Vertex> = g.vertices().filter(|&v| seen[v]).collect();
    let mut total = 0;
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i..] {
            total += g.multiplicity(u, v);
        }
    }
    Ok(total)
}

/// `i(X)` for every `X` given as a bitmask.
pub struct CountTable {
    n: usize,
    counts: Vec<u32>,
}

impl CountTable {
    pub fn new(g: &Graph) -> Result<Self> {
        let n = g.order();
        if n > MAX_SUBSET_ORDER {
            return Err(Error::SizeBound {
                what: "subset enumeration",
                order: n,
                bound: MAX_SUBSET_ORDER,
            });
        }
        let mut counts = vec![0u32; 1 << n];
        for mask in 1usize..(1 << n) {
            let u = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut c = counts[rest] + g.loops(u) as u32;
            for v in bits(rest as u64) {
                c += g.multiplicity(u, v) as u32;
            }
            counts[mask] = c;
        }
        Ok(CountTable { n, counts })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn count(&self, mask: u64) -> usize {
        self.counts[mask as usize] as usize
    }

    /// `2|X| - i(X)`, negative when `X` is over-full.
    #[inline]
    pub fn slack(&self, mask: u64) -> i64 {
        2 * mask.count_ones() as i64 - self.count(mask) as i64
    }

    pub fn full(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn is_critical(&self, mask: u64) -> bool {
        mask != 0 && mask != self.full() && self.slack(mask) == 1
    }

    pub fn is_proper_critical(&self, mask: u64) -> bool {
        self.is_critical(mask) && (mask.count_ones() as usize) + 1 < self.n
    }

    /// `i(X) = 2|X| - 2` and no nonempty subset does better than that.
    pub fn is_semi_critical(&self, mask: u64) -> bool {
        if mask == 0 || mask == self.full() || self.slack(mask) != 2 {
            return false;
        }
        let mut sub = mask;
        while sub != 0 {
            if self.slack(sub) < 2 {
                return false;
            }
            sub = (sub - 1) & mask;
        }
        true
    }

    pub fn critical_sets(&self) -> Vec<u64> {
        (1..self.full()).filter(|&m| self.is_critical(m)).collect()
    }

    pub fn proper_critical_sets(&self) -> Vec<u64> {
        (1..self.full())
            .filter(|&m| self.is_proper_critical(m))
            .collect()
    }

    /// Every nonempty subset satisfies `i(X) <= 2|X| - 1`.
    pub fn all_sparse(&self) -> bool {
        (1..=self.full()).all(|m| self.slack(m) >= 1)
    }
}

/// Exponential independence oracle.
pub fn is_sparse_bruteforce(g: &Graph) -> Result<bool> {
    Ok(CountTable::new(g)?.all_sparse())
}

/// Pebble game state for (2,1) sparsity.
pub struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<Vertex>>,
    accepted: usize,
}

impl PebbleGame {
    pub fn new(n: usize) -> Self {
        PebbleGame {
            pebbles: vec![2; n],
            out: vec![Vec::new(); n],
            accepted: 0,
        }
    }

    pub fn accepted(&self) -> usize {
        self.accepted
    }

    /// Moves one free pebble to `root` along a reversed directed path,
    /// never taking it from a vertex in `keep`. Returns false if none is reachable.
    fn gather(&mut self, root: Vertex, keep: &[Vertex]) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        for &k in keep {
            seen[k] = true;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut found = None;
        'search: while let Some(u) = queue.pop_front() {
            for &w in &self.out[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    if self.pebbles[w] > 0 {
                        found = Some(w);
                        break 'search;
                    }
                    queue.push_back(w);
                }
            }
        }
        let Some(mut w) = found else {
            return false;
        };
        self.pebbles[w] -= 1;
        while w != root {
            let p = parent[w];
            let pos = self.out[p].iter().position(|&t| t == w).expect("arc");
            self.out[p].swap_remove(pos);
            self.out[w].push(p);
            w = p;
        }
        self.pebbles[root] += 1;
        true
    }

    /// Tries to insert the edge `uv`; returns false if it is dependent.
    pub fn insert(&mut self, u: Vertex, v: Vertex) -> bool {
        if u == v {
            while self.pebbles[u] < 2 {
                if !self.gather(u, &[]) {
                    return false;
                }
            }
        } else {
            while self.pebbles[u] + self.pebbles[v] < 2 {
                if !self.gather(u, &[v]) && !self.gather(v, &[u]) {
                    return false;
                }
            }
        }
        let (from, to) = if self.pebbles[u] > 0 { (u, v) } else { (v, u) };
        self.pebbles[from] -= 1;
        self.out[from].push(to);
        self.accepted += 1;
        true
    }
}

/// Number of edges in a maximal independent subset of the edge multiset.
pub fn pebble_rank(g: &Graph) -> usize {
    let mut game = PebbleGame::new(g.order());
    for (u, v) in g.edges() {
        game.insert(u, v);
    }
    game.accepted()
}

pub fn pebble_independent(g: &Graph) -> bool {
    let mut game = PebbleGame::new(g.order());
    g.edges().into_iter().all(|(u, v)| game.insert(u, v))
}

/// `|E| = 2|V|` and every single-edge deletion is independent.
pub fn is_circuit(g: &Graph) -> bool {
    if g.order() == 0 || g.size() != 2 * g.order() {
        return false;
    }
    // Cheap necessary conditions before the per-edge games.
    if g.min_degree().unwrap_or(0) < 2 || !g.is_connected() {
        return false;
    }
    if pebble_rank(g) != g.size() - 1 {
        return false;
    }
    g.edge_classes().into_iter().all(|(u, v, _)| {
        let mut h = g.clone();
        h.remove_edge(u, v).expect("present");
        pebble_independent(&h)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    Critical,
    SemiCritical,
    NodeCritical,
    ProperCritical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSet {
    pub members: Vec<Vertex>,
    pub kind: CriticalKind,
    pub witness_node: Option<Vertex>,
    pub count: usize,
}

impl CriticalSet {
    /// Checks the invariant of `kind` for `members` in `g`.
    pub fn classify(g: &Graph, members: &[Vertex], kind: CriticalKind) -> Result<Option<Self>> {
        let table = CountTable::new(g)?;
        let mask = mask_of(members);
        let mut witness = None;
        let ok = match kind {
            CriticalKind::Critical => table.is_critical(mask),
            CriticalKind::SemiCritical => table.is_semi_critical(mask),
            CriticalKind::ProperCritical => table.is_proper_critical(mask),
            CriticalKind::NodeCritical => {
                witness = node_critical_witness(g, &table, mask);
                witness.is_some()
            }
        };
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(ok.then(|| CriticalSet {
            count: table.count(mask),
            members: sorted,
            kind,
            witness_node: witness,
        }))
    }
}

/// A node `v` outside `mask` with exactly two neighbours inside whose third
/// neighbour has degree at least four, if `mask` is critical.
pub fn node_critical_witness(g: &Graph, table: &CountTable, mask: u64) -> Option<Vertex> {
    if !table.is_critical(mask) {
        return None;
    }
    g.vertices().find(|&v| {
        if mask & (1 << v) != 0 || g.degree(v) != 3 || g.loops(v) > 0 {
            return false;
        }
        let nb = g.neighbors(v);
        if nb.len() != 3 {
            return false;
        }
        let inside: Vec<_> = nb.iter().filter(|&&u| mask & (1 << u) != 0).collect();
        if inside.len() != 2 {
            return false;
        }
        let z = *nb.iter().find(|&&u| mask & (1 << u) == 0).unwrap();
        g.degree(z) >= 4
    })
}

/// An inclusion-minimal critical set containing `include` and avoiding
/// `exclude`. Candidates are scanned by size, then lexicographically.
pub fn find_critical_set(
    g: &Graph,
    include: &[Vertex],
    exclude: &[Vertex],
) -> Result<Option<CriticalSet>> {
    if let Some(v) = include.iter().find(|v| exclude.contains(v)) {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} is both included and excluded"
        )));
    }
    for &v in include.iter().chain(exclude) {
        if v >= g.order() {
            return Err(Error::UnknownVertex {
                vertex: v,
                order: g.order(),
            });
        }
    }
    let table = CountTable::new(g)?;
    let base = mask_of(include);
    let free: Vec<Vertex> = g
        .vertices()
        .filter(|v| !include.contains(v) && !exclude.contains(v))
        .collect();
    for extra in 0..=free.len() {
        for combo in free.iter().copied().combinations(extra) {
            let mask = base | mask_of(&combo);
            if table.is_critical(mask) {
                return Ok(Some(CriticalSet {
                    members: bits(mask).collect(),
                    kind: CriticalKind::Critical,
                    witness_node: None,
                    count: table.count(mask),
                }));
            }
        }
    }
    Ok(None)
}

pub fn has_proper_critical_set(g: &Graph) -> Result<bool> {
    let table = CountTable::new(g)?;
    Ok((1..table.full()).any(|m| table.is_proper_critical(m)))
}

/// The degree-three vertices of a circuit induce a forest.
pub fn degree_three_forest_check(g: &Graph) -> Result<bool> {
    if !is_circuit(g) {
        return Err(Error::NotCircuit);
    }
    Ok(degree_three_forest(g))
}

pub(crate) fn degree_three_forest(g: &Graph) -> bool {
    let v3: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) == 3).collect();
    let h = g.induced_subgraph(&v3);
    h.size() + h.components().len() == h.order()
}

/// Degree-three vertices not contained in any `K4` subgraph.
pub fn nodes_outside_k4(g: &Graph) -> Vec<Vertex> {
    g.vertices()
        .filter(|&v| g.degree(v) == 3 && !in_k4(g, v))
        .collect()
}

pub fn in_k4(g: &Graph, v: Vertex) -> bool {
    g.neighbors(v).into_iter().combinations(3).any(|t| {
        g.has_edge(t[0], t[1]) && g.has_edge(t[0], t[2]) && g.has_edge(t[1], t[2])
    })
}

/// Simple circuit test used where 3-connectivity matters alongside the counts.
pub fn is_three_connected_circuit(g: &Graph) -> bool {
    is_circuit(g) && is_k_connected(g, 3)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    fn arb_multigraph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec((0..n, 0..n), 0..=max_m)
                .prop_map(move |es| Graph::from_edges(n, &es).expect("in range"))
        })
    }

    /// Circuit by definition: not sparse, but sparse after deleting any edge.
    fn circuit_bruteforce(g: &Graph) -> bool {
        if is_sparse_bruteforce(g).unwrap() || g.size() == 0 {
            return false;
        }
        g.edges().into_iter().all(|(u, v)| {
            let mut h = g.clone();
            h.remove_edge(u, v).unwrap();
            is_sparse_bruteforce(&h).unwrap()
        }) && g.vertices().all(|v| g.degree(v) > 0)
    }

    proptest! {
        #[test]
        fn pebble_game_matches_subset_counts(g in arb_multigraph(7, 16)) {
            prop_assert_eq!(pebble_independent(&g), is_sparse_bruteforce(&g).unwrap());
        }

        #[test]
        fn circuit_test_matches_definition(g in arb_multigraph(6, 12)) {
            prop_assert_eq!(is_circuit(&g), circuit_bruteforce(&g));
        }

        #[test]
        fn rank_is_bounded(g in arb_multigraph(7, 20)) {
            let r = pebble_rank(&g);
            prop_assert!(r <= g.size() && r < 2 * g.order());
            prop_assert_eq!(r == g.size(), pebble_independent(&g));
        }
    }
    use super::*;

    fn k5_minus_edge() -> Graph {
        let mut g = Graph::complete(5);
        g.remove_edge(0, 1).unwrap();
        g
    }

    #[test]
    fn deficiency_examples() {
        assert_eq!(deficiency(&Graph::complete(5)), 0);
        assert_eq!(deficiency(&Graph::complete(4)), 2);
        assert_eq!(deficiency(&Graph::empty(1)), 2);
    }

    #[test]
    fn induced_counts() {
        let k5 = Graph::complete(5);
        assert_eq!(induced_count(&k5, &[0, 2, 4]).unwrap(), 3);
        let r0 = Graph::from_edges(1, &[(0, 0), (0, 0)]).unwrap();
        assert_eq!(induced_count(&r0, &[0]).unwrap(), 2);
        assert!(induced_count(&k5, &[7]).is_err());
    }

    #[test]
    fn sparse_examples_agree() {
        for (g, want) in [
            (k5_minus_edge(), true),
            (Graph::complete(5), false),
            (Graph::complete(4), true),
            (Graph::empty(4), true),
            (Graph::from_edges(1, &[(0, 0)]).unwrap(), true),
            (Graph::from_edges(1, &[(0, 0), (0, 0)]).unwrap(), false),
        ] {
            assert_eq!(is_sparse_bruteforce(&g).unwrap(), want, "{g:?}");
            assert_eq!(pebble_independent(&g), want, "{g:?}");
        }
    }

    #[test]
    fn circuits() {
        assert!(is_circuit(&Graph::complete(5)));
        assert!(is_circuit(&Graph::from_edges(1, &[(0, 0), (0, 0)]).unwrap()));
        // K6 minus a perfect matching.
        let mut oct = Graph::complete(6);
        for (u, v) in [(0, 1), (2, 3), (4, 5)] {
            oct.remove_edge(u, v).unwrap();
        }
        assert!(is_circuit(&oct));
        // K6 minus a star at vertex 0: the remaining K5 is over-full.
        let mut star = Graph::complete(6);
        for v in [1, 2, 3] {
            star.remove_edge(0, v).unwrap();
        }
        assert!(!is_circuit(&star));
        assert!(!is_circuit(&Graph::complete(4)));
    }

    #[test]
    fn critical_search() {
        let k5 = Graph::complete(5);
        assert_eq!(find_critical_set(&k5, &[0, 1], &[]).unwrap(), None);
        assert!(!has_proper_critical_set(&k5).unwrap());
        assert!(find_critical_set(&k5, &[0], &[0]).is_err());
        // Every 2-subset of K5 - e is critical only if it spans 3 edges, so the
        // minimal critical set through the missing pair is the whole K5 - e.
        let g = k5_minus_edge();
        let c = find_critical_set(&g, &[0, 1], &[]);
        assert!(matches!(c, Ok(None)));
        let k4 = Graph::complete(4);
        let t = CountTable::new(&k4).unwrap();
        assert!(!t.is_semi_critical(0b1111)); // whole vertex set
        assert!(!t.is_semi_critical(0b0111));
    }

    #[test]
    fn forest_of_nodes() {
        assert!(degree_three_forest_check(&Graph::complete(5)).unwrap());
        assert!(degree_three_forest_check(&Graph::complete(4)).is_err());
    }
}
