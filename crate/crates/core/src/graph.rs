//! Labeled multigraph with loops.
//!
//! Vertices are the dense labels `0..n`. Edges are stored as a symmetric
//! multiplicity matrix; the diagonal holds the loop count of each vertex.
//! A loop counts once toward `|E|` and `i(X)` and twice toward the degree.

use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Largest edge multiplicity representable in one matrix cell.
pub const MAX_MULTIPLICITY: u8 = u8::MAX;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    mult: Vec<u8>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            mult: vec![0; n * n],
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("labels in range");
            }
        }
        g
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    #[inline]
    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        self.mult[u * self.n + v] as usize
    }

    #[inline]
    pub fn loops(&self, v: Vertex) -> usize {
        self.multiplicity(v, v)
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.multiplicity(u, v) > 0
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v < self.n
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex { vertex: v, order: self.n })
        }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let idx = u * self.n + v;
        if self.mult[idx] == MAX_MULTIPLICITY {
            return Err(Error::Multiplicity { u, v });
        }
        self.mult[idx] += 1;
        if u != v {
            self.mult[v * self.n + u] += 1;
        }
        self.m += 1;
        Ok(())
    }

    /// Removes one copy of the edge `uv`.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::EdgeAbsent { u, v });
        }
        self.mult[u * self.n + v] -= 1;
        if u != v {
            self.mult[v * self.n + u] -= 1;
        }
        self.m -= 1;
        Ok(())
    }

    /// Appends a fresh isolated vertex and returns its label (always the old order).
    pub fn add_vertex(&mut self) -> Vertex {
        let n = self.n + 1;
        let mut mult = vec![0u8; n * n];
        for u in 0..self.n {
            mult[u * n..u * n + self.n].copy_from_slice(&self.mult[u * self.n..(u + 1) * self.n]);
        }
        self.mult = mult;
        self.n = n;
        n - 1
    }

    /// Deletes `v` with its incident edges; labels above `v` shift down by one.
    pub fn remove_vertex(&self, v: Vertex) -> Result<Graph> {
        self.check_vertex(v)?;
        let keep: Vec<Vertex> = self.vertices().filter(|&u| u != v).collect();
        Ok(self.induced_subgraph(&keep))
    }

    /// Subgraph induced on `keep`; vertex `keep[i]` becomes label `i`.
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> Graph {
        let k = keep.len();
        let mut g = Graph::empty(k);
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i) {
                let c = self.multiplicity(u, v);
                if c > 0 {
                    g.mult[i * k + j] = c as u8;
                    g.mult[j * k + i] = c as u8;
                    g.m += c;
                }
            }
        }
        g
    }

    /// Image of the graph under `perm`, where vertex `v` is sent to `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length");
        let n = self.n;
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in 0..n {
                g.mult[perm[u] * n + perm[v]] = self.mult[u * n + v];
            }
        }
        g.m = self.m;
        g
    }

    pub fn degree(&self, v: Vertex) -> usize {
        let row = &self.mult[v * self.n..(v + 1) * self.n];
        row.iter().map(|&c| c as usize).sum::<usize>() + self.loops(v)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.vertices().map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.vertices().map(|v| self.degree(v)).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.vertices().map(|v| self.degree(v)).max()
    }

    /// Distinct neighbours of `v`, excluding `v` itself, in increasing order.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        self.vertices()
            .filter(|&u| u != v && self.has_edge(u, v))
            .collect()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.mult.iter().map(|&c| c as usize).max().unwrap_or(0)
    }

    pub fn has_loops(&self) -> bool {
        self.vertices().any(|v| self.loops(v) > 0)
    }

    /// No loops and no repeated pair.
    pub fn is_simple(&self) -> bool {
        for u in 0..self.n {
            if self.loops(u) > 0 {
                return false;
            }
            for v in u + 1..self.n {
                if self.multiplicity(u, v) > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Every edge once per copy, as `(u, v)` with `u <= v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for v in u..self.n {
                for _ in 0..self.multiplicity(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Distinct vertex pairs carrying at least one edge, with their multiplicity.
    pub fn edge_classes(&self) -> Vec<(Vertex, Vertex, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u..self.n {
                let c = self.multiplicity(u, v);
                if c > 0 {
                    out.push((u, v, c));
                }
            }
        }
        out
    }

    /// `i(X)` for `X` given as a bitmask over labels `< 64`.
    pub fn induced_count_mask(&self, mask: u64) -> usize {
        let members: Vec<Vertex> = bits(mask).collect();
        let mut total = 0;
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i..] {
                total += self.multiplicity(u, v);
            }
        }
        total
    }

    /// Number of edges with one end in `a \ b` and the other in `b \ a`.
    pub fn crossing_count(&self, a: &[Vertex], b: &[Vertex]) -> usize {
        let only_a: Vec<Vertex> = a.iter().copied().filter(|v| !b.contains(v)).collect();
        let only_b: Vec<Vertex> = b.iter().copied().filter(|v| !a.contains(v)).collect();
        only_a
            .iter()
            .flat_map(|&u| only_b.iter().map(move |&v| (u, v)))
            .map(|(u, v)| self.multiplicity(u, v))
            .sum()
    }

    /// Connected components of the subgraph induced on `allowed`, each sorted, in
    /// order of their smallest member.
    pub fn components_within(&self, allowed: &[bool]) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if !allowed[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for w in 0..self.n {
                    if allowed[w] && !seen[w] && w != u && self.has_edge(u, w) {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn components(&self) -> Vec<Vec<Vertex>> {
        self.components_within(&vec![true; self.n])
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut g = Graph::empty(n);
        for u in 0..self.n {
            for v in 0..self.n {
                g.mult[u * n + v] = self.mult[u * self.n + v];
            }
        }
        for u in 0..other.n {
            for v in 0..other.n {
                g.mult[(u + self.n) * n + v + self.n] = other.mult[u * other.n + v];
            }
        }
        g.m = self.m + other.m;
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, [", self.n)?;
        for (i, (u, v)) in self.edges().into_iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// Iterates the set bit positions of `mask` in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

pub fn mask_of(vs: &[Vertex]) -> u64 {
    vs.iter().fold(0u64, |acc, &v| acc | (1u64 << v))
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

    proptest! {
        #[test]
        fn degree_sum_is_twice_size(g in arb_multigraph(8, 20)) {
            prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.size());
            prop_assert_eq!(g.induced_count_mask((1u64 << g.order()) - 1), g.size());
        }

        #[test]
        fn removing_a_vertex_drops_its_edges(g in arb_multigraph(8, 20), v in 0usize..8) {
            prop_assume!(v < g.order());
            let h = g.remove_vertex(v).unwrap();
            prop_assert_eq!(h.size(), g.size() + g.loops(v) - g.degree(v));
        }
    }
    use super::*;

    #[test]
    fn loop_counts_once_in_size_twice_in_degree() {
        let g = Graph::from_edges(1, &[(0, 0), (0, 0)]).unwrap();
        assert_eq!(g.size(), 2);
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.induced_count_mask(1), 2);
        assert!(!g.is_simple());
    }

    #[test]
    fn remove_vertex_shifts_labels() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let h = g.remove_vertex(1).unwrap();
        assert_eq!(h.order(), 3);
        assert_eq!(h.edges(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn add_vertex_preserves_edges() {
        let mut g = Graph::complete(3);
        let v = g.add_vertex();
        assert_eq!(v, 3);
        assert_eq!(g.size(), 3);
        assert_eq!(g.degree(3), 0);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn remove_missing_edge_is_error() {
        let mut g = Graph::empty(3);
        assert!(matches!(g.remove_edge(0, 1), Err(Error::EdgeAbsent { .. })));
        assert!(matches!(g.add_edge(0, 7), Err(Error::UnknownVertex { .. })));
    }

    #[test]
    fn crossing_count_ignores_shared_vertices() {
        let g = Graph::complete(4);
        assert_eq!(g.crossing_count(&[0, 1], &[1, 2, 3]), 2);
    }
}
