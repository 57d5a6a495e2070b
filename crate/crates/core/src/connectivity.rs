//! Vertex connectivity, cut vertices and cut pairs, and small edge cuts.
//!
//! Parallel edges and loops never add vertex connectivity. An edge cut is
//! reported as a bipartition `(a, b)` whose sides both induce connected
//! subgraphs, so its crossing edges form a minimal disconnecting set.

use crate::error::{Error, Result};
use crate::graph::{bits, Graph, Vertex};

/// Largest order accepted by the bipartition search in [`nontrivial_edge_cuts`].
pub const MAX_EDGE_CUT_ORDER: usize = 20;

/// Neighbour bitmasks, loops excluded. Requires `order() <= 64`.
pub fn adjacency_masks(g: &Graph) -> Vec<u64> {
    assert!(g.order() <= 64, "bitmask helpers need at most 64 vertices");
    g.vertices()
        .map(|u| {
            g.vertices()
                .filter(|&v| v != u && g.has_edge(u, v))
                .fold(0u64, |m, v| m | (1 << v))
        })
        .collect()
}

/// Whether the vertices of `mask` induce a connected subgraph (false when empty).
pub fn mask_connected(adj: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return false;
    }
    let start = mask & mask.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= adj[v];
        }
        next &= mask & !seen;
        seen |= next;
        frontier = next;
    }
    seen == mask
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// True iff `|V| > k` and deleting fewer than `k` vertices never disconnects `g`.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    let n = g.order();
    if n <= k || n == 0 {
        return false;
    }
    if n > 64 {
        return slow_k_connected(g, k);
    }
    let adj = adjacency_masks(g);
    let all = full_mask(n);
    let mut ok = true;
    for_each_subset_upto(n, k.saturating_sub(1), &mut |s| {
        if ok && !mask_connected(&adj, all & !s) {
            ok = false;
        }
    });
    ok
}

fn slow_k_connected(g: &Graph, k: usize) -> bool {
    let n = g.order();
    let mut ok = true;
    let mut removed = vec![false; n];
    fn rec(g: &Graph, removed: &mut Vec<bool>, from: usize, left: usize, ok: &mut bool) {
        let allowed: Vec<bool> = removed.iter().map(|r| !r).collect();
        if g.components_within(&allowed).len() != 1 {
            *ok = false;
            return;
        }
        if left == 0 {
            return;
        }
        for v in from..g.order() {
            removed[v] = true;
            rec(g, removed, v + 1, left - 1, ok);
            removed[v] = false;
            if !*ok {
                return;
            }
        }
    }
    rec(g, &mut removed, 0, k.saturating_sub(1), &mut ok);
    ok
}

/// Calls `f` on every subset of `0..n` with at most `k` elements.
fn for_each_subset_upto(n: usize, k: usize, f: &mut dyn FnMut(u64)) {
    fn rec(n: usize, from: usize, left: usize, cur: u64, f: &mut dyn FnMut(u64)) {
        f(cur);
        if left == 0 {
            return;
        }
        for v in from..n {
            rec(n, v + 1, left - 1, cur | (1 << v), f);
        }
    }
    rec(n, 0, k, 0, f);
}

/// A separating vertex set with the components left after deleting it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCut {
    pub cut: Vec<Vertex>,
    pub components: Vec<Vec<Vertex>>,
}

impl VertexCut {
    /// Sides `(A, B)` with `A = components[i] + cut` and `B` everything else.
    pub fn sides(&self, i: usize) -> (Vec<Vertex>, Vec<Vertex>) {
        let mut a: Vec<Vertex> = self.components[i].clone();
        let mut b: Vec<Vertex> = self
            .components
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, c)| c.iter().copied())
            .collect();
        a.extend(&self.cut);
        b.extend(&self.cut);
        a.sort_unstable();
        b.sort_unstable();
        (a, b)
    }
}

fn components_without(g: &Graph, removed: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut allowed = vec![true; g.order()];
    for &r in removed {
        allowed[r] = false;
    }
    g.components_within(&allowed)
}

pub fn find_cut_vertices(g: &Graph) -> Vec<VertexCut> {
    g.vertices()
        .filter_map(|x| {
            let comps = components_without(g, &[x]);
            (comps.len() >= 2).then(|| VertexCut {
                cut: vec![x],
                components: comps,
            })
        })
        .collect()
}

/// Separating pairs `{x, y}` (with `x < y`) where neither vertex is a cut vertex.
pub fn find_cut_pairs(g: &Graph) -> Vec<VertexCut> {
    let cutv: Vec<bool> = {
        let mut c = vec![false; g.order()];
        for vc in find_cut_vertices(g) {
            c[vc.cut[0]] = true;
        }
        c
    };
    let mut out = Vec::new();
    for x in g.vertices() {
        for y in x + 1..g.order() {
            if cutv[x] || cutv[y] {
                continue;
            }
            let comps = components_without(g, &[x, y]);
            if comps.len() >= 2 {
                out.push(VertexCut {
                    cut: vec![x, y],
                    components: comps,
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCut {
    /// Crossing edges as `(u, v)` with `u` in `a`, one entry per copy, sorted.
    pub edges: Vec<(Vertex, Vertex)>,
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
    pub trivial: bool,
}

/// Crossing edges of the bipartition `(a, rest)`.
pub fn crossing_edges(g: &Graph, a_mask: u64) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    for u in bits(a_mask) {
        for v in g.vertices() {
            if a_mask & (1 << v) == 0 {
                for _ in 0..g.multiplicity(u, v) {
                    out.push((u, v));
                }
            }
        }
    }
    out
}

/// All edge cuts with at most `k` edges whose sides both have two or more
/// vertices. Side `a` always contains vertex 0. Refuses orders above
/// [`MAX_EDGE_CUT_ORDER`].
pub fn nontrivial_edge_cuts(g: &Graph, k: usize) -> Result<Vec<EdgeCut>> {
    let n = g.order();
    if n > MAX_EDGE_CUT_ORDER {
        return Err(Error::SizeBound {
            what: "edge cut search",
            order: n,
            bound: MAX_EDGE_CUT_ORDER,
        });
    }
    if n < 4 {
        return Ok(Vec::new());
    }
    let adj = adjacency_masks(g);
    let all = full_mask(n);
    let mut out = Vec::new();
    // Vertex 0 is fixed in `a`; iterate over the remaining n-1 membership bits.
    for rest in 0..(1u64 << (n - 1)) {
        let a = (rest << 1) | 1;
        let b = all & !a;
        if a.count_ones() < 2 || b.count_ones() < 2 {
            continue;
        }
        let mut d = 0;
        for u in bits(a) {
            d += bits(b).map(|v| g.multiplicity(u, v)).sum::<usize>();
            if d > k {
                break;
            }
        }
        if d > k || !mask_connected(&adj, a) || !mask_connected(&adj, b) {
            continue;
        }
        out.push(EdgeCut {
            edges: crossing_edges(g, a),
            a: bits(a).collect(),
            b: bits(b).collect(),
            trivial: false,
        });
    }
    Ok(out)
}

/// No non-trivial edge cut with fewer than `k` edges.
pub fn is_essentially_k_edge_connected(g: &Graph, k: usize) -> Result<bool> {
    Ok(nontrivial_edge_cuts(g, k.saturating_sub(1))?.is_empty())
}

/// No single edge disconnects `g` (and `g` is connected).
pub fn is_two_edge_connected(g: &Graph) -> bool {
    if !g.is_connected() {
        return false;
    }
    for (u, v, c) in g.edge_classes() {
        if u != v && c == 1 {
            let mut h = g.clone();
            h.remove_edge(u, v).expect("present");
            if !h.is_connected() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn complete_and_cycle() {
        assert!(is_k_connected(&Graph::complete(5), 3));
        assert!(!is_k_connected(&Graph::complete(3), 3));
        assert!(is_k_connected(&cycle(6), 2));
        assert!(!is_k_connected(&cycle(6), 3));
        assert!(!is_k_connected(&Graph::empty(0), 1));
    }

    #[test]
    fn k5_has_no_cuts() {
        let k5 = Graph::complete(5);
        assert!(find_cut_vertices(&k5).is_empty());
        assert!(find_cut_pairs(&k5).is_empty());
        assert!(nontrivial_edge_cuts(&k5, 4).unwrap().is_empty());
    }

    #[test]
    fn two_k4_blocks_on_a_nonadjacent_pair() {
        // K4 on {0,1,2,3} minus 0-1, and K4 on {0,1,4,5} minus 0-1.
        let g = Graph::from_edges(
            6,
            &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (0, 5), (1, 4), (1, 5), (4, 5)],
        )
        .unwrap();
        let pairs = find_cut_pairs(&g);
        assert!(pairs.iter().any(|p| p.cut == vec![0, 1]));
        let (a, b) = pairs.iter().find(|p| p.cut == vec![0, 1]).unwrap().sides(0);
        assert_eq!(a, vec![0, 1, 2, 3]);
        assert_eq!(b, vec![0, 1, 4, 5]);
    }

    #[test]
    fn refuses_large_edge_cut_search() {
        assert!(nontrivial_edge_cuts(&Graph::empty(21), 3).is_err());
    }

    #[test]
    fn prism_three_edge_cut() {
        let prism = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let cuts = nontrivial_edge_cuts(&prism, 3).unwrap();
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].a, vec![0, 1, 2]);
        assert_eq!(cuts[0].edges, vec![(0, 3), (1, 4), (2, 5)]);
    }
}
