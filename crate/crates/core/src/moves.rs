//! Vertex moves: 1-extension, X-replacement and their inverses.
//!
//! Forward moves append the new vertex with label `order()`. Inverse moves
//! delete a vertex, so labels above it shift down by one.

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::sums::SumMove;

/// One constructive step, labelled against the graph it is applied to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// Delete `del`, add vertex `v` joined to both ends of `del` and to `z`.
    Extension {
        v: Vertex,
        del: (Vertex, Vertex),
        z: Vertex,
    },
    /// Delete two disjoint edges, add vertex `v` joined to all four ends.
    XReplacement {
        v: Vertex,
        del: [(Vertex, Vertex); 2],
    },
    Sum(SumMove),
}

fn check(g: &Graph, vs: &[Vertex]) -> Result<()> {
    for &v in vs {
        if v >= g.order() {
            return Err(Error::UnknownVertex {
                vertex: v,
                order: g.order(),
            });
        }
    }
    Ok(())
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::MovePrecondition(msg.into())
}

pub fn one_extension(g: &Graph, x: Vertex, y: Vertex, z: Vertex) -> Result<Graph> {
    check(g, &[x, y, z])?;
    if x == y {
        return Err(precondition(format!("1-extension needs a non-loop edge, got {x}-{y}")));
    }
    if !g.has_edge(x, y) {
        return Err(Error::EdgeAbsent { u: x, v: y });
    }
    if z == x || z == y {
        return Err(precondition(format!(
            "third vertex {z} coincides with an end of {x}-{y}"
        )));
    }
    let mut h = g.clone();
    h.remove_edge(x, y)?;
    let v = h.add_vertex();
    for t in [x, y, z] {
        h.add_edge(v, t)?;
    }
    Ok(h)
}

/// Removes the node `v` and joins its neighbours `u` and `w`.
pub fn one_reduction(g: &Graph, v: Vertex, u: Vertex, w: Vertex) -> Result<Graph> {
    check(g, &[v, u, w])?;
    if g.degree(v) != 3 || g.loops(v) > 0 {
        return Err(precondition(format!("vertex {v} is not a node")));
    }
    let nb = g.neighbors(v);
    if u == w || !nb.contains(&u) || !nb.contains(&w) {
        return Err(precondition(format!(
            "{u} and {w} are not two distinct neighbours of {v}"
        )));
    }
    if g.has_edge(u, w) {
        return Err(Error::EdgePresent { u, v: w });
    }
    let mut h = g.remove_vertex(v)?;
    h.add_edge(shift(u, v), shift(w, v))?;
    Ok(h)
}

pub fn x_replacement(g: &Graph, ab: (Vertex, Vertex), cd: (Vertex, Vertex)) -> Result<Graph> {
    let (a, b) = ab;
    let (c, d) = cd;
    check(g, &[a, b, c, d])?;
    let ends = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if ends[i] == ends[j] {
                return Err(precondition(format!(
                    "edges {a}-{b} and {c}-{d} are not vertex-disjoint"
                )));
            }
        }
    }
    for (p, q) in [ab, cd] {
        if !g.has_edge(p, q) {
            return Err(Error::EdgeAbsent { u: p, v: q });
        }
    }
    let mut h = g.clone();
    h.remove_edge(a, b)?;
    h.remove_edge(c, d)?;
    let v = h.add_vertex();
    for t in ends {
        h.add_edge(v, t)?;
    }
    Ok(h)
}

/// Removes the degree-four vertex `v` and adds the pairs of `pairing`.
pub fn inverse_x_replacement(
    g: &Graph,
    v: Vertex,
    pairing: [(Vertex, Vertex); 2],
) -> Result<Graph> {
    let [(a, b), (c, d)] = pairing;
    check(g, &[v, a, b, c, d])?;
    if g.degree(v) != 4 || g.loops(v) > 0 {
        return Err(precondition(format!("vertex {v} does not have degree four")));
    }
    let nb = g.neighbors(v);
    let mut ends = vec![a, b, c, d];
    ends.sort_unstable();
    if nb != ends {
        return Err(precondition(format!(
            "pairing {a}-{b},{c}-{d} does not match the neighbours of {v}"
        )));
    }
    for (p, q) in pairing {
        if g.has_edge(p, q) {
            return Err(Error::EdgePresent { u: p, v: q });
        }
    }
    let mut h = g.remove_vertex(v)?;
    for (p, q) in pairing {
        h.add_edge(shift(p, v), shift(q, v))?;
    }
    Ok(h)
}

/// Label of `u` after vertex `removed` is deleted.
#[inline]
pub fn shift(u: Vertex, removed: Vertex) -> Vertex {
    if u > removed {
        u - 1
    } else {
        u
    }
}

/// The three ways to split four vertices into two pairs, in a fixed order.
pub fn pairings(n: [Vertex; 4]) -> [[(Vertex, Vertex); 2]; 3] {
    let [a, b, c, d] = n;
    [[(a, b), (c, d)], [(a, c), (b, d)], [(a, d), (b, c)]]
}

#[cfg(test)]
mod tests {
    use crate::canon::is_isomorphic;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn extension_keeps_circuits_and_reduction_undoes_it(seed in 0usize..1000, octa in any::<bool>()) {
            let g = if octa { octahedron() } else { Graph::complete(5) };
            let edges = g.edges();
            let (x, y) = edges[seed % edges.len()];
            let z = (0..g.order()).filter(|&t| t != x && t != y).nth(seed / edges.len() % (g.order() - 2)).unwrap();
            let h = one_extension(&g, x, y, z).unwrap();
            prop_assert!(is_circuit(&h));
            let back = one_reduction(&h, h.order() - 1, x, y).unwrap();
            prop_assert!(is_isomorphic(&back, &g).unwrap());
        }

        #[test]
        fn x_replacement_keeps_circuits(i in 0usize..100, j in 0usize..100) {
            let g = octahedron();
            let edges = g.edges();
            let ab = edges[i % edges.len()];
            let cd = edges[j % edges.len()];
            prop_assume!([ab.0, ab.1].iter().all(|v| *v != cd.0 && *v != cd.1));
            let h = x_replacement(&g, ab, cd).unwrap();
            prop_assert!(is_circuit(&h));
            prop_assert_eq!(h.order(), g.order() + 1);
        }
    }
    use super::*;
    use crate::sparsity::is_circuit;

    fn octahedron() -> Graph {
        let mut g = Graph::complete(6);
        for (u, v) in [(0, 1), (2, 3), (4, 5)] {
            g.remove_edge(u, v).unwrap();
        }
        g
    }

    #[test]
    fn extension_round_trip() {
        let k5 = Graph::complete(5);
        let g = one_extension(&k5, 0, 1, 2).unwrap();
        assert_eq!((g.order(), g.size()), (6, 12));
        assert!(is_circuit(&g));
        let back = one_reduction(&g, 5, 0, 1).unwrap();
        assert_eq!(back, k5);
    }

    #[test]
    fn extension_errors() {
        let mut g = Graph::complete(5);
        g.remove_edge(0, 1).unwrap();
        assert!(matches!(one_extension(&g, 0, 1, 2), Err(Error::EdgeAbsent { .. })));
        assert!(one_extension(&g, 0, 2, 2).is_err());
        let k5 = Graph::complete(5);
        let e = one_extension(&k5, 0, 1, 2).unwrap();
        // 0 and 2 are already adjacent.
        assert!(matches!(one_reduction(&e, 5, 0, 2), Err(Error::EdgePresent { .. })));
        assert!(one_reduction(&k5, 0, 1, 2).is_err());
    }

    #[test]
    fn x_replacement_round_trip() {
        let oct = octahedron();
        let g = x_replacement(&oct, (0, 2), (1, 4)).unwrap();
        assert_eq!((g.order(), g.size()), (7, 14));
        assert!(g.degrees().iter().all(|&d| d == 4));
        assert!(is_circuit(&g));
        let back = inverse_x_replacement(&g, 6, [(0, 2), (1, 4)]).unwrap();
        assert_eq!(back, oct);
        assert!(x_replacement(&oct, (0, 2), (2, 4)).is_err());
    }

    #[test]
    fn inverse_x_on_k5_fails() {
        let k5 = Graph::complete(5);
        for p in pairings([1, 2, 3, 4]) {
            assert!(inverse_x_replacement(&k5, 0, p).is_err());
        }
    }
}
