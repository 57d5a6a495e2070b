//! Base graphs, gadget sides and membership in the multigraph class used by
//! the decomposition.
//!
//! Fixtures are written with the vertex names of their drawings and mapped
//! to dense labels in the listed vertex order.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::canon::{canonical_form, colored_labeling, CanonicalForm};
use crate::connectivity::is_k_connected;
use crate::graph::{Graph, Vertex};
use crate::sparsity::is_circuit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// The eleven simple base graphs.
    Simple,
    /// The thirteen additional multigraph bases `R0..R12`.
    MultiExtra,
}

#[derive(Clone, Debug)]
pub struct BaseEntry {
    pub name: &'static str,
    pub graph: Graph,
    pub family: Family,
}

/// Builds a graph from named vertices and edges between names.
fn named(vertices: &[&str], edges: &[(&str, &str)]) -> Graph {
    let idx: HashMap<&str, Vertex> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut g = Graph::empty(vertices.len());
    for &(u, v) in edges {
        g.add_edge(idx[u], idx[v]).expect("fixture labels");
    }
    g
}

/// Numbered vertices `first..=last`, edges given by number.
fn numbered(first: usize, last: usize, edges: &[(usize, usize)]) -> Graph {
    let mut g = Graph::empty(last - first + 1);
    for &(u, v) in edges {
        g.add_edge(u - first, v - first).expect("fixture labels");
    }
    g
}

fn k5() -> Graph {
    Graph::complete(5)
}

fn g57() -> Graph {
    numbered(1, 6, &[(1, 2), (1, 5), (1, 4), (2, 3), (2, 4), (2, 5), (3, 5), (4, 5), (4, 6), (5, 6), (2, 6), (3, 4)])
}

fn g59() -> Graph {
    numbered(7, 12, &[(7, 9), (9, 11), (8, 10), (10, 12), (7, 8), (9, 10), (11, 12), (11, 10), (9, 8), (7, 10), (9, 12), (7, 11)])
}

/// The reducible six-vertex graph drawn beside the two bases.
pub fn g60() -> Graph {
    numbered(13, 18, &[(13, 14), (13, 15), (13, 16), (14, 15), (14, 16), (15, 17), (15, 18), (16, 17), (16, 18), (18, 17), (13, 18), (14, 18)])
}

fn g293() -> Graph {
    numbered(1, 7, &[(1, 2), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5), (4, 6), (4, 7), (5, 7), (5, 6), (6, 7)])
}

fn g308() -> Graph {
    numbered(8, 14, &[(8, 9), (8, 10), (8, 11), (8, 12), (9, 11), (9, 12), (10, 11), (10, 13), (10, 14), (11, 12), (11, 13), (11, 14), (13, 14), (8, 13)])
}

fn g312() -> Graph {
    numbered(15, 21, &[(20, 17), (17, 16), (15, 19), (19, 21), (19, 17), (17, 18), (18, 16), (21, 17), (17, 15), (21, 20), (20, 19), (15, 16), (18, 21), (18, 15)])
}

fn s1() -> Graph {
    named(
        &["1", "2", "3", "4", "6", "7", "8", "9"],
        &[("1", "2"), ("2", "6"), ("6", "7"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4"), ("4", "8"), ("8", "9"), ("6", "8"), ("6", "9"), ("7", "8"), ("7", "9"), ("1", "7"), ("3", "9")],
    )
}

fn s2() -> Graph {
    numbered(1, 8, &[(1, 2), (2, 3), (3, 4), (5, 6), (6, 7), (7, 8), (1, 5), (2, 6), (3, 7), (4, 8), (1, 6), (2, 5), (3, 8), (4, 7), (2, 4), (6, 8)])
}

fn s3() -> Graph {
    numbered(9, 16, &[(9, 10), (10, 11), (11, 12), (13, 14), (14, 15), (15, 16), (9, 13), (10, 14), (11, 15), (12, 16), (9, 14), (10, 13), (11, 16), (12, 15), (11, 14), (10, 15)])
}

fn s4() -> Graph {
    numbered(17, 24, &[(17, 18), (18, 19), (19, 20), (21, 22), (22, 23), (23, 24), (17, 21), (18, 22), (19, 23), (20, 24), (17, 22), (18, 21), (19, 24), (20, 23), (18, 23), (22, 24)])
}

fn s5() -> Graph {
    let mut e = Vec::new();
    for u in 1..=5 {
        for v in u + 1..=5 {
            if (u, v) != (1, 5) {
                e.push((u, v));
            }
        }
    }
    for u in 5..=9 {
        for v in u + 1..=9 {
            if (u, v) != (8, 9) {
                e.push((u, v));
            }
        }
    }
    numbered(1, 9, &e)
}

fn r_graphs() -> Vec<(&'static str, Graph)> {
    let k5_minus = |missing: (usize, usize), extra: &[(usize, usize)]| {
        let mut e = Vec::new();
        for u in 1..=5 {
            for v in u + 1..=5 {
                if (u, v) != missing {
                    e.push((u, v));
                }
            }
        }
        e.extend_from_slice(extra);
        numbered(1, 5, &e)
    };
    vec![
        ("R0", numbered(1, 1, &[(1, 1), (1, 1)])),
        ("R1", numbered(1, 3, &[(1, 2), (1, 2), (2, 3), (2, 3), (1, 3), (1, 3)])),
        ("R2", numbered(1, 3, &[(1, 2), (2, 3), (1, 3), (1, 3), (1, 3), (2, 2)])),
        ("R3", numbered(1, 3, &[(1, 2), (2, 3), (1, 3), (1, 1), (2, 2), (3, 3)])),
        ("R4", numbered(1, 4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (3, 3), (4, 4)])),
        ("R5", numbered(1, 4, &[(1, 2), (2, 3), (3, 4), (4, 1), (4, 2), (1, 3), (1, 3), (4, 4)])),
        ("R6", numbered(1, 4, &[(1, 2), (2, 3), (3, 4), (4, 1), (4, 2), (1, 3), (1, 3), (1, 3)])),
        ("R7", numbered(1, 4, &[(1, 2), (4, 1), (3, 2), (3, 4), (1, 3), (1, 3), (2, 4), (2, 4)])),
        ("R8", numbered(1, 4, &[(1, 2), (4, 1), (3, 2), (2, 4), (1, 3), (1, 3), (3, 4), (3, 4)])),
        ("R9", k5_minus((1, 5), &[(3, 3)])),
        ("R10", k5_minus((1, 5), &[(1, 1)])),
        ("R11", numbered(1, 5, &[(4, 5), (2, 3), (1, 2), (1, 4), (2, 4), (2, 5), (3, 5), (1, 3), (3, 4), (3, 4)])),
        ("R12", numbered(1, 5, &[(3, 4), (2, 3), (1, 2), (1, 4), (2, 4), (2, 5), (3, 5), (1, 3), (4, 5), (4, 5)])),
    ]
}

/// The gadget side with a `K4` core whose boundary pair attaches twice each.
pub fn t1() -> Graph {
    numbered(1, 6, &[(1, 2), (2, 3), (4, 5), (5, 6), (2, 5), (2, 6), (3, 5), (3, 6), (1, 3), (4, 6)])
}

/// Boundary vertices of [`t1`].
pub const T1_BOUNDARY: [Vertex; 2] = [0, 3];

/// The gadget side with a `K5-e` core whose boundary pair attaches twice each.
pub fn t2() -> Graph {
    numbered(7, 13, &[(7, 8), (8, 9), (9, 10), (11, 12), (12, 13), (13, 10), (12, 10), (8, 10), (13, 8), (13, 9), (12, 9), (7, 9), (11, 13)])
}

/// Boundary vertices of [`t2`].
pub const T2_BOUNDARY: [Vertex; 2] = [0, 4];

/// A 10-vertex, 21-edge transcription of a drawing claimed to be a circuit
/// whose admissible nodes all break 3-connectivity. Its counts cannot make a
/// circuit, so it is only exposed for inspection.
pub fn flagged_ten_vertex_drawing() -> Graph {
    numbered(1, 10, &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 3), (2, 4), (2, 8), (3, 4), (5, 6), (5, 7), (5, 8), (5, 9), (6, 7), (6, 8), (6, 9), (7, 9), (8, 10), (5, 10), (3, 10)])
}

fn build_catalog() -> Vec<BaseEntry> {
    let simple: Vec<(&'static str, Graph)> = vec![
        ("K5", k5()),
        ("G57c", g57()),
        ("G59c", g59()),
        ("G293c", g293()),
        ("G308c", g308()),
        ("G312c", g312()),
        ("S1", s1()),
        ("S2", s2()),
        ("S3", s3()),
        ("S4", s4()),
        ("S5", s5()),
    ];
    simple
        .into_iter()
        .map(|(name, graph)| BaseEntry { name, graph, family: Family::Simple })
        .chain(
            r_graphs()
                .into_iter()
                .map(|(name, graph)| BaseEntry { name, graph, family: Family::MultiExtra }),
        )
        .collect()
}

struct Catalog {
    entries: Vec<BaseEntry>,
    by_form: HashMap<CanonicalForm, usize>,
}

fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| {
        let entries = build_catalog();
        let by_form = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (canonical_form(&e.graph).expect("small"), i))
            .collect();
        Catalog { entries, by_form }
    })
}

pub fn base_graphs(family: Family) -> Vec<BaseEntry> {
    catalog()
        .entries
        .iter()
        .filter(|e| e.family == family)
        .cloned()
        .collect()
}

pub fn all_entries() -> &'static [BaseEntry] {
    &catalog().entries
}

pub fn entry(name: &str) -> Option<&'static BaseEntry> {
    catalog().entries.iter().find(|e| e.name == name)
}

/// The catalog entry isomorphic to `g`, if any.
pub fn is_base(g: &Graph) -> Option<&'static BaseEntry> {
    if g.order() > 9 {
        return None;
    }
    let f = canonical_form(g).ok()?;
    catalog().by_form.get(&f).map(|&i| &catalog().entries[i])
}

/// Like [`is_base`] but restricted to one family.
pub fn is_base_in(g: &Graph, family: Family) -> Option<&'static BaseEntry> {
    is_base(g).filter(|e| e.family == family)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gadget {
    /// `K5-e` hanging from a cut vertex (side given with the cut vertex).
    K5MinusEdge,
    /// Four vertices inducing `K4`.
    K4,
    T1,
    T2,
    /// A single vertex; its neighbours are the boundary.
    Apex,
}

/// How a side matched a gadget: its boundary vertices in the gadget's role order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetMatch {
    pub gadget: Gadget,
    pub boundary: Vec<Vertex>,
}

/// Vertices of `side` with a neighbour outside `side`.
fn boundary_of(g: &Graph, side: &[Vertex]) -> Vec<Vertex> {
    side.iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|u| !side.contains(u)))
        .collect()
}

/// Checks whether `side` is the named gadget, with the boundary wired as the
/// gadget requires.
pub fn recognize_gadget(g: &Graph, side: &[Vertex], kind: Gadget) -> Option<GadgetMatch> {
    let mut side = side.to_vec();
    side.sort_unstable();
    side.dedup();
    if side.iter().any(|&v| v >= g.order()) {
        return None;
    }
    let h = g.induced_subgraph(&side);
    let boundary = boundary_of(g, &side);
    match kind {
        Gadget::Apex => {
            if side.len() != 1 || g.loops(side[0]) > 0 {
                return None;
            }
            Some(GadgetMatch { gadget: kind, boundary: g.neighbors(side[0]) })
        }
        Gadget::K4 => (side.len() == 4 && h == Graph::complete(4))
            .then_some(GadgetMatch { gadget: kind, boundary }),
        Gadget::K5MinusEdge => {
            let mut k = Graph::complete(5);
            k.remove_edge(0, 1).ok()?;
            (side.len() == 5 && h.is_simple() && h.size() == 9 && boundary.len() == 1)
                .then_some(GadgetMatch { gadget: kind, boundary })
        }
        Gadget::T1 | Gadget::T2 => {
            let (pattern, pb) = if kind == Gadget::T1 {
                (t1(), T1_BOUNDARY)
            } else {
                (t2(), T2_BOUNDARY)
            };
            if h.order() != pattern.order() || h.size() != pattern.size() || boundary.len() != 2 {
                return None;
            }
            let local: Vec<Vertex> = boundary
                .iter()
                .map(|b| side.iter().position(|s| s == b).unwrap())
                .collect();
            let mut hc = vec![0u32; h.order()];
            for &l in &local {
                hc[l] = 1;
            }
            let mut pc = vec![0u32; pattern.order()];
            for &l in &pb {
                pc[l] = 1;
            }
            let lh = colored_labeling(&h, &hc).ok()?;
            let lp = colored_labeling(&pattern, &pc).ok()?;
            if lh.form != lp.form {
                return None;
            }
            // Pattern boundary role i sits at some canonical position; read
            // off the side vertex at the same position.
            let pos = lp.position_of();
            let roles = pb.iter().map(|&p| side[lh.order[pos[p]]]).collect();
            Some(GadgetMatch { gadget: kind, boundary: roles })
        }
    }
}

/// Membership in the class of circuits the decomposition works in: simple
/// circuits, plus multigraph circuits that are 3-connected (or have fewer
/// than four vertices), have multiplicity at most three, put multi-edges and
/// loops only on vertices of degree above three, never put a loop on a
/// multi-edge end, and have two loops at a vertex only when it is alone.
pub fn in_class_m(g: &Graph) -> bool {
    if !is_circuit(g) {
        return false;
    }
    if g.is_simple() {
        return true;
    }
    if !(g.order() < 4 || is_k_connected(g, 3)) {
        return false;
    }
    if g.max_multiplicity() > 3 {
        return false;
    }
    for v in g.vertices() {
        let on_multi = g.vertices().any(|u| u != v && g.multiplicity(u, v) > 1);
        if on_multi && g.degree(v) <= 3 {
            return false;
        }
        if g.loops(v) > 0 && (g.degree(v) <= 3 || on_multi) {
            return false;
        }
        if g.loops(v) >= 2 && g.order() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let want = [
            ("K5", 5),
            ("G57c", 6),
            ("G59c", 6),
            ("G293c", 7),
            ("G308c", 7),
            ("G312c", 7),
            ("S1", 8),
            ("S2", 8),
            ("S3", 8),
            ("S4", 8),
            ("S5", 9),
            ("R0", 1),
        ];
        for (name, n) in want {
            let e = entry(name).unwrap();
            assert_eq!(e.graph.order(), n, "{name}");
            assert_eq!(e.graph.size(), 2 * n, "{name}");
        }
    }

    #[test]
    fn degree_sequences_of_six_vertex_bases() {
        let mut d57 = g57().degrees();
        d57.sort_unstable();
        assert_eq!(d57, vec![3, 3, 3, 5, 5, 5]);
        let mut d59 = g59().degrees();
        d59.sort_unstable();
        assert_eq!(d59, vec![3, 3, 4, 4, 5, 5]);
    }

    #[test]
    fn t1_boundary_has_degree_two() {
        let t = t1();
        for b in T1_BOUNDARY {
            assert_eq!(t.degree(b), 2);
        }
        let t = t2();
        for b in T2_BOUNDARY {
            assert_eq!(t.degree(b), 2);
        }
    }

    #[test]
    fn class_m_rejects_loop_on_node() {
        // K5 - e with a loop on one end of the missing edge: that end has
        // degree 5, but a loop on a degree-3 vertex must be rejected.
        assert!(in_class_m(&Graph::from_edges(1, &[(0, 0), (0, 0)]).unwrap()));
        assert!(in_class_m(&Graph::complete(5)));
        let mut g = Graph::complete(4);
        g.add_edge(0, 0).unwrap();
        g.add_edge(1, 1).unwrap();
        // Loops on degree-5 vertices of K4: this is R4.
        assert!(in_class_m(&g));
        // Move one loop to a new pendant-free spot: a loop on a node.
        let mut h = Graph::complete(5);
        h.remove_edge(0, 1).unwrap();
        h.remove_edge(2, 3).unwrap();
        h.add_edge(0, 0).unwrap();
        assert!(!in_class_m(&h) || h.degree(0) > 3);
    }
}
