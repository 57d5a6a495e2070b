//! Censuses of small simple circuits: exhaustive over edge subsets of `K_n`,
//! and generative as the closure of the simple bases under the forward moves.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use itertools::Itertools;
use rayon::prelude::*;

use crate::canon::{canonical_form, CanonicalForm};
use crate::catalog::{base_graphs, Family};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::io::to_edge_list;
use crate::moves::{one_extension, x_replacement};
use crate::sparsity::{induced_count, is_circuit};
use crate::sums::{sum_join, GadgetKind, SidePlan, SumCase, SumMove};

/// Largest order either census accepts.
pub const MAX_CENSUS_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Exhaustive,
    Generative,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub n: usize,
    pub classes: BTreeMap<CanonicalForm, Graph>,
    pub provenance: Provenance,
}

impl Census {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Graph> {
        self.classes.values()
    }

    pub fn same_classes(&self, other: &Census) -> bool {
        self.classes.keys().eq(other.classes.keys())
    }

    /// One block per class: `# <form hex>` followed by its edge list.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (f, g) in &self.classes {
            writeln!(out, "# {}", f.to_hex()).expect("string write");
            out.push_str(&to_edge_list(g));
            out.push('\n');
        }
        out
    }
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_CENSUS_ORDER {
        return Err(Error::SizeBound { what: "census", order: n, bound: MAX_CENSUS_ORDER });
    }
    Ok(())
}

/// All classes of simple circuits on exactly `n` vertices, found by testing
/// every `2n`-edge subgraph of `K_n` with minimum degree at least three.
pub fn enumerate_exhaustive(n: usize) -> Result<Census> {
    enumerate_exhaustive_with(n, true)
}

/// As [`enumerate_exhaustive`]; `prune = false` tests every `2n`-subset.
pub fn enumerate_exhaustive_with(n: usize, prune: bool) -> Result<Census> {
    check_order(n)?;
    let pairs: Vec<(Vertex, Vertex)> = (0..n).tuple_combinations().collect();
    let m = 2 * n;
    let mut classes = BTreeMap::new();
    if n > 0 && m <= pairs.len() {
        // Fix the first few edge decisions serially and hand out the rest.
        let split = pairs.len().min(8);
        let prefixes: Vec<u32> = (0..1u32 << split).collect();
        let found: Vec<HashMap<CanonicalForm, Graph>> = prefixes
            .into_par_iter()
            .map(|p| {
                let mut s = Subsets::new(n, &pairs, m, prune);
                let mut ok = true;
                for i in 0..split {
                    if p >> i & 1 == 1 {
                        ok &= s.take(i);
                    } else {
                        ok &= s.skip(i);
                    }
                }
                if ok && s.chosen.len() <= m {
                    s.rec(split);
                }
                s.found
            })
            .collect();
        for f in found {
            classes.extend(f);
        }
    }
    Ok(Census { n, classes, provenance: Provenance::Exhaustive })
}

struct Subsets<'a> {
    n: usize,
    pairs: &'a [(Vertex, Vertex)],
    m: usize,
    prune: bool,
    chosen: Vec<usize>,
    deg: Vec<usize>,
    /// Undecided pairs at each vertex.
    open: Vec<usize>,
    found: HashMap<CanonicalForm, Graph>,
}

impl<'a> Subsets<'a> {
    fn new(n: usize, pairs: &'a [(Vertex, Vertex)], m: usize, prune: bool) -> Self {
        Subsets {
            n,
            pairs,
            m,
            prune,
            chosen: Vec::with_capacity(m),
            deg: vec![0; n],
            open: vec![n - 1; n],
            found: HashMap::new(),
        }
    }

    fn viable(&self, v: Vertex) -> bool {
        !self.prune || self.deg[v] + self.open[v] >= 3
    }

    /// Decides pair `i` as taken; false if that already dooms the branch.
    fn take(&mut self, i: usize) -> bool {
        let (u, v) = self.pairs[i];
        self.chosen.push(i);
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.open[u] -= 1;
        self.open[v] -= 1;
        true
    }

    fn untake(&mut self, i: usize) {
        let (u, v) = self.pairs[i];
        self.chosen.pop();
        self.deg[u] -= 1;
        self.deg[v] -= 1;
        self.open[u] += 1;
        self.open[v] += 1;
    }

    fn skip(&mut self, i: usize) -> bool {
        let (u, v) = self.pairs[i];
        self.open[u] -= 1;
        self.open[v] -= 1;
        self.viable(u) && self.viable(v)
    }

    fn unskip(&mut self, i: usize) {
        let (u, v) = self.pairs[i];
        self.open[u] += 1;
        self.open[v] += 1;
    }

    fn rec(&mut self, i: usize) {
        let left = self.pairs.len() - i;
        let need = self.m - self.chosen.len();
        if need == 0 {
            let edges: Vec<_> = self.chosen.iter().map(|&k| self.pairs[k]).collect();
            let g = Graph::from_edges(self.n, &edges).expect("pairs in range");
            if is_circuit(&g) {
                let f = canonical_form(&g).expect("small");
                self.found.entry(f).or_insert(g);
            }
            return;
        }
        if need > left {
            return;
        }
        self.take(i);
        self.rec(i + 1);
        self.untake(i);
        if self.skip(i) {
            self.rec(i + 1);
        }
        self.unskip(i);
    }
}

/// A gadget found inside a circuit, usable as one part of a sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub kind: GadgetKind,
    /// Outside ends, sorted, one entry per attaching edge (pairs for `Edge`).
    pub cut: Vec<Vertex>,
    pub gadget: Vec<Vertex>,
}

fn outside_ends(g: &Graph, set: &[Vertex]) -> Vec<Vertex> {
    let mut ends = Vec::new();
    for &s in set {
        for t in g.vertices().filter(|t| !set.contains(t)) {
            ends.extend(std::iter::repeat_n(t, g.multiplicity(s, t)));
        }
    }
    ends.sort_unstable();
    ends
}

/// Every gadget occurrence in `g` that a sum could consume.
pub fn gadget_occurrences(g: &Graph) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for (u, v, _) in g.edge_classes() {
        if u != v {
            out.push(Occurrence { kind: GadgetKind::Edge, cut: vec![u, v], gadget: vec![] });
        }
    }
    for v in g.vertices() {
        let nb = g.neighbors(v);
        if g.loops(v) == 0 && (g.degree(v) == 3 || g.degree(v) == 4) && nb.len() == g.degree(v) {
            out.push(Occurrence { kind: GadgetKind::Apex, cut: nb, gadget: vec![v] });
        }
    }
    for k in [4, 5] {
        if g.order() <= k {
            continue;
        }
        for s in g.vertices().combinations(k) {
            let i = induced_count(g, &s).expect("in range");
            let ends = outside_ends(g, &s);
            let d = ends.iter().dedup().count();
            let doubled = ends.len() == 4 && d == 2 && ends[0] == ends[1] && ends[2] == ends[3];
            let kind = match (k, i, ends.len(), d) {
                (4, 5, 4, 1) | (4, 6, 3, 1) => Some(GadgetKind::K5e),
                (4, 6, 4, 2) if doubled => Some(GadgetKind::K4),
                (4, 6, 4, 3) => Some(GadgetKind::K4Edges),
                (5, 9, 4, 2) if doubled => Some(GadgetKind::K5f),
                (5, 9, 3, 3) => Some(GadgetKind::K5f3),
                _ => None,
            };
            if let Some(kind) = kind {
                let cut = match kind {
                    GadgetKind::K5e => vec![ends[0]],
                    GadgetKind::K4 | GadgetKind::K5f => vec![ends[0], ends[2]],
                    _ => ends,
                };
                out.push(Occurrence { kind, cut, gadget: s });
            }
        }
    }
    out
}

fn case_for(ka: GadgetKind, a_cut: usize, kb: GadgetKind, b_cut: usize) -> Option<SumCase> {
    use GadgetKind::*;
    match (ka, kb) {
        (K5e, K5e) => Some(SumCase::One),
        (K4, K4) => Some(SumCase::TwoA),
        (Edge, K5f) => Some(SumCase::TwoB),
        (K4, K5f) => Some(SumCase::Three),
        (Apex, K5f3) if a_cut == 3 => Some(SumCase::Four),
        (Apex | K4Edges, Apex | K4Edges) if a_cut == 4 && b_cut == 4 => Some(SumCase::Five),
        _ => None,
    }
}

/// Order of a sum whose parts have orders `na`, `nb`, gadget sizes `sa`,
/// `sb`, and `cut` cut labels per side.
fn joined_order(case: SumCase, na: usize, sa: usize, nb: usize, sb: usize, cut: usize) -> usize {
    let shared = if case.is_vertex_cut() { cut } else { 0 };
    (na + nb).saturating_sub(sa + sb + shared)
}

/// Every simple circuit obtainable by summing `ga` through `a` with `gb`
/// through `b`, over all pairings of the cut labels.
pub fn join_occurrences(ga: &Graph, a: &Occurrence, gb: &Graph, b: &Occurrence) -> Vec<Graph> {
    let Some(case) = case_for(a.kind, a.cut.len(), b.kind, b.cut.len()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for cut_b in b.cut.iter().copied().permutations(b.cut.len()).unique() {
        let mv = SumMove {
            case,
            cut_a: a.cut.clone(),
            cut_b,
            side_a: SidePlan { kind: a.kind, gadget: a.gadget.clone() },
            side_b: SidePlan { kind: b.kind, gadget: b.gadget.clone() },
        };
        if let Ok(j) = sum_join(&mv, ga, gb) {
            if j.graph.is_simple() && is_circuit(&j.graph) {
                out.push(j.graph);
            }
        }
    }
    out
}

/// Every simple circuit of order at most `max_order` obtainable as a sum of
/// `ga` (side A) and `gb` (side B) through their gadget occurrences.
pub fn sums_of(ga: &Graph, gb: &Graph, max_order: usize) -> Vec<Graph> {
    let oa = gadget_occurrences(ga);
    let ob = gadget_occurrences(gb);
    let mut out = Vec::new();
    for a in &oa {
        for b in &ob {
            let Some(case) = case_for(a.kind, a.cut.len(), b.kind, b.cut.len()) else {
                continue;
            };
            let n = joined_order(case, ga.order(), a.gadget.len(), gb.order(), b.gadget.len(), a.cut.len());
            if n <= max_order {
                out.extend(join_occurrences(ga, a, gb, b));
            }
        }
    }
    out
}

/// How far past the census order the generative closure may go. A sum
/// producing an `n`-vertex circuit can need a part with more than `n`
/// vertices; at seven vertices one circuit has no inverse vertex move and
/// only a sum with a nine-vertex part.
pub const GENERATIVE_HEADROOM: usize = 2;

/// Closure of the simple bases under 1-extension, X-replacement and sums.
/// Vertex moves run up to order `n + GENERATIVE_HEADROOM`, so larger
/// graphs are available as sum parts; sums are kept up to order `n`. The
/// census reports the classes of order exactly `n`.
pub fn enumerate_generative(n: usize) -> Result<Census> {
    enumerate_generative_with(n, n + GENERATIVE_HEADROOM)
}

struct Known {
    graph: Graph,
    occ: Vec<Occurrence>,
}

/// As [`enumerate_generative`] with an explicit order cap for the closure.
pub fn enumerate_generative_with(n: usize, cap: usize) -> Result<Census> {
    check_order(n)?;
    if cap < n {
        return Err(Error::InvalidArgument(format!("closure cap {cap} below census order {n}")));
    }
    let mut known: Vec<Known> = Vec::new();
    let mut forms: HashMap<CanonicalForm, usize> = HashMap::new();
    // (kind, cut length, order) -> occurrences as (graph, occurrence) indices
    let mut index: BTreeMap<(u8, usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    let mut insert = |g: Graph, known: &mut Vec<Known>, index: &mut BTreeMap<_, Vec<_>>| -> Result<bool> {
        let f = canonical_form(&g)?;
        if forms.contains_key(&f) {
            return Ok(false);
        }
        let i = known.len();
        forms.insert(f, i);
        let occ = gadget_occurrences(&g);
        for (k, o) in occ.iter().enumerate() {
            index.entry((o.kind.index() as u8, o.cut.len(), g.order())).or_default().push((i, k));
        }
        known.push(Known { graph: g, occ });
        Ok(true)
    };
    for e in base_graphs(Family::Simple) {
        if e.graph.order() <= cap {
            insert(e.graph, &mut known, &mut index)?;
        }
    }
    let mut done = 0;
    while done < known.len() {
        let batch = done..known.len();
        let keys: Vec<(u8, usize, usize)> = index.keys().copied().collect();
        let produced: Vec<Graph> = batch
            .clone()
            .into_par_iter()
            .flat_map_iter(|i| {
                let g = &known[i];
                let ng = g.graph.order();
                let mut out = vertex_moves(&g.graph, cap);
                for a in &g.occ {
                    let (la, sa) = (a.cut.len(), a.gadget.len());
                    for &key in &keys {
                        let (kb, lb, nb) = (GadgetKind::ALL[key.0 as usize], key.1, key.2);
                        let sb = gadget_size(kb);
                        // Partners are graphs found no later than `g`, in both roles.
                        let partners = || index[&key].iter().filter(|&&(j, _)| j <= i).map(|&(j, k)| (&known[j].graph, &known[j].occ[k]));
                        if let Some(case) = case_for(a.kind, la, kb, lb) {
                            if joined_order(case, ng, sa, nb, sb, la) <= n {
                                for (h, b) in partners() {
                                    out.extend(join_occurrences(&g.graph, a, h, b));
                                }
                            }
                        }
                        if let Some(case) = case_for(kb, lb, a.kind, la) {
                            if joined_order(case, nb, sb, ng, sa, lb) <= n {
                                for (h, b) in partners() {
                                    out.extend(join_occurrences(h, b, &g.graph, a));
                                }
                            }
                        }
                    }
                }
                out.into_iter().filter(|h| h.order() <= cap)
            })
            .collect();
        done = batch.end;
        for g in produced {
            insert(g, &mut known, &mut index)?;
        }
    }
    let classes = known
        .into_iter()
        .filter(|k| k.graph.order() == n)
        .map(|k| (canonical_form(&k.graph).expect("small"), k.graph))
        .collect();
    Ok(Census { n, classes, provenance: Provenance::Generative })
}

fn gadget_size(k: GadgetKind) -> usize {
    match k {
        GadgetKind::Edge => 0,
        GadgetKind::Apex => 1,
        GadgetKind::K5e | GadgetKind::K4 | GadgetKind::K4Edges => 4,
        GadgetKind::K5f | GadgetKind::K5f3 => 5,
    }
}

fn vertex_moves(g: &Graph, n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    if g.order() >= n {
        return out;
    }
    let edges: Vec<(Vertex, Vertex)> = g.edge_classes().into_iter().map(|(u, v, _)| (u, v)).collect();
    for &(x, y) in &edges {
        for z in g.vertices() {
            if let Ok(h) = one_extension(g, x, y, z) {
                if h.is_simple() && is_circuit(&h) {
                    out.push(h);
                }
            }
        }
    }
    for (i, &ab) in edges.iter().enumerate() {
        for &cd in &edges[i + 1..] {
            if let Ok(h) = x_replacement(g, ab, cd) {
                if h.is_simple() && is_circuit(&h) {
                    out.push(h);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_orders() {
        for n in 0..5 {
            assert!(enumerate_exhaustive(n).unwrap().is_empty());
        }
        let c = enumerate_exhaustive(5).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.graphs().next().unwrap(), &Graph::complete(5));
        assert!(enumerate_exhaustive(9).is_err());
    }

    #[test]
    fn pruning_is_lossless_at_six() {
        let a = enumerate_exhaustive_with(6, true).unwrap();
        let b = enumerate_exhaustive_with(6, false).unwrap();
        assert_eq!(a.len(), 4);
        assert!(a.same_classes(&b));
    }

    #[test]
    fn generative_matches_at_six() {
        assert!(enumerate_generative(6).unwrap().same_classes(&enumerate_exhaustive(6).unwrap()));
    }

    #[test]
    fn occurrences_in_s5() {
        let s5 = &crate::catalog::entry("S5").unwrap().graph;
        let occ = gadget_occurrences(s5);
        let k5e: Vec<_> = occ.iter().filter(|o| o.kind == GadgetKind::K5e).collect();
        assert_eq!(k5e.len(), 2);
        assert!(k5e.iter().all(|o| o.cut == vec![4]));
        // The two blocks differ in whether the cut vertex ends the missing
        // edge, so self-joins give three classes, one of them S5.
        let joined = sums_of(s5, s5, 9);
        let forms: std::collections::BTreeSet<_> =
            joined.iter().map(|g| canonical_form(g).unwrap()).collect();
        assert_eq!(forms.len(), 3);
        assert!(forms.contains(&canonical_form(s5).unwrap()));
    }
}
