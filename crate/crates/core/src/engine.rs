//! Decomposition of circuits into base graphs.
//!
//! Every step is attempt-and-verify: a candidate move is performed and kept
//! only if the result passes the circuit test (and stays simple, or stays in
//! the multigraph class). Search order is fixed so certificates are
//! reproducible.

use std::collections::{HashMap, HashSet};

use crate::canon::{canonical_form, find_isomorphism, CanonicalForm};
use crate::catalog::{in_class_m, is_base, recognize_gadget, BaseEntry, Family, Gadget};
use crate::certificate::{CertNode, Certificate};
use crate::connectivity::{
    adjacency_masks, crossing_edges, find_cut_pairs, find_cut_vertices, is_k_connected, mask_connected,
    nontrivial_edge_cuts,    MAX_EDGE_CUT_ORDER,
};
use crate::error::{Error, Result};
use crate::graph::{bits, mask_of, Graph, Vertex};
use crate::moves::{inverse_x_replacement, one_reduction, pairings, shift, Move};
use crate::sparsity::{induced_count, is_circuit};
use crate::sums::{
    k4_assignments, k5_variants, k5f3_variants, split_join_iso, sum_join, sum_split, Cut, Separation, Split, SplitOptions, SumCase,
    GadgetKind,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Simple circuits, every intermediate simple, leaves among the simple bases.
    #[default]
    Simple,
    /// Circuits of the multigraph class, leaves among all bases.
    Multigraph,
    /// Simple and 2-connected throughout, leaves among the 2-connected
    /// simple bases.
    TwoConnected,
}

impl Mode {
    pub fn for_graph(g: &Graph) -> Mode {
        if g.is_simple() {
            Mode::Simple
        } else {
            Mode::Multigraph
        }
    }

    fn accepts(self, h: &Graph) -> bool {
        match self {
            Mode::Simple => h.is_simple() && is_circuit(h),
            Mode::Multigraph => in_class_m(h),
            Mode::TwoConnected => h.is_simple() && is_k_connected(h, 2) && is_circuit(h),
        }
    }

    fn base(self, g: &Graph) -> Option<&'static BaseEntry> {
        is_base(g).filter(|e| match self {
            Mode::Simple => e.family == Family::Simple,
            Mode::Multigraph => true,
            Mode::TwoConnected => e.family == Family::Simple && is_k_connected(g, 2),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeReduction {
    pub v: Vertex,
    /// The new edge, `u < w`.
    pub u: Vertex,
    pub w: Vertex,
    /// Third neighbour of `v`.
    pub z: Vertex,
    pub graph: Graph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree4Reduction {
    pub v: Vertex,
    pub pairing: [(Vertex, Vertex); 2],
    pub graph: Graph,
}

/// Every admissible 1-reduction, by node then by neighbour pair.
pub fn admissible_nodes(g: &Graph, mode: Mode) -> Vec<NodeReduction> {
    let mut out = Vec::new();
    for v in g.vertices() {
        if g.degree(v) != 3 || g.loops(v) > 0 {
            continue;
        }
        let nb = g.neighbors(v);
        if nb.len() != 3 {
            continue;
        }
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            let (u, w, z) = (nb[i], nb[j], nb[k]);
            if g.has_edge(u, w) {
                continue;
            }
            if let Ok(h) = one_reduction(g, v, u, w) {
                if mode.accepts(&h) {
                    out.push(NodeReduction { v, u, w, z, graph: h });
                }
            }
        }
    }
    out
}

pub fn find_admissible_node(g: &Graph) -> Option<NodeReduction> {
    admissible_nodes(g, Mode::for_graph(g)).into_iter().next()
}

/// Every admissible inverse X-replacement, by vertex then by pairing.
pub fn admissible_degree4(g: &Graph, mode: Mode) -> Vec<Degree4Reduction> {
    let mut out = Vec::new();
    for v in g.vertices() {
        if g.degree(v) != 4 || g.loops(v) > 0 {
            continue;
        }
        let nb = g.neighbors(v);
        if nb.len() != 4 {
            continue;
        }
        for p in pairings([nb[0], nb[1], nb[2], nb[3]]) {
            if let Ok(h) = inverse_x_replacement(g, v, p) {
                if mode.accepts(&h) {
                    out.push(Degree4Reduction { v, pairing: p, graph: h });
                }
            }
        }
    }
    out
}

pub fn find_admissible_degree4(g: &Graph) -> Option<Degree4Reduction> {
    admissible_degree4(g, Mode::for_graph(g)).into_iter().next()
}

fn slack(g: &Graph, side: &[Vertex]) -> i64 {
    2 * side.len() as i64 - induced_count(g, side).expect("in range") as i64
}

fn vertex_separation(g: &Graph, case: SumCase, a: Vec<Vertex>, b: Vec<Vertex>, cut: Vec<Vertex>) -> Separation {
    let counts = (
        induced_count(g, &a).expect("in range"),
        induced_count(g, &b).expect("in range"),
    );
    Separation { case, a, b, cut: Cut::Vertices(cut), counts }
}

fn edge_separation(g: &Graph, case: SumCase, a: Vec<Vertex>, b: Vec<Vertex>) -> Separation {
    let mut e = crossing_edges(g, mask_of(&a));
    e.sort_unstable();
    let counts = (
        induced_count(g, &a).expect("in range"),
        induced_count(g, &b).expect("in range"),
    );
    Separation { case, a, b, cut: Cut::Edges(e), counts }
}

fn distinct_count(v: impl Iterator<Item = Vertex>) -> usize {
    v.collect::<HashSet<_>>().len()
}

/// All separations of a circuit that fit one of the sum cases, in priority
/// order: cut vertices, cut pairs, 3-edge cuts, 4-edge cuts. Edge cuts are
/// only searched up to [`MAX_EDGE_CUT_ORDER`] vertices.
pub fn classify_separation(g: &Graph) -> Result<Vec<Separation>> {
    if !is_circuit(g) {
        return Err(Error::NotCircuit);
    }
    let mut out = Vec::new();
    for vc in find_cut_vertices(g) {
        let k = if vc.components.len() == 2 { 1 } else { vc.components.len() };
        for i in 0..k {
            let (a, b) = vc.sides(i);
            if (slack(g, &a), slack(g, &b)) == (1, 1) {
                out.push(vertex_separation(g, SumCase::One, a, b, vc.cut.clone()));
            }
        }
    }
    for vc in find_cut_pairs(g) {
        let (x, y) = (vc.cut[0], vc.cut[1]);
        let adjacent = g.has_edge(x, y);
        let k = if vc.components.len() == 2 { 1 } else { vc.components.len() };
        for i in 0..k {
            let (a, b) = vc.sides(i);
            let (sa, sb) = (slack(g, &a), slack(g, &b));
            let sep = match (adjacent, sa, sb) {
                (false, 2, 2) => Some((SumCase::TwoA, a, b)),
                (false, 1, 3) => Some((SumCase::TwoB, a, b)),
                (false, 3, 1) => Some((SumCase::TwoB, b, a)),
                (true, 1, 2) => Some((SumCase::Three, a, b)),
                (true, 2, 1) => Some((SumCase::Three, b, a)),
                _ => None,
            };
            if let Some((case, a, b)) = sep {
                out.push(vertex_separation(g, case, a, b, vc.cut.clone()));
            }
        }
    }
    if g.order() > MAX_EDGE_CUT_ORDER {
        return Ok(out);
    }
    for c in nontrivial_edge_cuts(g, 4)? {
        out.extend(edge_cut_separation(g, &c.a, &c.b));
    }
    Ok(out)
}

/// The case-4 or case-5 separation across the edge cut `(a, b)`, if the
/// cut size, distinct ends and counts fit.
fn edge_cut_separation(g: &Graph, a: &[Vertex], b: &[Vertex]) -> Option<Separation> {
    let edges = crossing_edges(g, mask_of(a));
    match edges.len() {
        3 => {
            if distinct_count(edges.iter().flat_map(|&(u, v)| [u, v])) != 6 {
                return None;
            }
            match (slack(g, a), slack(g, b)) {
                (1, 2) => Some(edge_separation(g, SumCase::Four, a.to_vec(), b.to_vec())),
                (2, 1) => Some(edge_separation(g, SumCase::Four, b.to_vec(), a.to_vec())),
                _ => None,
            }
        }
        4 => {
            let ea = distinct_count(edges.iter().map(|e| e.0));
            let eb = distinct_count(edges.iter().map(|e| e.1));
            (ea >= 3 && eb >= 3 && (slack(g, a), slack(g, b)) == (2, 2))
                .then(|| edge_separation(g, SumCase::Five, a.to_vec(), b.to_vec()))
        }
        _ => None,
    }
}

/// Largest order for which [`relaxed_separations`] scans every bipartition.
const MAX_RELAXED_EDGE_CUT_ORDER: usize = 18;

/// Separations the strict search skips: cut pairs containing a cut vertex,
/// sides made of several components of `G - cut`, and edge cuts with a
/// disconnected side. The join does not
/// depend on either restriction, so the engine tries these as a fallback.
fn relaxed_separations(g: &Graph) -> Vec<Separation> {
    let n = g.order();
    let mut out = Vec::new();
    let mut cuts: Vec<Vec<Vertex>> = (0..n).map(|x| vec![x]).collect();
    cuts.extend((0..n).flat_map(|x| (x + 1..n).map(move |y| vec![x, y])));
    for cut in cuts {
        let mut allowed = vec![true; n];
        for &c in &cut {
            allowed[c] = false;
        }
        let comps = g.components_within(&allowed);
        let k = comps.len();
        if !(2..=12).contains(&k) {
            continue;
        }
        // Component 0 always lies in B, so each bipartition appears once.
        for sub in 1u32..(1 << (k - 1)) {
            let mut a = cut.clone();
            let mut b = cut.clone();
            for (i, c) in comps.iter().enumerate() {
                if i > 0 && sub & (1 << (i - 1)) != 0 { a.extend(c) } else { b.extend(c) }
            }
            a.sort_unstable();
            b.sort_unstable();
            let (sa, sb) = (slack(g, &a), slack(g, &b));
            let sep = match (cut.len(), g.has_edge(cut[0], *cut.last().expect("nonempty")), sa, sb) {
                (1, _, 1, 1) => Some((SumCase::One, a, b)),
                (2, false, 2, 2) => Some((SumCase::TwoA, a, b)),
                (2, false, 1, 3) => Some((SumCase::TwoB, a, b)),
                (2, false, 3, 1) => Some((SumCase::TwoB, b, a)),
                (2, true, 1, 2) => Some((SumCase::Three, a, b)),
                (2, true, 2, 1) => Some((SumCase::Three, b, a)),
                _ => None,
            };
            if let Some((case, a, b)) = sep {
                out.push(vertex_separation(g, case, a, b, cut.clone()));
            }
        }
    }
    if n <= MAX_RELAXED_EDGE_CUT_ORDER {
        // Edge cuts with a disconnected side; vertex 0 stays in `a`.
        let adj = adjacency_masks(g);
        let all = (1u64 << n) - 1;
        for rest in 0..(1u64 << (n - 1)) {
            let a = (rest << 1) | 1;
            let b = all & !a;
            if a.count_ones() < 2 || b.count_ones() < 2 {
                continue;
            }
            // Adjacency counts each neighbour once, so this never overcounts.
            let d: u32 = bits(a).map(|u| (adj[u] & b).count_ones()).sum();
            if d > 4 || (mask_connected(&adj, a) && mask_connected(&adj, b)) {
                continue;
            }
            let (av, bv): (Vec<Vertex>, Vec<Vertex>) = (bits(a).collect(), bits(b).collect());
            out.extend(edge_cut_separation(g, &av, &bv));
        }
    }
    out
}

/// The multigraph of the cut-vertex argument: every pendant `K5-e` becomes a
/// loop at its cut vertex, every `T1` side a double edge and every `T2` side
/// a triple edge on its cut pair.
pub fn gstar_construct(g: &Graph) -> Result<Graph> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if !is_circuit(g) {
        return Err(Error::NotCircuit);
    }
    let violation = |m: String| Err(Error::MovePrecondition(m));
    for vc in find_cut_vertices(g) {
        if pendant_k5e(g, &vc.cut, &vc.components).is_none() {
            return violation(format!("cut vertex {} has no K5-e side", vc.cut[0]));
        }
    }
    for vc in find_cut_pairs(g) {
        if g.has_edge(vc.cut[0], vc.cut[1]) {
            return violation(format!("cut pair {}-{} is adjacent", vc.cut[0], vc.cut[1]));
        }
        if t_side(g, &vc.cut, &vc.components).is_none() {
            return violation(format!("cut pair {}-{} has no T1 or T2 side", vc.cut[0], vc.cut[1]));
        }
    }
    let mut h = g.clone();
    loop {
        let mut replaced = false;
        for vc in find_cut_vertices(&h) {
            if let Some(c) = pendant_k5e(&h, &vc.cut, &vc.components) {
                let x = vc.cut[0];
                h = substitute(&h, &c, x, x, 1);
                replaced = true;
                break;
            }
        }
        if !replaced {
            for vc in find_cut_pairs(&h) {
                if let Some((c, mult)) = t_side(&h, &vc.cut, &vc.components) {
                    h = substitute(&h, &c, vc.cut[0], vc.cut[1], mult);
                    replaced = true;
                    break;
                }
            }
        }
        if !replaced {
            break;
        }
    }
    Ok(h)
}

fn pendant_k5e(g: &Graph, cut: &[Vertex], comps: &[Vec<Vertex>]) -> Option<Vec<Vertex>> {
    comps
        .iter()
        .find(|c| {
            let mut side = (*c).clone();
            side.extend(cut);
            c.len() == 4 && recognize_gadget(g, &side, Gadget::K5MinusEdge).is_some()
        })
        .cloned()
}

fn t_side(g: &Graph, cut: &[Vertex], comps: &[Vec<Vertex>]) -> Option<(Vec<Vertex>, usize)> {
    for c in comps {
        let mut side = c.clone();
        side.extend(cut);
        for (kind, mult) in [(Gadget::T1, 2), (Gadget::T2, 3)] {
            if recognize_gadget(g, &side, kind).is_some() {
                return Some((c.clone(), mult));
            }
        }
    }
    None
}

/// Deletes `comp` and adds `mult` copies of `xy`.
fn substitute(g: &Graph, comp: &[Vertex], x: Vertex, y: Vertex, mult: usize) -> Graph {
    let keep: Vec<Vertex> = g.vertices().filter(|v| !comp.contains(v)).collect();
    let mut h = g.induced_subgraph(&keep);
    let px = keep.iter().position(|&v| v == x).expect("kept");
    let py = keep.iter().position(|&v| v == y).expect("kept");
    for _ in 0..mult {
        h.add_edge(px, py).expect("in range");
    }
    h
}

/// One step of the decomposition.
#[derive(Clone, Debug)]
pub enum Step {
    Base(&'static BaseEntry),
    /// An inverse move (labelled against the input) and its result.
    Reduction(Move, Graph),
    Split(Box<Split>),
}

fn progressing(g: &Graph, s: &Split) -> bool {
    s.ga.order() < g.order() && s.gb.order() < g.order()
}

/// Split choices for a separation: every missing-edge variant of a `K5`
/// gadget, and for case 5 every `K4` assignment on each side whose cut ends
/// have three distinct vertices.
pub(crate) fn split_options(sep: &Separation) -> Vec<SplitOptions> {
    let variants = |k: GadgetKind| 0..k5_variants(k).len();
    let pairs: Vec<[usize; 2]> = match sep.case {
        SumCase::One => variants(GadgetKind::K5e)
            .flat_map(|a| variants(GadgetKind::K5e).map(move |b| [a, b]))
            .collect(),
        SumCase::TwoB | SumCase::Three => variants(GadgetKind::K5f).map(|b| [0, b]).collect(),
        SumCase::Four => (0..k5f3_variants().len()).map(|b| [0, b]).collect(),
        SumCase::TwoA | SumCase::Five => vec![[0, 0]],
    };
    let mut assignments = vec![[None, None]];
    if sep.case == SumCase::Five {
        let e = sep.cut_edges();
        let side = |ends: Vec<Vertex>| -> Vec<Option<[usize; 4]>> {
            if distinct_count(ends.iter().copied()) == 3 {
                k4_assignments(&ends).into_iter().map(Some).collect()
            } else {
                vec![None]
            }
        };
        let ra = side(e.iter().map(|&(x, _)| x).collect());
        let rb = side(e.iter().map(|&(_, y)| y).collect());
        assignments = ra.iter().flat_map(|&a| rb.iter().map(move |&b| [a, b])).collect();
    }
    pairs
        .iter()
        .flat_map(|&v| {
            assignments.iter().map(move |&r| SplitOptions { k4_assignment: r, k5_variant: v })
        })
        .collect()
}

/// Every split of `g` along a strict or relaxed separation, under every
/// gadget choice, whose parts `mode` accepts.
pub fn splits(g: &Graph, mode: Mode) -> Result<Vec<Split>> {
    let mut out = Vec::new();
    let mut seps = classify_separation(g)?;
    for sep in relaxed_separations(g) {
        if !seps.iter().any(|s| s.case == sep.case && s.a == sep.a && s.b == sep.b) {
            seps.push(sep);
        }
    }
    for sep in seps {
        for opts in split_options(&sep) {
            if let Ok(s) = sum_split(g, &sep, &opts) {
                if mode.accepts(&s.ga) && mode.accepts(&s.gb) {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

/// Candidate steps in search order: base, admissible nodes, admissible
/// degree-4 vertices, splits with both parts smaller, other splits. For a
/// 2-connected graph, steps keeping every result 2-connected go first
/// within each group. Steps whose results repeat an earlier step up to
/// isomorphism are dropped.
fn candidates(g: &Graph, mode: Mode) -> Result<Vec<Step>> {
    if let Some(e) = mode.base(g) {
        return Ok(vec![Step::Base(e)]);
    }
    let mut out: Vec<Step> = Vec::new();
    let mut seen = HashSet::new();
    for r in admissible_nodes(g, mode) {
        if seen.insert(canonical_form(&r.graph)?) {
            let mv = Move::Extension { v: r.v, del: (r.u, r.w), z: r.z };
            out.push(Step::Reduction(mv, r.graph));
        }
    }
    for r in admissible_degree4(g, mode) {
        if seen.insert(canonical_form(&r.graph)?) {
            out.push(Step::Reduction(Move::XReplacement { v: r.v, del: r.pairing }, r.graph));
        }
    }
    let two_connected = is_k_connected(g, 2);
    let keeps = |h: &Graph| !two_connected || is_k_connected(h, 2);
    if !out.is_empty() {
        out.sort_by_key(|st| matches!(st, Step::Reduction(_, h) if !keeps(h)));
        return Ok(out);
    }
    let mut pairs = HashSet::new();
    let mut unique = Vec::new();
    for s in splits(g, mode)? {
        let (fa, fb) = (canonical_form(&s.ga)?, canonical_form(&s.gb)?);
        if pairs.insert(if fa <= fb { (fa, fb) } else { (fb, fa) }) {
            unique.push(s);
        }
    }
    let (mut good, mut rest): (Vec<Split>, Vec<Split>) = unique.into_iter().partition(|s| progressing(g, s));
    for group in [&mut good, &mut rest] {
        group.sort_by_key(|s| !(keeps(&s.ga) && keeps(&s.gb)));
    }
    out.extend(good.into_iter().chain(rest).map(|s| Step::Split(Box::new(s))));
    Ok(out)
}

/// The first applicable step, or a theorem-violation diagnostic.
pub fn reduce_step(g: &Graph, mode: Mode) -> Result<Step> {
    check_input(g, mode)?;
    candidates(g, mode)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::TheoremViolation(format!("no admissible move or split on {g:?}")))
}

fn check_input(g: &Graph, mode: Mode) -> Result<()> {
    if mode != Mode::Multigraph && !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if mode == Mode::TwoConnected && is_circuit(g) && !is_k_connected(g, 2) {
        return Err(Error::InvalidArgument("two-connected mode needs a 2-connected circuit".into()));
    }
    if !mode.accepts(g) {
        return Err(Error::NotCircuit);
    }
    Ok(())
}

/// Bounds on the decomposition search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// How many non-shrinking splits a branch may take.
    pub non_shrinking: usize,
    /// Split parts may exceed the graph being split by at most this many vertices.
    pub growth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { non_shrinking: 4, growth: 5 }
    }
}

/// A decomposed graph: its certificate tree, the graph that tree replays to,
/// and an isomorphism from the input onto the replayed graph.
#[derive(Clone)]
struct Decomposed {
    node: CertNode,
    replayed: Graph,
    iso: Vec<Vertex>,
}

struct Search {
    mode: Mode,
    /// Growth allowance of the current deepening round.
    growth: usize,
    ancestors: Vec<CanonicalForm>,
    /// Largest (budget, growth) with which a form is known to fail.
    failed: HashMap<CanonicalForm, (usize, usize)>,
    /// Set when the current subtree was pruned by the ancestor guard.
    cut_short: bool,
    solved: HashMap<CanonicalForm, Decomposed>,
}

impl Search {
    fn run(&mut self, g: &Graph, budget: usize) -> Result<Option<Decomposed>> {
        let form = canonical_form(g)?;
        if let Some(d) = self.solved.get(&form) {
            let iso = find_isomorphism(g, &d.replayed)?.expect("same canonical form");
            return Ok(Some(Decomposed { iso, ..d.clone() }));
        }
        if self.ancestors.contains(&form) {
            self.cut_short = true;
            return Ok(None);
        }
        if self.failed.get(&form).is_some_and(|&(b, gr)| b >= budget && gr >= self.growth) {
            return Ok(None);
        }
        let outer = std::mem::replace(&mut self.cut_short, false);
        self.ancestors.push(form.clone());
        let r = self.try_steps(g, budget);
        self.ancestors.pop();
        let r = r?;
        // A failure that depended on the ancestor guard may succeed elsewhere.
        if let Some(d) = &r {
            self.solved.insert(form.clone(), d.clone());
        }
        if r.is_none() && !self.cut_short {
            let e = self.failed.entry(form).or_insert((0, 0));
            if e.1 < self.growth {
                *e = (budget, self.growth);
            } else {
                e.0 = e.0.max(budget);
            }
        }
        self.cut_short |= outer;
        Ok(r)
    }

    fn try_steps(&mut self, g: &Graph, budget: usize) -> Result<Option<Decomposed>> {
        for step in candidates(g, self.mode)? {
            if let Some(d) = self.apply(g, step, budget)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    fn child_budget(&self, g: &Graph, part: &Graph, budget: usize) -> Option<usize> {
        if part.order() < g.order() {
            Some(budget)
        } else if budget > 0 && part.order() <= g.order() + self.growth {
            Some(budget - 1)
        } else {
            None
        }
    }

    fn apply(&mut self, g: &Graph, step: Step, budget: usize) -> Result<Option<Decomposed>> {
        match step {
            Step::Base(e) => {
                let iso = find_isomorphism(g, &e.graph)?.expect("base match is isomorphic");
                Ok(Some(Decomposed {
                    node: CertNode::Base(e.name.to_string()),
                    replayed: e.graph.clone(),
                    iso,
                }))
            }
            Step::Reduction(mv, h) => {
                let Some(child) = self.run(&h, budget)? else {
                    return Ok(None);
                };
                let r = &child.replayed;
                let n = r.order();
                let at = |t: Vertex, v: Vertex| child.iso[shift(t, v)];
                let (fwd, replayed, v) = match mv {
                    Move::Extension { v, del: (u, w), z } => {
                        let (p, q, zz) = (at(u, v), at(w, v), at(z, v));
                        let out = crate::moves::one_extension(r, p, q, zz)?;
                        (Move::Extension { v: n, del: (p, q), z: zz }, out, v)
                    }
                    Move::XReplacement { v, del: [(a, b), (c, d)] } => {
                        let p = [(at(a, v), at(b, v)), (at(c, v), at(d, v))];
                        let out = crate::moves::x_replacement(r, p[0], p[1])?;
                        (Move::XReplacement { v: n, del: p }, out, v)
                    }
                    Move::Sum(_) => unreachable!("reductions are vertex moves"),
                };
                let iso = g.vertices().map(|t| if t == v { n } else { at(t, v) }).collect();
                Ok(Some(Decomposed {
                    node: CertNode::Move(fwd, vec![child.node]),
                    replayed,
                    iso,
                }))
            }
            Step::Split(s) => {
                let (Some(ba), Some(bb)) = (
                    self.child_budget(g, &s.ga, budget),
                    self.child_budget(g, &s.gb, budget),
                ) else {
                    return Ok(None);
                };
                let Some(da) = self.run(&s.ga, ba)? else {
                    return Ok(None);
                };
                let Some(db) = self.run(&s.gb, bb)? else {
                    return Ok(None);
                };
                let mv = s.mv.relabeled(&da.iso, &db.iso);
                let joined = sum_join(&mv, &da.replayed, &db.replayed)?;
                // Compose: g -> part -> replayed part -> joined.
                let relabeled = Split {
                    map_a: s.map_a.iter().map(|p| p.map(|p| da.iso[p])).collect(),
                    map_b: s.map_b.iter().map(|p| p.map(|p| db.iso[p])).collect(),
                    ..*s
                };
                let iso = split_join_iso(&relabeled, &joined);
                Ok(Some(Decomposed {
                    node: CertNode::Move(Move::Sum(mv), vec![da.node, db.node]),
                    replayed: joined.graph,
                    iso,
                }))
            }
        }
    }
}

/// Builds a certificate for `g`, in simple mode for simple input and
/// multigraph mode otherwise.
pub fn decompose(g: &Graph) -> Result<Certificate> {
    decompose_with(g, Mode::for_graph(g))
}

pub fn decompose_with(g: &Graph, mode: Mode) -> Result<Certificate> {
    decompose_limited(g, mode, Limits::default())
}

pub fn decompose_limited(g: &Graph, mode: Mode, limits: Limits) -> Result<Certificate> {
    check_input(g, mode)?;
    let mut search = Search {
        mode,
        growth: 0,
        ancestors: Vec::new(),
        failed: HashMap::new(),
        cut_short: false,
        solved: HashMap::new(),
    };
    // Iterative deepening on both bounds: most circuits need few
    // non-shrinking splits, and wide growth makes each round expensive.
    let mut found = None;
    for budget in 0..=limits.non_shrinking {
        search.growth = (budget + 1).min(limits.growth);
        found = search.run(g, budget)?;
        if found.is_some() {
            break;
        }
    }
    match found {
        Some(d) => {
            debug_assert_eq!(
                canonical_form(&d.replayed)?,
                canonical_form(g)?,
                "replayed graph differs"
            );
            Ok(Certificate {
                root: canonical_form(g)?,
                tree: d.node,
            })
        }
        None => Err(Error::TheoremViolation(format!(
            "no decomposition found for {g:?}"
        ))),
    }
}

/// Outcome of [`derivability`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivability {
    Derivable,
    /// Every graph reachable backwards through the implemented moves was
    /// explored, and none of them leads to a base graph.
    NotDerivable { classes: usize },
    /// The exploration hit its order or class bound.
    Unknown { classes: usize },
}

/// Decides derivability exactly, relative to the implemented moves, by
/// exploring every reduction and every split part reachable from `g`
/// (graphs the bounded search already decomposes are not expanded), then
/// solving the resulting and-or graph as a least fixpoint.
pub fn derivability(g: &Graph, mode: Mode, max_order: usize, max_classes: usize) -> Result<Derivability> {
    check_input(g, mode)?;
    let quick = Limits { non_shrinking: 1, growth: 2 };
    let root = canonical_form(g)?;
    let mut solved: HashMap<CanonicalForm, bool> = HashMap::new();
    let mut options: Vec<(CanonicalForm, Vec<Vec<CanonicalForm>>)> = Vec::new();
    let mut queue = std::collections::VecDeque::from([g.clone()]);
    let mut bounded = false;
    while let Some(h) = queue.pop_front() {
        let f = canonical_form(&h)?;
        if solved.contains_key(&f) {
            continue;
        }
        if h.order() > max_order || options.len() >= max_classes {
            bounded = true;
            solved.insert(f, false);
            continue;
        }
        let easy = decompose_limited(&h, mode, quick).is_ok();
        solved.insert(f.clone(), easy);
        if easy {
            continue;
        }
        let mut alts = Vec::new();
        let reduced = admissible_nodes(&h, mode)
            .into_iter()
            .map(|r| r.graph)
            .chain(admissible_degree4(&h, mode).into_iter().map(|r| r.graph));
        for r in reduced {
            alts.push(vec![canonical_form(&r)?]);
            queue.push_back(r);
        }
        for s in splits(&h, mode)? {
            alts.push(vec![canonical_form(&s.ga)?, canonical_form(&s.gb)?]);
            queue.push_back(s.ga);
            queue.push_back(s.gb);
        }
        options.push((f, alts));
    }
    let mut changed = true;
    while changed {
        changed = false;
        for (f, alts) in &options {
            if !solved[f] && alts.iter().any(|a| a.iter().all(|c| solved[c])) {
                solved.insert(f.clone(), true);
                changed = true;
            }
        }
    }
    let classes = options.len();
    Ok(if solved[&root] {
        Derivability::Derivable
    } else if bounded {
        Derivability::Unknown { classes }
    } else {
        Derivability::NotDerivable { classes }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{entry, g60};

    fn octahedron() -> Graph {
        let mut g = Graph::complete(6);
        for (u, v) in [(0, 1), (2, 3), (4, 5)] {
            g.remove_edge(u, v).unwrap();
        }
        g
    }

    /// Two copies of `K5` minus an edge, with one vertex of the second copy
    /// joined to both ends of the missing edge of the first.
    fn blocks_joined_through_a_vertex() -> Graph {
        let mut g = Graph::complete(5).disjoint_union(&Graph::complete(5));
        g.remove_edge(0, 1).unwrap();
        g.remove_edge(5, 6).unwrap();
        g.add_edge(0, 9).unwrap();
        g.add_edge(1, 9).unwrap();
        g
    }

    #[test]
    fn blocks_joined_through_a_vertex_have_no_certificate() {
        let g = blocks_joined_through_a_vertex();
        assert!(is_circuit(&g) && g.is_simple());
        assert!(matches!(decompose(&g), Err(Error::TheoremViolation(_))));
        assert!(matches!(derivability(&g, Mode::Simple, 16, 500).unwrap(), Derivability::NotDerivable { .. }));
    }

    #[test]
    fn derivability_of_small_circuits() {
        assert_eq!(derivability(&g60(), Mode::Simple, 12, 10).unwrap(), Derivability::Derivable);
        assert_eq!(derivability(&octahedron(), Mode::Simple, 12, 10).unwrap(), Derivability::Derivable);
    }

    #[test]
    fn g60_reduces_to_k5() {
        let r = find_admissible_node(&g60()).unwrap();
        assert!(is_base(&r.graph).is_some_and(|e| e.name == "K5"));
        assert!(matches!(reduce_step(&g60(), Mode::Simple).unwrap(), Step::Reduction(..)));
    }

    #[test]
    fn seven_vertex_bases_are_stuck() {
        for name in ["G293c", "G308c", "G312c"] {
            let g = &entry(name).unwrap().graph;
            assert!(admissible_nodes(g, Mode::Simple).is_empty(), "{name}");
            assert!(admissible_degree4(g, Mode::Simple).is_empty(), "{name}");
        }
    }

    #[test]
    fn degree4_cases() {
        assert!(find_admissible_degree4(&octahedron()).is_some());
        assert!(find_admissible_degree4(&Graph::complete(5)).is_none());
    }

    #[test]
    fn s5_classifies_as_case_one() {
        let s5 = &entry("S5").unwrap().graph;
        let seps = classify_separation(s5).unwrap();
        assert_eq!(seps.len(), 1);
        assert_eq!(seps[0].case, SumCase::One);
        assert_eq!(seps[0].counts, (9, 9));
        assert!(classify_separation(&Graph::complete(5)).unwrap().is_empty());
    }

    #[test]
    fn gstar_of_s5_is_in_class() {
        let s5 = &entry("S5").unwrap().graph;
        let h = gstar_construct(s5).unwrap();
        assert!(in_class_m(&h));
        assert_eq!(h.order(), 5);
        // The first pendant block is replaced, leaving the loop on a vertex
        // of degree four in the remaining K5-e.
        assert!(is_base(&h).is_some_and(|e| e.name == "R9"));
    }

    #[test]
    fn decompose_small() {
        let c = decompose(&g60()).unwrap();
        assert_eq!(c.replay().unwrap().order(), 6);
        let c = decompose(&octahedron()).unwrap();
        assert_eq!(c.replay().unwrap().order(), 6);
    }
}
