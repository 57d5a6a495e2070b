//! Sum moves: gluing two circuits across a small separation, and the
//! inverse splits.
//!
//! Each part carries a gadget standing in for the other side:
//!
//! | case | separation                 | part A               | part B               |
//! |------|----------------------------|----------------------|----------------------|
//! | 1    | cut vertex `x`             | `K5-e` through `x`   | `K5-e` through `x`   |
//! | 2a   | cut pair, `xy` not an edge | `K4` wired `x,x,y,y` | `K4` wired `x,x,y,y` |
//! | 2b   | cut pair, `xy` not an edge | the edge `xy`        | `K5-f` wired `x,x,y,y` |
//! | 3    | cut pair, `xy` an edge     | `K4` wired, no `xy`  | `K5-f` wired, no `xy` |
//! | 4    | 3-edge cut                 | apex vertex          | `K5-f` joined at one vertex |
//! | 5    | 4-edge cut                 | apex, or `K4` taking the four edges | same |
//!
//! Split parts place the side's vertices first (in increasing order of their
//! labels in the whole graph) and the gadget vertices after them. Joins only
//! check gadget structure, not the exact labelled wiring, so any wiring the
//! sum lemmas allow is accepted.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::sparsity::{is_circuit, induced_count};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SumCase {
    One,
    TwoA,
    TwoB,
    Three,
    Four,
    Five,
}

impl SumCase {
    pub const ALL: [SumCase; 6] = [
        SumCase::One,
        SumCase::TwoA,
        SumCase::TwoB,
        SumCase::Three,
        SumCase::Four,
        SumCase::Five,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            SumCase::One => "1",
            SumCase::TwoA => "2a",
            SumCase::TwoB => "2b",
            SumCase::Three => "3",
            SumCase::Four => "4",
            SumCase::Five => "5",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        SumCase::ALL.into_iter().find(|c| c.tag() == s)
    }

    /// Expected `(2|A| - i(A), 2|B| - i(B))`.
    pub fn slack_signature(self) -> (i64, i64) {
        match self {
            SumCase::One => (1, 1),
            SumCase::TwoA => (2, 2),
            SumCase::TwoB => (1, 3),
            SumCase::Three => (1, 2),
            SumCase::Four => (1, 2),
            SumCase::Five => (2, 2),
        }
    }

    pub fn is_vertex_cut(self) -> bool {
        !matches!(self, SumCase::Four | SumCase::Five)
    }
}

impl fmt::Display for SumCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cut {
    /// `[x]` or `[x, y]`, shared by both sides.
    Vertices(Vec<Vertex>),
    /// Crossing edges `(x_i, y_i)` with `x_i` in A and `y_i` in B, sorted.
    Edges(Vec<(Vertex, Vertex)>),
}

/// A classified separation of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub case: SumCase,
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
    pub cut: Cut,
    /// `(i(A), i(B))`; for cut pairs an edge `xy` counts on both sides.
    pub counts: (usize, usize),
}

impl Separation {
    pub fn cut_vertices(&self) -> &[Vertex] {
        match &self.cut {
            Cut::Vertices(v) => v,
            Cut::Edges(_) => &[],
        }
    }

    pub fn cut_edges(&self) -> &[(Vertex, Vertex)] {
        match &self.cut {
            Cut::Edges(e) => e,
            Cut::Vertices(_) => &[],
        }
    }

    /// Recomputes every defining property against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let stale = |m: String| Err(Error::StaleSeparation(m));
        let n = g.order();
        let mut side = vec![0u8; n];
        for &v in &self.a {
            if v >= n {
                return stale(format!("vertex {v} out of range"));
            }
            side[v] |= 1;
        }
        for &v in &self.b {
            if v >= n {
                return stale(format!("vertex {v} out of range"));
            }
            side[v] |= 2;
        }
        if side.contains(&0) {
            return stale("sides do not cover the vertex set".into());
        }
        let shared: Vec<Vertex> = g.vertices().filter(|&v| side[v] == 3).collect();
        match (&self.cut, self.case.is_vertex_cut()) {
            (Cut::Vertices(c), true) => {
                let mut c = c.clone();
                c.sort_unstable();
                if c != shared {
                    return stale(format!("shared vertices {shared:?} differ from cut {c:?}"));
                }
                let want = if self.case == SumCase::One { 1 } else { 2 };
                if c.len() != want {
                    return stale(format!("case {} needs {want} cut vertices", self.case));
                }
                for u in g.vertices().filter(|&u| side[u] == 1) {
                    for v in g.vertices().filter(|&v| side[v] == 2) {
                        if g.has_edge(u, v) {
                            return stale(format!("edge {u}-{v} crosses the cut"));
                        }
                    }
                }
                if self.a.len() == n || self.b.len() == n {
                    return stale("a side is the whole vertex set".into());
                }
                if c.len() == 2 {
                    let adjacent = g.has_edge(c[0], c[1]);
                    if adjacent != (self.case == SumCase::Three) {
                        return stale(format!("adjacency of the cut pair does not fit case {}", self.case));
                    }
                }
            }
            (Cut::Edges(e), false) => {
                if !shared.is_empty() {
                    return stale("edge-cut sides overlap".into());
                }
                let mut crossing = Vec::new();
                for &u in &self.a {
                    for &v in &self.b {
                        for _ in 0..g.multiplicity(u, v) {
                            crossing.push((u, v));
                        }
                    }
                }
                crossing.sort_unstable();
                let mut e = e.clone();
                e.sort_unstable();
                if crossing != e {
                    return stale(format!("crossing edges {crossing:?} differ from cut {e:?}"));
                }
                let want = if self.case == SumCase::Four { 3 } else { 4 };
                if e.len() != want {
                    return stale(format!("case {} needs a {want}-edge cut", self.case));
                }
                if self.case == SumCase::Four {
                    let mut ends: Vec<Vertex> = e.iter().flat_map(|&(x, y)| [x, y]).collect();
                    ends.sort_unstable();
                    ends.dedup();
                    if ends.len() != 6 {
                        return stale("case 4 cut edges need six distinct ends".into());
                    }
                }
            }
            _ => return stale(format!("cut kind does not fit case {}", self.case)),
        }
        let ia = induced_count(g, &self.a)?;
        let ib = induced_count(g, &self.b)?;
        if (ia, ib) != self.counts {
            return stale(format!("counts ({ia}, {ib}) differ from recorded {:?}", self.counts));
        }
        let sa = 2 * self.a.len() as i64 - ia as i64;
        let sb = 2 * self.b.len() as i64 - ib as i64;
        if (sa, sb) != self.case.slack_signature() {
            return stale(format!(
                "slack ({sa}, {sb}) does not match case {}",
                self.case
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// Four vertices forming `K5-e` together with the cut vertex.
    K5e,
    /// `K4` joined to `x` twice and `y` twice.
    K4,
    /// `K5-f` joined to `x` twice and `y` twice.
    K5f,
    /// The edge `xy` itself (no gadget vertices).
    Edge,
    /// One vertex joined to each cut endpoint.
    Apex,
    /// `K5-f` joined once to each of three cut endpoints.
    K5f3,
    /// `K4` taking four cut edges whose side ends have three distinct vertices.
    K4Edges,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 7] = [
        GadgetKind::K5e,
        GadgetKind::K4,
        GadgetKind::K5f,
        GadgetKind::Edge,
        GadgetKind::Apex,
        GadgetKind::K5f3,
        GadgetKind::K4Edges,
    ];

    /// Position in [`GadgetKind::ALL`].
    pub fn index(self) -> usize {
        GadgetKind::ALL.iter().position(|&k| k == self).expect("listed")
    }
}

/// The gadget of one part, by the part's own labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidePlan {
    pub kind: GadgetKind,
    pub gadget: Vec<Vertex>,
}

/// A sum, labelled against its two parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumMove {
    pub case: SumCase,
    /// Cut labels in part A; for edge cuts, the A-ends in pairing order.
    pub cut_a: Vec<Vertex>,
    pub cut_b: Vec<Vertex>,
    pub side_a: SidePlan,
    pub side_b: SidePlan,
}

impl SumMove {
    /// Applies vertex maps (part label -> new label) to both sides.
    pub fn relabeled(&self, fa: &[Vertex], fb: &[Vertex]) -> SumMove {
        SumMove {
            case: self.case,
            cut_a: self.cut_a.iter().map(|&v| fa[v]).collect(),
            cut_b: self.cut_b.iter().map(|&v| fb[v]).collect(),
            side_a: SidePlan {
                kind: self.side_a.kind,
                gadget: self.side_a.gadget.iter().map(|&v| fa[v]).collect(),
            },
            side_b: SidePlan {
                kind: self.side_b.kind,
                gadget: self.side_b.gadget.iter().map(|&v| fb[v]).collect(),
            },
        }
    }
}

fn absent(m: impl Into<String>) -> Error {
    Error::GadgetAbsent(m.into())
}

/// Vertices outside `set` reached by edges from `set`, one entry per edge, sorted.
fn outside_ends(g: &Graph, set: &[Vertex]) -> Vec<Vertex> {
    let mut ends = Vec::new();
    for &s in set {
        for t in g.vertices() {
            if !set.contains(&t) {
                for _ in 0..g.multiplicity(s, t) {
                    ends.push(t);
                }
            }
        }
    }
    ends.sort_unstable();
    ends
}

fn simple_on(g: &Graph, set: &[Vertex]) -> bool {
    set.iter().all(|&u| {
        g.loops(u) == 0 && g.vertices().all(|v| g.multiplicity(u, v) <= 1)
    })
}

fn distinct(v: &[Vertex]) -> usize {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Confirms that `plan` describes a gadget of `part` attached at `cut`.
pub fn check_gadget(part: &Graph, cut: &[Vertex], plan: &SidePlan) -> Result<()> {
    let n = part.order();
    let s = &plan.gadget;
    if s.iter().chain(cut).any(|&v| v >= n) {
        return Err(absent("label out of range"));
    }
    if distinct(s) != s.len() || s.iter().any(|v| cut.contains(v)) {
        return Err(absent("gadget labels repeat or meet the cut"));
    }
    let mut sorted_cut = cut.to_vec();
    sorted_cut.sort_unstable();
    let need_size = |k: usize| {
        if s.len() == k {
            Ok(())
        } else {
            Err(absent(format!("{:?} gadget needs {k} vertices", plan.kind)))
        }
    };
    let need_cut = |k: usize, d: usize| {
        if cut.len() == k && distinct(cut) == d {
            Ok(())
        } else {
            Err(absent(format!(
                "{:?} gadget needs {k} cut labels with {d} distinct",
                plan.kind
            )))
        }
    };
    let induced = |set: &[Vertex]| induced_count(part, set).expect("in range");
    let doubled = |c: &[Vertex]| {
        let mut v = vec![c[0], c[0], c[1], c[1]];
        v.sort_unstable();
        v
    };
    match plan.kind {
        GadgetKind::K5e => {
            need_size(4)?;
            need_cut(1, 1)?;
            let mut all = s.clone();
            all.push(cut[0]);
            let pendant = outside_ends(part, s).iter().all(|&t| t == cut[0]);
            if !simple_on(part, s) || induced(&all) != 9 || !pendant {
                return Err(absent("no K5-e through the cut vertex"));
            }
        }
        GadgetKind::K4 | GadgetKind::K5f => {
            let (k, e) = if plan.kind == GadgetKind::K4 { (4, 6) } else { (5, 9) };
            need_size(k)?;
            need_cut(2, 2)?;
            if !simple_on(part, s) || induced(s) != e || outside_ends(part, s) != doubled(cut) {
                return Err(absent(format!("no {:?} gadget wired to the cut pair", plan.kind)));
            }
        }
        GadgetKind::Edge => {
            need_size(0)?;
            need_cut(2, 2)?;
            if !part.has_edge(cut[0], cut[1]) {
                return Err(absent("cut pair is not adjacent"));
            }
        }
        GadgetKind::Apex => {
            need_size(1)?;
            if !(cut.len() == 3 || cut.len() == 4) || distinct(cut) != cut.len() {
                return Err(absent("apex needs three or four distinct ends"));
            }
            if part.loops(s[0]) > 0 || outside_ends(part, s) != sorted_cut {
                return Err(absent("apex neighbourhood differs from the cut"));
            }
        }
        GadgetKind::K5f3 => {
            need_size(5)?;
            need_cut(3, 3)?;
            if !simple_on(part, s) || induced(s) != 9 || outside_ends(part, s) != sorted_cut {
                return Err(absent("no K5-f joined to the three cut ends"));
            }
        }
        GadgetKind::K4Edges => {
            need_size(4)?;
            need_cut(4, 3)?;
            if !simple_on(part, s) || induced(s) != 6 || outside_ends(part, s) != sorted_cut {
                return Err(absent("no K4 taking the four cut edges"));
            }
        }
    }
    Ok(())
}

/// Number of distinct gadget vertices met by the cut edges of a `K4Edges` side.
pub fn k4_edges_type(part: &Graph, plan: &SidePlan) -> usize {
    plan.gadget
        .iter()
        .filter(|&&g| part.vertices().any(|t| !plan.gadget.contains(&t) && part.has_edge(g, t)))
        .count()
}

fn allowed_kinds(case: SumCase) -> (&'static [GadgetKind], &'static [GadgetKind]) {
    use GadgetKind::*;
    match case {
        SumCase::One => (&[K5e], &[K5e]),
        SumCase::TwoA => (&[K4], &[K4]),
        SumCase::TwoB => (&[Edge], &[K5f]),
        SumCase::Three => (&[K4], &[K5f]),
        SumCase::Four => (&[Apex], &[K5f3]),
        SumCase::Five => (&[Apex, K4Edges], &[Apex, K4Edges]),
    }
}

/// A joined graph with the position of every part vertex that survives.
#[derive(Clone, Debug)]
pub struct Joined {
    pub graph: Graph,
    pub from_a: Vec<Option<Vertex>>,
    pub from_b: Vec<Option<Vertex>>,
}

pub fn sum_join(mv: &SumMove, ga: &Graph, gb: &Graph) -> Result<Joined> {
    let (ka, kb) = allowed_kinds(mv.case);
    if !ka.contains(&mv.side_a.kind) || !kb.contains(&mv.side_b.kind) {
        return Err(absent(format!(
            "gadgets {:?}/{:?} do not fit case {}",
            mv.side_a.kind, mv.side_b.kind, mv.case
        )));
    }
    if (mv.case == SumCase::Four && mv.cut_a.len() != 3)
        || (mv.case == SumCase::Five && mv.cut_a.len() != 4)
    {
        return Err(absent("wrong number of cut edges"));
    }
    if mv.cut_a.len() != mv.cut_b.len() {
        return Err(absent("cut label lists differ in length"));
    }
    check_gadget(ga, &mv.cut_a, &mv.side_a)?;
    check_gadget(gb, &mv.cut_b, &mv.side_b)?;

    let mut from_a = vec![None; ga.order()];
    let mut from_b = vec![None; gb.order()];
    let mut next = 0;
    for v in ga.vertices() {
        if !mv.side_a.gadget.contains(&v) {
            from_a[v] = Some(next);
            next += 1;
        }
    }
    let identify = mv.case.is_vertex_cut();
    for v in gb.vertices() {
        if mv.side_b.gadget.contains(&v) {
            continue;
        }
        if identify {
            if let Some(i) = mv.cut_b.iter().position(|&c| c == v) {
                from_b[v] = from_a[mv.cut_a[i]];
                continue;
            }
        }
        from_b[v] = Some(next);
        next += 1;
    }

    let mut g = Graph::empty(next);
    for (u, v, c) in ga.edge_classes() {
        if let (Some(p), Some(q)) = (from_a[u], from_a[v]) {
            for _ in 0..c {
                g.add_edge(p, q)?;
            }
        }
    }
    for (u, v, c) in gb.edge_classes() {
        if let (Some(p), Some(q)) = (from_b[u], from_b[v]) {
            for _ in 0..c {
                g.add_edge(p, q)?;
            }
        }
    }
    let pos_a = |i: usize| from_a[mv.cut_a[i]].expect("cut vertex survives");
    let pos_b = |i: usize| from_b[mv.cut_b[i]].expect("cut vertex survives");
    match mv.case {
        SumCase::TwoB => g.remove_edge(pos_a(0), pos_a(1))?,
        SumCase::Three => g.add_edge(pos_a(0), pos_a(1))?,
        SumCase::Four | SumCase::Five => {
            for i in 0..mv.cut_a.len() {
                g.add_edge(pos_a(i), pos_b(i))?;
            }
        }
        _ => {}
    }
    Ok(Joined {
        graph: g,
        from_a,
        from_b,
    })
}

/// Free choices for a split. `None` lets the split pick deterministically.
#[derive(Clone, Debug, Default)]
pub struct SplitOptions {
    /// For a case-5 side whose cut ends have three distinct vertices: which
    /// `K4` vertex (0..4) receives each cut edge, in cut order.
    pub k4_assignment: [Option<[usize; 4]>; 2],
    /// Index into [`k5_variants`] for each side built on `K5` minus an edge.
    pub k5_variant: [usize; 2],
}

#[derive(Clone, Debug)]
pub struct Split {
    pub ga: Graph,
    pub gb: Graph,
    pub mv: SumMove,
    /// Label in part A (resp. B) of each vertex of the original graph.
    pub map_a: Vec<Option<Vertex>>,
    pub map_b: Vec<Option<Vertex>>,
}

/// Valid `K4` assignments for a case-5 side, as restricted-growth strings in
/// lexicographic order: the two edges at a repeated end go to distinct `K4`
/// vertices.
pub fn k4_assignments(ends: &[Vertex]) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for code in 0..256usize {
        let r = [code >> 6 & 3, code >> 4 & 3, code >> 2 & 3, code & 3];
        let mut max = 0;
        let mut rgs = r[0] == 0;
        for &x in &r[1..] {
            if x > max + 1 {
                rgs = false;
            }
            max = max.max(x);
        }
        if !rgs {
            continue;
        }
        let ok = (0..4).all(|i| (i + 1..4).all(|j| ends[i] != ends[j] || r[i] != r[j]));
        if ok {
            out.push(r);
        }
    }
    out
}

pub(crate) enum Build<'a> {
    None,
    /// Cut vertex and the missing edge, indexing gadget vertices with the
    /// cut vertex as index 4.
    K5e(Vertex, (usize, usize)),
    /// Gadget size, the cut pair, and the missing edge when the size is 5.
    Wired(usize, Vertex, Vertex, (usize, usize)),
    /// Cut ends, the gadget vertex taking each cut edge, and the missing edge.
    K5f3(&'a [Vertex], [usize; 3], (usize, usize)),
    Apex(&'a [Vertex]),
    K4Edges(&'a [Vertex], [usize; 4]),
}

/// Choices of missing edge for the gadgets built on `K5` minus an edge, up
/// to symmetry of the wiring. Indices are gadget positions; for `K5e`,
/// index 4 is the cut vertex. `K5f` is wired `x` to 0 and 1, `y` to 2 and
/// 3. `K5f3` has its own list, see [`k5f3_variants`].
pub fn k5_variants(kind: GadgetKind) -> &'static [(usize, usize)] {
    match kind {
        GadgetKind::K5e => &[(0, 1), (0, 4)],
        GadgetKind::K5f => &[(0, 1), (0, 2), (0, 4), (2, 3), (2, 4)],
        _ => &[(0, 1)],
    }
}

/// Wirings of the case-4 gadget: which gadget vertex takes each of the
/// three cut edges (as a restricted-growth string) and which edge of the
/// `K5` is missing. The first entry takes all cut edges at 0 and misses 0-1.
pub fn k5f3_variants() -> &'static [([usize; 3], (usize, usize))] {
    static V: std::sync::OnceLock<Vec<([usize; 3], (usize, usize))>> = std::sync::OnceLock::new();
    V.get_or_init(|| {
        let ends = [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1], [0, 1, 2]];
        ends.iter()
            .flat_map(|&r| (0..5).flat_map(move |i| (i + 1..5).map(move |j| (r, (i, j)))))
            .collect()
    })
}

/// `G[side]` (labels in side order) with optional edge edits and a gadget
/// appended. Cut vertices in `Build` are given in part labels.
pub(crate) fn build_part(g: &Graph, side: &[Vertex], drop_xy: Option<(Vertex, Vertex)>, add_xy: Option<(Vertex, Vertex)>, build: Build<'_>) -> Result<(Graph, Vec<Vertex>)> {
    let mut p = g.induced_subgraph(side);
    if let Some((x, y)) = drop_xy {
        p.remove_edge(x, y)?;
    }
    if let Some((x, y)) = add_xy {
        p.add_edge(x, y)?;
    }
    let k = match build {
        Build::None => 0,
        Build::K5e(..) | Build::Wired(4, ..) | Build::K4Edges(..) => 4,
        Build::Wired(..) | Build::K5f3(..) => 5,
        Build::Apex(_) => 1,
    };
    let gad: Vec<Vertex> = (0..k).map(|_| p.add_vertex()).collect();
    let clique = |p: &mut Graph, members: &[Vertex], missing: Option<(usize, usize)>| -> Result<()> {
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if missing != Some((i, j)) {
                    p.add_edge(members[i], members[j])?;
                }
            }
        }
        Ok(())
    };
    match build {
        Build::None => {}
        Build::K5e(x, missing) => {
            let mut members = gad.clone();
            members.push(x);
            clique(&mut p, &members, Some(missing))?;
        }
        Build::Wired(size, x, y, missing) => {
            clique(&mut p, &gad, (size == 5).then_some(missing))?;
            p.add_edge(x, gad[0])?;
            p.add_edge(x, gad[1])?;
            p.add_edge(y, gad[2])?;
            p.add_edge(y, gad[3])?;
        }
        Build::K5f3(ys, r, missing) => {
            clique(&mut p, &gad, Some(missing))?;
            for (&y, &i) in ys.iter().zip(&r) {
                p.add_edge(y, gad[i])?;
            }
        }
        Build::Apex(xs) => {
            for &x in xs {
                p.add_edge(x, gad[0])?;
            }
        }
        Build::K4Edges(xs, r) => {
            clique(&mut p, &gad, None)?;
            for (i, &x) in xs.iter().enumerate() {
                p.add_edge(x, gad[r[i]])?;
            }
        }
    }
    Ok((p, gad))
}

fn side_map(n: usize, side: &[Vertex]) -> Vec<Option<Vertex>> {
    let mut m = vec![None; n];
    for (i, &v) in side.iter().enumerate() {
        m[v] = Some(i);
    }
    m
}

/// Splits `g` over `sep` into two parts whose sum (via [`sum_join`]) is
/// isomorphic to `g`. Both parts are verified to be circuits, and simple
/// when `g` is.
pub fn sum_split(g: &Graph, sep: &Separation, opts: &SplitOptions) -> Result<Split> {
    sep.validate(g)?;
    let n = g.order();
    let mut a = sep.a.clone();
    let mut b = sep.b.clone();
    a.sort_unstable();
    b.sort_unstable();
    let map_a = side_map(n, &a);
    let map_b = side_map(n, &b);
    let la = |v: Vertex| map_a[v].expect("in side A");
    let lb = |v: Vertex| map_b[v].expect("in side B");
    use GadgetKind::*;
    let variant = |kind: GadgetKind, side: usize| -> Result<(usize, usize)> {
        k5_variants(kind)
            .get(opts.k5_variant[side])
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("no {kind:?} variant {}", opts.k5_variant[side])))
    };

    let (ga, gb, mv) = match sep.case {
        SumCase::One | SumCase::TwoA | SumCase::TwoB | SumCase::Three => {
            let c = sep.cut_vertices();
            let ca: Vec<Vertex> = c.iter().map(|&v| la(v)).collect();
            let cb: Vec<Vertex> = c.iter().map(|&v| lb(v)).collect();
            let ((pa, gad_a, kind_a), (pb, gad_b, kind_b)) = match sep.case {
                SumCase::One => {
                    let (pa, x) = build_part(g, &a, None, None, Build::K5e(ca[0], variant(K5e, 0)?))?;
                    let (pb, y) = build_part(g, &b, None, None, Build::K5e(cb[0], variant(K5e, 1)?))?;
                    ((pa, x, K5e), (pb, y, K5e))
                }
                SumCase::TwoA => {
                    let (pa, x) = build_part(g, &a, None, None, Build::Wired(4, ca[0], ca[1], (0, 1)))?;
                    let (pb, y) = build_part(g, &b, None, None, Build::Wired(4, cb[0], cb[1], (0, 1)))?;
                    ((pa, x, K4), (pb, y, K4))
                }
                SumCase::TwoB => {
                    let (pa, x) = build_part(g, &a, None, Some((ca[0], ca[1])), Build::None)?;
                    let (pb, y) = build_part(g, &b, None, None, Build::Wired(5, cb[0], cb[1], variant(K5f, 1)?))?;
                    ((pa, x, Edge), (pb, y, K5f))
                }
                _ => {
                    let (pa, x) = build_part(g, &a, Some((ca[0], ca[1])), None, Build::Wired(4, ca[0], ca[1], (0, 1)))?;
                    let (pb, y) = build_part(g, &b, Some((cb[0], cb[1])), None, Build::Wired(5, cb[0], cb[1], variant(K5f, 1)?))?;
                    ((pa, x, K4), (pb, y, K5f))
                }
            };
            let mv = SumMove {
                case: sep.case,
                cut_a: ca,
                cut_b: cb,
                side_a: SidePlan { kind: kind_a, gadget: gad_a },
                side_b: SidePlan { kind: kind_b, gadget: gad_b },
            };
            (pa, pb, mv)
        }
        SumCase::Four => {
            let e = sep.cut_edges();
            let xs: Vec<Vertex> = e.iter().map(|&(x, _)| la(x)).collect();
            let ys: Vec<Vertex> = e.iter().map(|&(_, y)| lb(y)).collect();
            let (r, missing) = *k5f3_variants()
                .get(opts.k5_variant[1])
                .ok_or_else(|| Error::InvalidArgument(format!("no case-4 gadget variant {}", opts.k5_variant[1])))?;
            let (pa, gad_a) = build_part(g, &a, None, None, Build::Apex(&xs))?;
            let (pb, gad_b) = build_part(g, &b, None, None, Build::K5f3(&ys, r, missing))?;
            let mv = SumMove {
                case: SumCase::Four,
                cut_a: xs,
                cut_b: ys,
                side_a: SidePlan { kind: Apex, gadget: gad_a },
                side_b: SidePlan { kind: K5f3, gadget: gad_b },
            };
            (pa, pb, mv)
        }
        SumCase::Five => {
            let e = sep.cut_edges();
            let xs: Vec<Vertex> = e.iter().map(|&(x, _)| la(x)).collect();
            let ys: Vec<Vertex> = e.iter().map(|&(_, y)| lb(y)).collect();
            let (pa, plan_a) = case5_side(g, &a, &xs, opts.k4_assignment[0])?;
            let (pb, plan_b) = case5_side(g, &b, &ys, opts.k4_assignment[1])?;
            let mv = SumMove {
                case: SumCase::Five,
                cut_a: xs,
                cut_b: ys,
                side_a: plan_a,
                side_b: plan_b,
            };
            (pa, pb, mv)
        }
    };
    for (name, p) in [("A", &ga), ("B", &gb)] {
        if !is_circuit(p) {
            return Err(Error::PartNotCircuit(format!("part {name} of case {}", sep.case)));
        }
        if g.is_simple() && !p.is_simple() {
            return Err(Error::PartNotCircuit(format!("part {name} of case {} is not simple", sep.case)));
        }
    }
    Ok(Split {
        ga,
        gb,
        mv,
        map_a,
        map_b,
    })
}

/// Builds one side of a case-5 split. With four distinct ends this is the
/// apex part; with three, the first `K4` assignment giving a simple circuit
/// unless one is forced.
pub fn case5_side(g: &Graph, side: &[Vertex], ends: &[Vertex], forced: Option<[usize; 4]>) -> Result<(Graph, SidePlan)> {
    match distinct(ends) {
        4 => {
            let (p, gad) = build_part(g, side, None, None, Build::Apex(ends))?;
            Ok((p, SidePlan { kind: GadgetKind::Apex, gadget: gad }))
        }
        3 => {
            let candidates = match forced {
                Some(r) => vec![r],
                None => k4_assignments(ends),
            };
            for r in candidates {
                let (p, gad) = build_part(g, side, None, None, Build::K4Edges(ends, r))?;
                if p.is_simple() && is_circuit(&p) {
                    return Ok((p, SidePlan { kind: GadgetKind::K4Edges, gadget: gad }));
                }
            }
            Err(Error::PartNotCircuit("no K4 assignment gives a circuit".into()))
        }
        d => Err(Error::StaleSeparation(format!(
            "case 5 side has {d} distinct cut ends, need three or four"
        ))),
    }
}

/// Builds a case-5 side with a given assignment without verifying it.
pub fn case5_side_unchecked(g: &Graph, side: &[Vertex], ends: &[Vertex], r: [usize; 4]) -> Result<(Graph, SidePlan)> {
    let (p, gad) = build_part(g, side, None, None, Build::K4Edges(ends, r))?;
    Ok((p, SidePlan { kind: GadgetKind::K4Edges, gadget: gad }))
}

/// Position in the joined graph of each vertex of the split graph.
pub fn split_join_iso(split: &Split, joined: &Joined) -> Vec<Vertex> {
    (0..split.map_a.len())
        .map(|v| {
            split.map_a[v]
                .and_then(|p| joined.from_a[p])
                .or_else(|| split.map_b[v].and_then(|p| joined.from_b[p]))
                .expect("every vertex lies on a side")
        })
        .collect()
}
