//! Certificates: trees of forward moves over base graphs, their text form,
//! and verified replay.
//!
//! ```text
//! ROOT <canonical form, hex>
//! 0 EXT v=5 del=0-1 z=2
//! 1 BASE K5
//! ```
//!
//! Each node line is `<depth> <payload>` in preorder; a sum node is followed
//! by its A subtree and then its B subtree. Move labels refer to the graphs
//! the child subtrees replay to.

use std::fmt::Write as _;

use crate::canon::{canonical_form, CanonicalForm};
use crate::catalog::{entry, Family};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::moves::{one_extension, x_replacement, Move};
use crate::sparsity::is_circuit;
use crate::sums::{k4_edges_type, sum_join, GadgetKind, SidePlan, SumCase, SumMove};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertNode {
    Base(String),
    /// A forward move applied to the replayed children (one for vertex
    /// moves, A then B for sums).
    Move(Move, Vec<CertNode>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub root: CanonicalForm,
    pub tree: CertNode,
}

/// A replayed node: the graph it produces and its children.
#[derive(Clone, Debug)]
pub struct ReplayNode {
    pub label: String,
    pub graph: Graph,
    pub children: Vec<ReplayNode>,
}

impl ReplayNode {
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a ReplayNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }
}

fn labels(v: &[Vertex]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
}

fn kind_name(kind: GadgetKind, part: Option<(&Graph, &SidePlan)>) -> String {
    match kind {
        GadgetKind::K5e => "k5e".into(),
        GadgetKind::K4 => "k4".into(),
        GadgetKind::K5f => "k5f".into(),
        GadgetKind::Edge => "edge".into(),
        GadgetKind::Apex => "apex".into(),
        GadgetKind::K5f3 => "k5f3".into(),
        GadgetKind::K4Edges => match part {
            Some((g, plan)) => format!("type-{}", k4_edges_type(g, plan)),
            None => "type-?".into(),
        },
    }
}

/// One-line payload of a move. Sum lines need the replayed parts to name
/// the type of a `K4` side.
pub fn move_line(mv: &Move, parts: Option<(&Graph, &Graph)>) -> String {
    match mv {
        Move::Extension { v, del: (u, w), z } => format!("EXT v={v} del={u}-{w} z={z}"),
        Move::XReplacement { v, del: [(a, b), (c, d)] } => {
            format!("XREP v={v} del={a}-{b},{c}-{d}")
        }
        Move::Sum(s) => {
            let (pa, pb) = match parts {
                Some((a, b)) => (Some((a, &s.side_a)), Some((b, &s.side_b))),
                None => (None, None),
            };
            format!(
                "SUM{} cut=A:{}|B:{} opts=A:{}:{}|B:{}:{}",
                s.case,
                labels(&s.cut_a),
                labels(&s.cut_b),
                kind_name(s.side_a.kind, pa),
                labels(&s.side_a.gadget),
                kind_name(s.side_b.kind, pb),
                labels(&s.side_b.gadget),
            )
        }
    }
}

impl Certificate {
    /// Whether replay must keep every graph simple.
    pub fn simple_mode(&self) -> bool {
        self.root.to_graph().is_simple()
    }

    pub fn to_text(&self) -> Result<String> {
        let tree = self.replay_tree()?;
        let mut out = format!("ROOT {}\n", self.root.to_hex());
        fn rec(node: &ReplayNode, depth: usize, out: &mut String) {
            writeln!(out, "{depth} {}", node.label).expect("string write");
            for c in &node.children {
                rec(c, depth + 1, out);
            }
        }
        rec(&tree, 0, &mut out);
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let bad = |line: usize, msg: &str| Error::CertificateFormat { line, msg: msg.into() };
        let (ln, head) = lines.next().ok_or_else(|| bad(1, "empty certificate"))?;
        let hex = head
            .strip_prefix("ROOT ")
            .ok_or_else(|| bad(ln, "expected ROOT line"))?;
        let root = CanonicalForm::from_hex(hex.trim()).ok_or_else(|| bad(ln, "bad canonical form"))?;
        let mut nodes = Vec::new();
        for (ln, l) in lines {
            let (d, payload) = l.split_once(' ').ok_or_else(|| bad(ln, "expected depth and payload"))?;
            let d: usize = d.parse().map_err(|_| bad(ln, "bad depth"))?;
            nodes.push((ln, d, payload.to_string()));
        }
        let mut pos = 0;
        let tree = parse_node(&nodes, &mut pos, 0)?;
        if pos != nodes.len() {
            return Err(bad(nodes[pos].0, "trailing nodes"));
        }
        Ok(Certificate { root, tree })
    }

    /// Replays the tree and checks the result against the root form.
    pub fn replay(&self) -> Result<Graph> {
        Ok(self.replay_tree()?.graph)
    }

    pub fn replay_tree(&self) -> Result<ReplayNode> {
        let simple = self.simple_mode();
        let node = replay_node(&self.tree, simple)?;
        if canonical_form(&node.graph)? != self.root {
            return Err(Error::Replay("replayed graph does not match the root form".into()));
        }
        Ok(node)
    }

    /// Graphviz rendering of the replay tree.
    pub fn to_dot(&self) -> Result<String> {
        let tree = self.replay_tree()?;
        let mut out = String::from("digraph certificate {\n  node [shape=box, fontname=monospace];\n");
        let mut next = 0usize;
        fn rec(node: &ReplayNode, next: &mut usize, out: &mut String) -> usize {
            let id = *next;
            *next += 1;
            writeln!(
                out,
                "  n{id} [label=\"{}\\n|V|={} |E|={}\"];",
                node.label.replace('"', "'"),
                node.graph.order(),
                node.graph.size()
            )
            .expect("string write");
            for c in &node.children {
                let cid = rec(c, next, out);
                writeln!(out, "  n{id} -> n{cid};").expect("string write");
            }
            id
        }
        rec(&tree, &mut next, &mut out);
        out.push_str("}\n");
        Ok(out)
    }
}

fn parse_node(nodes: &[(usize, usize, String)], pos: &mut usize, depth: usize) -> Result<CertNode> {
    let Some((ln, d, payload)) = nodes.get(*pos) else {
        let line = nodes.last().map_or(1, |n| n.0);
        return Err(Error::CertificateFormat { line, msg: "missing child node".into() });
    };
    let ln = *ln;
    let bad = |msg: String| Error::CertificateFormat { line: ln, msg };
    if *d != depth {
        return Err(bad(format!("expected depth {depth}, found {d}")));
    }
    *pos += 1;
    let (word, rest) = payload.split_once(' ').unwrap_or((payload, ""));
    if word == "BASE" {
        return Ok(CertNode::Base(rest.trim().to_string()));
    }
    let mv = parse_move(word, rest).map_err(bad)?;
    let arity = if matches!(mv, Move::Sum(_)) { 2 } else { 1 };
    let children = (0..arity)
        .map(|_| parse_node(nodes, pos, depth + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(CertNode::Move(mv, children))
}

fn fields(rest: &str) -> std::result::Result<Vec<(&str, &str)>, String> {
    rest.split_whitespace()
        .map(|f| f.split_once('=').ok_or_else(|| format!("field `{f}` lacks `=`")))
        .collect()
}

fn field<'a>(fs: &[(&str, &'a str)], key: &str) -> std::result::Result<&'a str, String> {
    fs.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| format!("missing field `{key}`"))
}

fn num(s: &str) -> std::result::Result<Vertex, String> {
    s.parse().map_err(|_| format!("bad label `{s}`"))
}

fn pair(s: &str) -> std::result::Result<(Vertex, Vertex), String> {
    let (a, b) = s.split_once('-').ok_or_else(|| format!("bad edge `{s}`"))?;
    Ok((num(a)?, num(b)?))
}

fn label_list(s: &str) -> std::result::Result<Vec<Vertex>, String> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split('.').map(num).collect()
}

/// Splits `A:<x>|B:<y>` into `(x, y)`.
fn sides(s: &str) -> std::result::Result<(&str, &str), String> {
    let (a, b) = s.split_once('|').ok_or_else(|| format!("bad side list `{s}`"))?;
    let a = a.strip_prefix("A:").ok_or_else(|| format!("bad side list `{s}`"))?;
    let b = b.strip_prefix("B:").ok_or_else(|| format!("bad side list `{s}`"))?;
    Ok((a, b))
}

fn plan(s: &str) -> std::result::Result<SidePlan, String> {
    let (kind, gad) = s.split_once(':').ok_or_else(|| format!("bad gadget `{s}`"))?;
    let kind = match kind {
        "k5e" => GadgetKind::K5e,
        "k4" => GadgetKind::K4,
        "k5f" => GadgetKind::K5f,
        "edge" => GadgetKind::Edge,
        "apex" => GadgetKind::Apex,
        "k5f3" => GadgetKind::K5f3,
        "type-2" | "type-3" | "type-4" => GadgetKind::K4Edges,
        other => return Err(format!("unknown gadget kind `{other}`")),
    };
    Ok(SidePlan { kind, gadget: label_list(gad)? })
}

fn parse_move(word: &str, rest: &str) -> std::result::Result<Move, String> {
    let fs = fields(rest)?;
    match word {
        "EXT" => {
            let (u, w) = pair(field(&fs, "del")?)?;
            Ok(Move::Extension { v: num(field(&fs, "v")?)?, del: (u, w), z: num(field(&fs, "z")?)? })
        }
        "XREP" => {
            let (p, q) = field(&fs, "del")?
                .split_once(',')
                .ok_or("XREP needs two deleted edges")?;
            Ok(Move::XReplacement { v: num(field(&fs, "v")?)?, del: [pair(p)?, pair(q)?] })
        }
        w if w.starts_with("SUM") => {
            let case = SumCase::from_tag(&w[3..]).ok_or_else(|| format!("unknown sum case `{w}`"))?;
            let (ca, cb) = sides(field(&fs, "cut")?)?;
            let (oa, ob) = sides(field(&fs, "opts")?)?;
            Ok(Move::Sum(SumMove {
                case,
                cut_a: label_list(ca)?,
                cut_b: label_list(cb)?,
                side_a: plan(oa)?,
                side_b: plan(ob)?,
            }))
        }
        other => Err(format!("unknown node `{other}`")),
    }
}

fn replay_node(node: &CertNode, simple: bool) -> Result<ReplayNode> {
    let fail = |m: String| Error::Replay(m);
    let check = |g: &Graph, what: &str| -> Result<()> {
        if !is_circuit(g) {
            return Err(fail(format!("{what} is not a circuit")));
        }
        if simple && !g.is_simple() {
            return Err(fail(format!("{what} is not simple")));
        }
        Ok(())
    };
    match node {
        CertNode::Base(name) => {
            let e = entry(name).ok_or_else(|| fail(format!("unknown base graph `{name}`")))?;
            if simple && e.family != Family::Simple {
                return Err(fail(format!("base `{name}` is not allowed for simple graphs")));
            }
            Ok(ReplayNode { label: format!("BASE {name}"), graph: e.graph.clone(), children: vec![] })
        }
        CertNode::Move(mv, kids) => {
            let children = kids
                .iter()
                .map(|k| replay_node(k, simple))
                .collect::<Result<Vec<_>>>()?;
            let arity = if matches!(mv, Move::Sum(_)) { 2 } else { 1 };
            if children.len() != arity {
                return Err(fail("wrong number of children".into()));
            }
            let label = move_line(
                mv,
                (arity == 2).then(|| (&children[0].graph, &children[1].graph)),
            );
            let h = &children[0].graph;
            let g = match mv {
                Move::Extension { v, del: (u, w), z } => {
                    if *v != h.order() {
                        return Err(fail(format!("new vertex must be {}, got {v}", h.order())));
                    }
                    one_extension(h, *u, *w, *z)?
                }
                Move::XReplacement { v, del } => {
                    if *v != h.order() {
                        return Err(fail(format!("new vertex must be {}, got {v}", h.order())));
                    }
                    x_replacement(h, del[0], del[1])?
                }
                Move::Sum(s) => sum_join(s, h, &children[1].graph)?.graph,
            };
            check(&g, &label)?;
            Ok(ReplayNode { label, graph: g, children })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::g60;
    use crate::engine::decompose;

    #[test]
    fn text_round_trip() {
        let c = decompose(&g60()).unwrap();
        let text = c.to_text().unwrap();
        assert!(text.starts_with("ROOT "));
        assert!(text.contains("0 EXT v=5"));
        assert!(text.contains("1 BASE K5"));
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text().unwrap(), text);
    }

    #[test]
    fn corrupted_labels_fail() {
        let c = decompose(&g60()).unwrap();
        let text = c.to_text().unwrap().replace("v=5", "v=7");
        let back = Certificate::parse(&text).unwrap();
        assert!(back.replay().is_err());
        assert!(Certificate::parse("ROOT zz\n0 BASE K5\n").is_err());
        assert!(Certificate::parse("ROOT 05\n0 EXT v=5\n").is_err());
    }

    #[test]
    fn wrong_root_fails() {
        let mut c = decompose(&g60()).unwrap();
        c.root = canonical_form(&Graph::complete(5)).unwrap();
        assert!(matches!(c.replay(), Err(Error::Replay(_))));
    }
}
