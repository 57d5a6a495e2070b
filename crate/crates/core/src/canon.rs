//! Canonical labeling by colour refinement and individualization search.
//!
//! Leaves of the search tree are discrete ordered partitions; the canonical
//! form is the lexicographically smallest adjacency encoding over all leaves.
//! Two prunings keep symmetric graphs cheap: vertices of a target cell in the
//! same orbit (under automorphisms found so far that fix the current prefix)
//! are explored once, and a leaf equivalent to the best leaf abandons the
//! subtree back to the depth where the two paths diverge.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Upper bound on the order accepted by canonical labeling.
pub const MAX_CANON_ORDER: usize = 64;

/// Bytes identifying the isomorphism class of a graph: the order, then the
/// upper triangle (diagonal included) of the multiplicity matrix in
/// canonical vertex order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        hex::decode(s.trim()).ok().map(CanonicalForm)
    }

    /// Rebuilds the canonical representative.
    pub fn to_graph(&self) -> Graph {
        let n = self.0[0] as usize;
        let mut g = Graph::empty(n);
        let mut k = 1;
        for u in 0..n {
            for v in u..n {
                for _ in 0..self.0[k] {
                    g.add_edge(u, v).expect("in range");
                }
                k += 1;
            }
        }
        g
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A canonical form together with the vertex order that realises it:
/// `order[i]` is the vertex placed at canonical position `i`.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub form: CanonicalForm,
    pub order: Vec<Vertex>,
}

impl Labeling {
    /// Permutation sending each vertex to its canonical position.
    pub fn position_of(&self) -> Vec<Vertex> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    Ok(canonical_labeling(g)?.form)
}

pub fn canonical_labeling(g: &Graph) -> Result<Labeling> {
    colored_labeling(g, &vec![0; g.order()])
}

/// Canonical labeling of a vertex-coloured graph. Colours are part of the
/// identity: the form compares colour sequences before adjacency.
pub fn colored_labeling(g: &Graph, colors: &[u32]) -> Result<Labeling> {
    let n = g.order();
    if n > MAX_CANON_ORDER {
        return Err(Error::SizeBound {
            what: "canonical labeling",
            order: n,
            bound: MAX_CANON_ORDER,
        });
    }
    assert_eq!(colors.len(), n);
    let mut search = Search {
        g,
        colors,
        best: None,
        best_path: Vec::new(),
        autos: Vec::new(),
    };
    let mut keys: Vec<(u32, usize, usize, Vertex)> = g
        .vertices()
        .map(|v| (colors[v], g.degree(v), g.loops(v), v))
        .collect();
    keys.sort_unstable();
    let mut part: Vec<Vec<Vertex>> = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        if i == 0 || (k.0, k.1, k.2) != (keys[i - 1].0, keys[i - 1].1, keys[i - 1].2) {
            part.push(Vec::new());
        }
        part.last_mut().unwrap().push(k.3);
    }
    search.visit(part, Vec::new());
    let (key, order) = search.best.expect("at least one leaf");
    let bytes = if colors.iter().all(|&c| c == 0) {
        key.iter().map(|&x| x as u8).collect()
    } else {
        encode_plain(g, &order)
    };
    Ok(Labeling {
        form: CanonicalForm(bytes),
        order,
    })
}

/// Isomorphism `g -> h` as a map from vertices of `g` to vertices of `h`.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Result<Option<Vec<Vertex>>> {
    if g.order() != h.order() || g.size() != h.size() {
        return Ok(None);
    }
    let lg = canonical_labeling(g)?;
    let lh = canonical_labeling(h)?;
    if lg.form != lh.form {
        return Ok(None);
    }
    let mut map = vec![0; g.order()];
    for (&a, &b) in lg.order.iter().zip(&lh.order) {
        map[a] = b;
    }
    Ok(Some(map))
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    Ok(find_isomorphism(g, h)?.is_some())
}

fn encode_plain(g: &Graph, order: &[Vertex]) -> Vec<u8> {
    let n = order.len();
    let mut out = Vec::with_capacity(1 + n * (n + 1) / 2);
    out.push(n as u8);
    for i in 0..n {
        for j in i..n {
            out.push(g.multiplicity(order[i], order[j]) as u8);
        }
    }
    out
}

struct Search<'a> {
    g: &'a Graph,
    colors: &'a [u32],
    best: Option<(Vec<u32>, Vec<Vertex>)>,
    best_path: Vec<Vertex>,
    autos: Vec<Vec<Vertex>>,
}

impl Search<'_> {
    fn key(&self, order: &[Vertex]) -> Vec<u32> {
        let n = order.len();
        let mut out = Vec::with_capacity(1 + 2 * n + n * (n + 1) / 2);
        out.push(n as u32);
        if self.colors.iter().any(|&c| c != 0) {
            out.extend(order.iter().map(|&v| self.colors[v]));
        }
        for i in 0..n {
            for j in i..n {
                out.push(self.g.multiplicity(order[i], order[j]) as u32);
            }
        }
        out
    }

    /// Returns `Some(d)` to abandon every node deeper than `d`.
    fn visit(&mut self, mut part: Vec<Vec<Vertex>>, prefix: Vec<Vertex>) -> Option<usize> {
        refine(self.g, &mut part);
        let Some(target) = part.iter().position(|c| c.len() > 1) else {
            let order: Vec<Vertex> = part.into_iter().map(|c| c[0]).collect();
            return self.leaf(order, &prefix);
        };
        let depth = prefix.len();
        let cell = part[target].clone();
        let mut tried: Vec<Vertex> = Vec::new();
        for &v in &cell {
            if !tried.is_empty() && self.same_orbit(&prefix, &tried, v) {
                continue;
            }
            tried.push(v);
            let mut child = Vec::with_capacity(part.len() + 1);
            child.extend(part[..target].iter().cloned());
            child.push(vec![v]);
            child.push(cell.iter().copied().filter(|&w| w != v).collect());
            child.extend(part[target + 1..].iter().cloned());
            let mut p = prefix.clone();
            p.push(v);
            if let Some(d) = self.visit(child, p) {
                if d < depth {
                    return Some(d);
                }
            }
        }
        None
    }

    fn leaf(&mut self, order: Vec<Vertex>, prefix: &[Vertex]) -> Option<usize> {
        let key = self.key(&order);
        match &self.best {
            None => {
                self.best = Some((key, order));
                self.best_path = prefix.to_vec();
                None
            }
            Some((bk, border)) => match key.cmp(bk) {
                std::cmp::Ordering::Less => {
                    self.best = Some((key, order));
                    self.best_path = prefix.to_vec();
                    None
                }
                std::cmp::Ordering::Greater => None,
                std::cmp::Ordering::Equal => {
                    let n = order.len();
                    let mut gamma = vec![0; n];
                    for i in 0..n {
                        gamma[border[i]] = order[i];
                    }
                    // gamma maps the best path onto this one, so the subtree
                    // below the divergence point is an image of one already seen.
                    let d = self
                        .best_path
                        .iter()
                        .zip(prefix)
                        .position(|(a, b)| a != b)
                        .unwrap_or(prefix.len());
                    self.autos.push(gamma);
                    Some(d)
                }
            },
        }
    }

    fn same_orbit(&self, prefix: &[Vertex], tried: &[Vertex], v: Vertex) -> bool {
        let n = self.g.order();
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut c = x;
            while uf[c] != r {
                let nx = uf[c];
                uf[c] = r;
                c = nx;
            }
            r
        }
        for gamma in &self.autos {
            if prefix.iter().all(|&p| gamma[p] == p) {
                for x in 0..n {
                    let a = find(&mut uf, x);
                    let b = find(&mut uf, gamma[x]);
                    if a != b {
                        uf[a] = b;
                    }
                }
            }
        }
        let rv = find(&mut uf, v);
        tried.iter().any(|&t| find(&mut uf, t) == rv)
    }
}

/// Refines an ordered partition to the coarsest equitable refinement.
/// Cell order is derived from label-independent signatures only.
pub(crate) fn refine(g: &Graph, part: &mut Vec<Vec<Vertex>>) {
    let n = g.order();
    let mut cell_of = vec![0usize; n];
    loop {
        for (i, c) in part.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        let k = part.len();
        let mut next: Vec<Vec<Vertex>> = Vec::with_capacity(n);
        for cell in part.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<usize>, Vertex)> = cell
                .iter()
                .map(|&v| {
                    let mut s = vec![0usize; k + 1];
                    s[k] = g.loops(v);
                    for w in 0..n {
                        if w != v {
                            s[cell_of[w]] += g.multiplicity(v, w);
                        }
                    }
                    (s, v)
                })
                .collect();
            sigs.sort();
            for (i, (s, v)) in sigs.iter().enumerate() {
                if i == 0 || *s != sigs[i - 1].0 {
                    next.push(Vec::new());
                }
                next.last_mut().unwrap().push(*v);
            }
        }
        let done = next.len() == part.len();
        *part = next;
        if done {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use itertools::Itertools;
    use proptest::prelude::*;

    fn arb_multigraph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec((0..n, 0..n), 0..=max_m)
                .prop_map(move |es| Graph::from_edges(n, &es).expect("in range"))
        })
    }

    fn isomorphic_bruteforce(g: &Graph, h: &Graph) -> bool {
        g.order() == h.order()
            && g.size() == h.size()
            && (0..g.order()).permutations(g.order()).any(|p| g.permuted(&p) == *h)
    }

    proptest! {
        #[test]
        fn form_is_invariant_under_relabeling(g in arb_multigraph(9, 24), seed in any::<u64>()) {
            prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&shuffled(&g, seed)).unwrap());
            prop_assert_eq!(canonical_form(&g).unwrap().to_graph().size(), g.size());
        }

        #[test]
        fn equal_forms_iff_isomorphic(g in arb_multigraph(5, 8), h in arb_multigraph(5, 8)) {
            let same = canonical_form(&g).unwrap() == canonical_form(&h).unwrap();
            prop_assert_eq!(same, isomorphic_bruteforce(&g, &h));
        }
    }
    use super::*;

    fn shuffled(g: &Graph, seed: u64) -> Graph {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<Vertex> = g.vertices().collect();
        perm.shuffle(&mut rng);
        g.permuted(&perm)
    }

    #[test]
    fn invariant_under_relabeling() {
        let g = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 1), (2, 4), (2, 4)],
        )
        .unwrap();
        let f = canonical_form(&g).unwrap();
        for s in 0..20 {
            let h = shuffled(&g, s);
            assert_eq!(canonical_form(&h).unwrap(), f);
            let iso = find_isomorphism(&g, &h).unwrap().unwrap();
            assert_eq!(g.permuted(&iso), h);
        }
        assert_eq!(f.to_graph().order(), 6);
        assert!(is_isomorphic(&f.to_graph(), &g).unwrap());
    }

    #[test]
    fn distinguishes_regular_graphs() {
        // Prism and K_{3,3} are both 3-regular on six vertices.
        let prism = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let k33 = Graph::from_edges(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert_ne!(canonical_form(&prism).unwrap(), canonical_form(&k33).unwrap());
    }

    #[test]
    fn symmetric_graphs_are_fast() {
        let g = Graph::complete(40);
        let f = canonical_form(&g).unwrap();
        assert_eq!(f, canonical_form(&shuffled(&g, 3)).unwrap());
    }

    #[test]
    fn colours_matter() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let a = colored_labeling(&g, &[1, 0, 0]).unwrap();
        let b = colored_labeling(&g, &[0, 0, 1]).unwrap();
        assert_eq!(a.form, b.form);
        let c = colored_labeling(&g, &[0, 1, 0]).unwrap();
        assert_eq!(a.order[2], 0);
        assert_eq!(c.order[2], 1);
    }
}
