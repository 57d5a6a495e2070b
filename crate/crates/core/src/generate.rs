//! Seeded random circuits, built forward from the simple bases with
//! 1-extensions, X-replacements and sums.

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{base_graphs, Family};
use crate::error::{Error, Result};
use crate::graph::{mask_of, Graph, Vertex};
use crate::moves::{one_extension, x_replacement};
use crate::sparsity::{is_circuit, CountTable};
use crate::sums::{
    build_part, k4_assignments, k4_edges_type, k5_variants, k5f3_variants, sum_join, Build, GadgetKind, SidePlan, SumCase, SumMove,
};

/// Smallest circuit order.
pub const MIN_ORDER: usize = 5;

/// Tries per requested sum before falling back to vertex moves.
const SUM_ATTEMPTS: usize = 40;

/// A sum assembled by the generator together with its parts.
#[derive(Clone, Debug)]
pub struct GeneratedSum {
    pub mv: SumMove,
    pub ga: Graph,
    pub gb: Graph,
    pub graph: Graph,
}

/// Smallest order of a simple circuit produced by a sum of this case.
pub fn min_sum_order(case: SumCase) -> usize {
    2 * MIN_ORDER - overlap(case)
}

/// Vertices shared by the two remnants of a sum.
fn overlap(case: SumCase) -> usize {
    match case {
        SumCase::One => 1,
        SumCase::TwoA | SumCase::TwoB | SumCase::Three => 2,
        SumCase::Four | SumCase::Five => 0,
    }
}

/// Whether a case-5 part satisfies the side conditions under which the
/// join of two circuits is again a circuit: an apex part, a `K4` part
/// meeting three or four gadget vertices with no proper critical set, or
/// one meeting two gadget vertices whose only proper critical set is the
/// remnant plus those two.
pub fn case5_side_conditions(part: &Graph, plan: &SidePlan) -> Result<bool> {
    side_conditions(part, plan, true)
}

/// The weaker form that holds for every part split off a circuit without
/// proper critical sets: type 2 need only contain the remnant plus its two
/// gadget vertices among its proper critical sets.
pub fn case5_split_side_properties(part: &Graph, plan: &SidePlan) -> Result<bool> {
    side_conditions(part, plan, false)
}

fn side_conditions(part: &Graph, plan: &SidePlan, unique: bool) -> Result<bool> {
    match plan.kind {
        GadgetKind::Apex => Ok(true),
        GadgetKind::K4Edges => {
            let table = CountTable::new(part)?;
            let proper = table.proper_critical_sets();
            if k4_edges_type(part, plan) == 2 {
                let unused: Vec<Vertex> = plan
                    .gadget
                    .iter()
                    .copied()
                    .filter(|&g| part.neighbors(g).iter().all(|t| plan.gadget.contains(t)))
                    .collect();
                let expected = table.full() & !mask_of(&unused);
                Ok(if unique { proper == [expected] } else { proper.contains(&expected) })
            } else {
                Ok(proper.is_empty())
            }
        }
        k => Err(Error::InvalidArgument(format!("{k:?} is not a case-5 gadget"))),
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    /// Probability that a circuit large enough for a sum is built as one.
    pub sum_rate: f64,
    bases: Vec<Graph>,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            sum_rate: 0.5,
            bases: base_graphs(Family::Simple).into_iter().map(|e| e.graph).collect(),
        }
    }

    /// A random simple circuit with exactly `n` vertices.
    pub fn circuit(&mut self, n: usize) -> Result<Graph> {
        if n < MIN_ORDER {
            return Err(Error::InvalidArgument(format!("no circuit has {n} vertices")));
        }
        let cases: Vec<SumCase> = SumCase::ALL.into_iter().filter(|&c| min_sum_order(c) <= n).collect();
        if !cases.is_empty() && self.rng.gen_bool(self.sum_rate) {
            for _ in 0..SUM_ATTEMPTS {
                let case = *cases.choose(&mut self.rng).expect("nonempty");
                if let Some(s) = self.sum(case, n)? {
                    return Ok(s.graph);
                }
            }
        }
        let start = self
            .bases
            .iter()
            .filter(|b| b.order() <= n)
            .choose(&mut self.rng)
            .expect("K5 fits")
            .clone();
        self.grow(start, n)
    }

    /// A random simple circuit with between five and `max` vertices.
    pub fn circuit_up_to(&mut self, max: usize) -> Result<Graph> {
        if max < MIN_ORDER {
            return Err(Error::InvalidArgument(format!("no circuit has at most {max} vertices")));
        }
        let n = self.rng.gen_range(MIN_ORDER..=max);
        self.circuit(n)
    }

    /// Applies random 1-extensions and X-replacements until `g` has `n`
    /// vertices. Each result is checked to be a circuit.
    pub fn grow(&mut self, mut g: Graph, n: usize) -> Result<Graph> {
        while g.order() < n {
            let edges = g.edges();
            let disjoint: Vec<((Vertex, Vertex), (Vertex, Vertex))> = if self.rng.gen_bool(0.5) {
                let (a, b) = *edges.choose(&mut self.rng).expect("circuits have edges");
                let others: Vec<_> = edges
                    .iter()
                    .copied()
                    .filter(|&(c, d)| c != a && c != b && d != a && d != b)
                    .collect();
                others.choose(&mut self.rng).map(|&cd| vec![((a, b), cd)]).unwrap_or_default()
            } else {
                Vec::new()
            };
            let (h, what) = match disjoint.first() {
                Some(&(ab, cd)) => (x_replacement(&g, ab, cd)?, "X-replacement"),
                None => {
                    let (x, y) = *edges.choose(&mut self.rng).expect("circuits have edges");
                    let z = g
                        .vertices()
                        .filter(|&z| z != x && z != y)
                        .choose(&mut self.rng)
                        .expect("order at least five");
                    (one_extension(&g, x, y, z)?, "1-extension")
                }
            };
            if !is_circuit(&h) {
                return Err(Error::TheoremViolation(format!("{what} of {g:?} is not a circuit")));
            }
            g = h;
        }
        Ok(g)
    }

    /// Attempts one sum of the given case with exactly `n` vertices.
    /// `None` when the random choices did not produce two circuit parts or
    /// a simple result. A join that should give a circuit but does not is
    /// reported as a theorem violation.
    pub fn sum(&mut self, case: SumCase, n: usize) -> Result<Option<GeneratedSum>> {
        if n < min_sum_order(case) {
            return Ok(None);
        }
        let total = n + overlap(case);
        let ma = self.rng.gen_range(MIN_ORDER..=total - MIN_ORDER);
        let ca = self.circuit(ma)?;
        let cb = self.circuit(total - ma)?;
        let Some((ga, cut_a, side_a)) = self.part(case, true, &ca)? else {
            return Ok(None);
        };
        let Some((gb, mut cut_b, side_b)) = self.part(case, false, &cb)? else {
            return Ok(None);
        };
        cut_b.shuffle(&mut self.rng);
        let mv = SumMove { case, cut_a, cut_b, side_a, side_b };
        let joined = sum_join(&mv, &ga, &gb)?.graph;
        if !joined.is_simple() {
            return Ok(None);
        }
        let guaranteed = case != SumCase::Five
            || (case5_side_conditions(&ga, &mv.side_a)? && case5_side_conditions(&gb, &mv.side_b)?);
        if !is_circuit(&joined) {
            if guaranteed {
                return Err(Error::TheoremViolation(format!(
                    "case {case} join of two circuits is not a circuit: {joined:?}"
                )));
            }
            return Ok(None);
        }
        Ok(Some(GeneratedSum { mv, ga, gb, graph: joined }))
    }

    fn variant(&mut self, kind: GadgetKind) -> (usize, usize) {
        *k5_variants(kind).choose(&mut self.rng).expect("variants exist")
    }

    /// Builds one part from the circuit `c`: some edges removed and the
    /// case's gadget attached at random vertices.
    fn part(&mut self, case: SumCase, side_a: bool, c: &Graph) -> Result<Option<(Graph, Vec<Vertex>, SidePlan)>> {
        use GadgetKind::*;
        let (kind, drop) = match (case, side_a) {
            (SumCase::One, _) => (K5e, 1),
            (SumCase::TwoA, _) | (SumCase::Three, true) => (K4, 2),
            (SumCase::TwoB, true) => (Edge, 0),
            (SumCase::TwoB, false) | (SumCase::Three, false) => (K5f, 3),
            (SumCase::Four, true) => (Apex, 1),
            (SumCase::Four, false) => (K5f3, 2),
            (SumCase::Five, _) => (if self.rng.gen_bool(0.5) { Apex } else { K4Edges }, 2),
        };
        let mut rem = c.clone();
        for (u, v) in c.edges().choose_multiple(&mut self.rng, drop) {
            rem.remove_edge(*u, *v)?;
        }
        let n = rem.order();
        let all: Vec<Vertex> = rem.vertices().collect();
        let distinct = |rng: &mut ChaCha8Rng, k: usize| -> Vec<Vertex> { all.choose_multiple(rng, k).copied().collect() };
        let nonadjacent = |rng: &mut ChaCha8Rng| -> Option<(Vertex, Vertex)> {
            let pairs: Vec<(Vertex, Vertex)> = (0..n)
                .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
                .filter(|&(x, y)| !rem.has_edge(x, y))
                .collect();
            pairs.choose(rng).copied()
        };
        let (cut, built) = match kind {
            K5e => {
                let x = distinct(&mut self.rng, 1);
                let p = build_part(&rem, &all, None, None, Build::K5e(x[0], self.variant(K5e)))?;
                (x, p)
            }
            K4 | K5f => {
                let Some((x, y)) = nonadjacent(&mut self.rng) else {
                    return Ok(None);
                };
                let size = if kind == K4 { 4 } else { 5 };
                (vec![x, y], build_part(&rem, &all, None, None, Build::Wired(size, x, y, self.variant(K5f)))?)
            }
            Edge => {
                let (x, y) = *rem.edges().choose(&mut self.rng).expect("circuits have edges");
                (vec![x, y], (rem.clone(), Vec::new()))
            }
            Apex => {
                let xs = distinct(&mut self.rng, if case == SumCase::Four { 3 } else { 4 });
                let p = build_part(&rem, &all, None, None, Build::Apex(&xs))?;
                (xs, p)
            }
            K5f3 => {
                let ys = distinct(&mut self.rng, 3);
                let (r, missing) = *k5f3_variants().choose(&mut self.rng).expect("variants exist");
                let p = build_part(&rem, &all, None, None, Build::K5f3(&ys, r, missing))?;
                (ys, p)
            }
            K4Edges => {
                let mut xs = distinct(&mut self.rng, 3);
                let again = *xs.choose(&mut self.rng).expect("three ends");
                xs.push(again);
                xs.shuffle(&mut self.rng);
                let r = *k4_assignments(&xs).choose(&mut self.rng).expect("assignments exist");
                let p = build_part(&rem, &all, None, None, Build::K4Edges(&xs, r))?;
                (xs, p)
            }
        };
        let (part, gadget) = built;
        if !part.is_simple() || !is_circuit(&part) {
            return Ok(None);
        }
        Ok(Some((part, cut, SidePlan { kind, gadget })))
    }
}

/// `count` random simple circuits with orders between five and `max_order`.
pub fn random_circuits(seed: u64, count: usize, max_order: usize) -> Result<Vec<Graph>> {
    let mut g = Generator::new(seed);
    (0..count).map(|_| g.circuit_up_to(max_order)).collect()
}

/// `count` random sums, cycling through the cases, with orders up to
/// `max_order` (at least ten so every case fits).
pub fn random_sums(seed: u64, count: usize, max_order: usize) -> Result<Vec<GeneratedSum>> {
    let mut g = Generator::new(seed);
    let mut out = Vec::with_capacity(count);
    let mut misses = 0;
    while out.len() < count {
        let case = SumCase::ALL[out.len() % SumCase::ALL.len()];
        let lo = min_sum_order(case);
        if lo > max_order {
            return Err(Error::InvalidArgument(format!("case {case} needs order {lo}")));
        }
        let n = g.rng.gen_range(lo..=max_order);
        match g.sum(case, n)? {
            Some(s) => out.push(s),
            None => {
                misses += 1;
                if misses > 1000 * count.max(1) {
                    return Err(Error::InvalidArgument(format!("case {case} sums keep failing")));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_circuits_are_simple_circuits_of_the_requested_order() {
        let mut g = Generator::new(7);
        for n in 5..=12 {
            for _ in 0..5 {
                let h = g.circuit(n).unwrap();
                assert_eq!(h.order(), n);
                assert!(h.is_simple() && is_circuit(&h));
            }
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = random_circuits(3, 20, 10).unwrap();
        let b = random_circuits(3, 20, 10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn every_case_produces_sums() {
        let sums = random_sums(11, 24, 12).unwrap();
        for case in SumCase::ALL {
            assert!(sums.iter().filter(|s| s.mv.case == case).count() >= 4);
        }
        for s in &sums {
            assert!(s.graph.is_simple() && is_circuit(&s.graph));
            assert!(is_circuit(&s.ga) && is_circuit(&s.gb));
        }
    }

    #[test]
    fn min_orders() {
        assert_eq!(min_sum_order(SumCase::One), 9);
        assert_eq!(min_sum_order(SumCase::TwoA), 8);
        assert_eq!(min_sum_order(SumCase::Five), 10);
    }
}
