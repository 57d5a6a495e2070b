//! Property sweeps: the counting and connectivity facts about circuits,
//! checked over censuses, random circuits, random sums and random 4-regular
//! graphs. Violations are report content, not errors.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canon::{canonical_form, is_isomorphic};
use crate::catalog::is_base;
use crate::certificate::Certificate;
use crate::connectivity::{is_essentially_k_edge_connected, is_k_connected, is_two_edge_connected};
use crate::engine::{admissible_degree4, admissible_nodes, classify_separation, decompose, split_options, Mode};
use crate::enumerate::{enumerate_exhaustive, Census};
use crate::generate::{case5_side_conditions, case5_split_side_properties, random_circuits, random_sums, GeneratedSum};
use crate::graph::{Graph, Vertex};
use crate::moves::one_reduction;
use crate::sparsity::{degree_three_forest, find_critical_set, in_k4, is_circuit, CountTable};
use crate::sums::{sum_join, sum_split, SumCase};
use crate::Result;

pub const REGULAR_MIN_DEGREE: &str = "regular_min_degree";
pub const CONNECTIVITY: &str = "connected_2_edge_connected";
pub const CRITICAL_CLOSURE: &str = "critical_union_intersection";
pub const REDUCTION_TEST: &str = "reduction_vs_critical_set";
pub const DEGREE3_FOREST: &str = "degree3_forest";
pub const DEGREE3_OUTSIDE: &str = "degree3_outside_proper_critical";
pub const NODES_OUTSIDE: &str = "k4_free_nodes_outside_proper_critical";
pub const ADMISSIBLE_NODE: &str = "admissible_node";
pub const ADMISSIBLE_DEGREE4: &str = "admissible_degree4";
pub const SPLIT_ROUND_TRIP: &str = "split_round_trip";
pub const CASE5_CONDITIONS: &str = "case5_side_conditions";
pub const JOIN_CIRCUIT: &str = "join_of_circuits";
pub const JOIN_CORRUPTED: &str = "join_with_corrupted_part";
pub const CERTIFICATE: &str = "certificate_replay";
pub const CERTIFICATE_2CONN: &str = "certificate_2_connected";

/// Violations kept per check; the count is always exact.
const KEPT: usize = 5;

#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub checked: usize,
    pub violations: usize,
    pub examples: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub checks: BTreeMap<&'static str, Tally>,
    pub circuits: usize,
    pub four_regular: usize,
    /// Circuits with neither an admissible node nor an admissible degree-4 vertex.
    pub stuck: Vec<Graph>,
}

impl SweepReport {
    pub fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let t = self.checks.entry(name).or_default();
        t.checked += 1;
        if !ok {
            t.violations += 1;
            if t.examples.len() < KEPT {
                t.examples.push(detail());
            }
        }
    }

    fn error(&mut self, name: &'static str, g: &Graph, e: crate::Error) {
        self.record(name, false, || format!("{e} on {}", brief(g)));
    }

    pub fn merge(mut self, other: SweepReport) -> SweepReport {
        for (name, t) in other.checks {
            let mine = self.checks.entry(name).or_default();
            mine.checked += t.checked;
            mine.violations += t.violations;
            let room = KEPT.saturating_sub(mine.examples.len());
            mine.examples.extend(t.examples.into_iter().take(room));
        }
        self.circuits += other.circuits;
        self.four_regular += other.four_regular;
        self.stuck.extend(other.stuck);
        self
    }

    pub fn violations(&self) -> usize {
        self.checks.values().map(|t| t.violations).sum()
    }

    pub fn tally(&self, name: &str) -> Tally {
        self.checks.get(name).cloned().unwrap_or_default()
    }

    /// One `name checked=.. violations=..` line per check, then the counts.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (name, t) in &self.checks {
            let _ = writeln!(s, "{name} checked={} violations={}", t.checked, t.violations);
            for e in &t.examples {
                let _ = writeln!(s, "  {e}");
            }
        }
        let _ = writeln!(s, "circuits={}", self.circuits);
        let _ = writeln!(s, "four_regular={}", self.four_regular);
        let _ = writeln!(s, "stuck={}", self.stuck.len());
        let _ = writeln!(s, "violations={}", self.violations());
        s
    }
}

fn brief(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("n={} [{}]", g.order(), edges.join(" "))
}

fn is_four_regular(g: &Graph) -> bool {
    g.order() > 0 && g.vertices().all(|v| g.degree(v) == 4)
}

/// Every check that applies to a single simple circuit.
pub fn check_circuit(g: &Graph, rep: &mut SweepReport) {
    rep.circuits += 1;
    if is_four_regular(g) {
        rep.four_regular += 1;
    }
    if admissible_nodes(g, Mode::Simple).is_empty() && admissible_degree4(g, Mode::Simple).is_empty() {
        rep.stuck.push(g.clone());
    }
    let ok = g.min_degree() == Some(4);
    rep.record(REGULAR_MIN_DEGREE, ok == (g.is_connected() && is_four_regular(g)), || brief(g));
    rep.record(CONNECTIVITY, g.is_connected() && is_two_edge_connected(g), || brief(g));
    rep.record(DEGREE3_FOREST, degree_three_forest(g), || brief(g));
    if let Err(e) = critical_checks(g, rep) {
        rep.error(CRITICAL_CLOSURE, g, e);
    }
    reduction_checks(g, rep);
    if let Err(e) = split_checks(g, rep) {
        rep.error(SPLIT_ROUND_TRIP, g, e);
    }
    certificate_checks(g, rep);
}

fn critical_checks(g: &Graph, rep: &mut SweepReport) -> Result<()> {
    let table = CountTable::new(g)?;
    let n = g.order();
    let crit = table.critical_sets();
    for (i, &x) in crit.iter().enumerate() {
        for &y in &crit[i + 1..] {
            let (meet, join) = (x & y, x | y);
            if meet == 0 || join.count_ones() as usize > n - 1 {
                continue;
            }
            // Edges between X - Y and Y - X, by inclusion-exclusion.
            let d = table.count(join) + table.count(meet) - table.count(x) - table.count(y);
            let ok = table.is_critical(meet) && table.is_critical(join) && d == 0;
            rep.record(CRITICAL_CLOSURE, ok, || format!("sets {x:#b} {y:#b} in {}", brief(g)));
        }
    }
    let proper = table.proper_critical_sets();
    let ess4 = is_essentially_k_edge_connected(g, 4)?;
    let ess5 = ess4 && is_essentially_k_edge_connected(g, 5)?;
    let three = is_k_connected(g, 3);
    let v3: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) == 3).collect();
    if ess4 {
        for &x in &proper {
            let outside = v3.iter().filter(|&&v| x & (1 << v) == 0).count();
            rep.record(DEGREE3_OUTSIDE, outside >= 2, || format!("set {x:#b} in {}", brief(g)));
            if three {
                let free = v3.iter().filter(|&&v| x & (1 << v) == 0 && !in_k4(g, v)).count();
                rep.record(NODES_OUTSIDE, free >= 2, || format!("set {x:#b} in {}", brief(g)));
            }
        }
    }
    let hypothesis = (ess5 && proper.is_empty()) || (ess4 && !proper.is_empty());
    if three && g.min_degree() == Some(3) && is_base(g).is_none() && hypothesis {
        rep.record(ADMISSIBLE_NODE, !admissible_nodes(g, Mode::Simple).is_empty(), || brief(g));
    }
    Ok(())
}

/// The direct circuit test on each 1-reduction against the critical-set
/// criterion: admissible iff no critical set holds both new ends while
/// avoiding the node and its third neighbour.
fn reduction_checks(g: &Graph, rep: &mut SweepReport) {
    for v in g.vertices() {
        let nb = g.neighbors(v);
        if g.degree(v) != 3 || nb.len() != 3 {
            continue;
        }
        for (u, w, z) in [(nb[0], nb[1], nb[2]), (nb[0], nb[2], nb[1]), (nb[1], nb[2], nb[0])] {
            if g.has_edge(u, w) {
                continue;
            }
            let direct = one_reduction(g, v, u, w).map(|h| is_circuit(&h));
            let lemma = find_critical_set(g, &[u, w], &[v, z]).map(|c| c.is_none());
            match (direct, lemma) {
                (Ok(a), Ok(b)) => rep.record(REDUCTION_TEST, a == b, || {
                    format!("node {v} adding {u}-{w}: direct {a}, critical-set test {b} in {}", brief(g))
                }),
                (Err(e), _) | (_, Err(e)) => rep.error(REDUCTION_TEST, g, e),
            }
        }
    }
}

/// Every separation must split into circuits under some choice, every
/// successful split must rejoin to `g`, and with no proper critical set
/// every case-5 split must succeed with parts of the expected critical type.
fn split_checks(g: &Graph, rep: &mut SweepReport) -> Result<()> {
    let form = canonical_form(g)?;
    let no_proper = CountTable::new(g)?.proper_critical_sets().is_empty();
    for sep in classify_separation(g)? {
        let mut any = false;
        for opts in split_options(&sep) {
            let s = match sum_split(g, &sep, &opts) {
                Ok(s) => s,
                Err(e) => {
                    // Without proper critical sets every case-5 part is a circuit.
                    if sep.case == SumCase::Five && no_proper {
                        rep.record(CASE5_CONDITIONS, false, || format!("{e} on {}", brief(g)));
                    }
                    continue;
                }
            };
            any = true;
            let back = sum_join(&s.mv, &s.ga, &s.gb).map(|j| canonical_form(&j.graph));
            let ok = is_circuit(&s.ga) && is_circuit(&s.gb) && matches!(back, Ok(Ok(ref f)) if *f == form);
            rep.record(SPLIT_ROUND_TRIP, ok, || format!("case {} on {}", sep.case.tag(), brief(g)));
            if sep.case == SumCase::Five && no_proper {
                let ok = case5_split_side_properties(&s.ga, &s.mv.side_a)? && case5_split_side_properties(&s.gb, &s.mv.side_b)?;
                rep.record(CASE5_CONDITIONS, ok, || brief(g));
            }
        }
        rep.record(SPLIT_ROUND_TRIP, any, || format!("no split for case {} on {}", sep.case.tag(), brief(g)));
    }
    Ok(())
}

/// Decomposes `g`, round-trips the certificate through text and replays it.
/// Along the replayed tree of a 2-connected circuit every graph must be
/// 2-connected.
fn certificate_checks(g: &Graph, rep: &mut SweepReport) {
    let run = || -> Result<(bool, Option<String>)> {
        let text = decompose(g)?.to_text()?;
        let cert = Certificate::parse(&text)?;
        let iso = is_isomorphic(&cert.replay()?, g)? && cert.to_text()? == text;
        let tree = cert.replay_tree()?;
        let mut broken = None;
        tree.walk(&mut |node| {
            if broken.is_none() && !is_k_connected(&node.graph, 2) {
                broken = Some(format!("{} at {}", brief(&node.graph), node.label));
            }
        });
        Ok((iso, broken))
    };
    match run() {
        Ok((iso, broken)) => {
            rep.record(CERTIFICATE, iso, || brief(g));
            if is_k_connected(g, 2) {
                rep.record(CERTIFICATE_2CONN, broken.is_none(), || format!("{} in {}", broken.unwrap_or_default(), brief(g)));
            }
        }
        Err(e) => rep.error(CERTIFICATE, g, e),
    }
}

/// Runs [`check_circuit`] over many circuits in parallel.
pub fn sweep_circuits(graphs: &[Graph]) -> SweepReport {
    graphs
        .par_iter()
        .map(|g| {
            let mut rep = SweepReport::default();
            check_circuit(g, &mut rep);
            rep
        })
        .reduce(SweepReport::default, SweepReport::merge)
}

pub fn lemma_sweep(census: &Census) -> SweepReport {
    let graphs: Vec<Graph> = census.graphs().cloned().collect();
    sweep_circuits(&graphs)
}

/// Seeds and sizes for [`full_sweep`].
#[derive(Clone, Copy, Debug)]
pub struct SweepPlan {
    pub seed: u64,
    /// Censuses run for orders 5 up to this.
    pub census_max: usize,
    pub random_circuits: usize,
    pub random_sums: usize,
    pub max_order: usize,
    pub regular_per_order: usize,
}

impl Default for SweepPlan {
    fn default() -> Self {
        SweepPlan { seed: 2024, census_max: 7, random_circuits: 1000, random_sums: 240, max_order: 12, regular_per_order: 40 }
    }
}

/// Every sweep: the exhaustive censuses, random circuits, random sums and
/// sampled 4-regular graphs.
pub fn full_sweep(plan: &SweepPlan) -> Result<SweepReport> {
    let mut rep = SweepReport::default();
    for n in 5..=plan.census_max {
        rep = rep.merge(lemma_sweep(&enumerate_exhaustive(n)?));
    }
    rep = rep.merge(sweep_circuits(&random_circuits(plan.seed, plan.random_circuits, plan.max_order)?));
    rep = rep.merge(sweep_sums(&random_sums(plan.seed, plan.random_sums, plan.max_order)?, plan.seed));
    Ok(rep.merge(sweep_regular(plan.seed, plan.regular_per_order, 8)))
}

/// Join checks on generated sums. A join of circuits is a circuit (case 5
/// only under its side conditions). Replacing a remnant edge of part A so
/// that it stops being a circuit must make the join fail or be no circuit;
/// case 5 is skipped there because another `K4` assignment could still
/// succeed.
pub fn sweep_sums(sums: &[GeneratedSum], seed: u64) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SweepReport::default();
    for s in sums {
        let guaranteed = s.mv.case != SumCase::Five
            || (case5_side_conditions(&s.ga, &s.mv.side_a).unwrap_or(false)
                && case5_side_conditions(&s.gb, &s.mv.side_b).unwrap_or(false));
        if guaranteed {
            let ok = match sum_join(&s.mv, &s.ga, &s.gb) {
                Ok(j) => is_circuit(&j.graph) && j.graph == s.graph,
                Err(_) => false,
            };
            rep.record(JOIN_CIRCUIT, ok, || format!("case {} giving {}", s.mv.case.tag(), brief(&s.graph)));
        }
        if s.mv.case == SumCase::Five {
            continue;
        }
        if let Some(bad) = corrupt(&s.ga, &s.mv.side_a.gadget, &mut rng) {
            let ok = match sum_join(&s.mv, &bad, &s.gb) {
                Ok(j) => !is_circuit(&j.graph),
                Err(_) => true,
            };
            rep.record(JOIN_CORRUPTED, ok, || format!("case {} with part {}", s.mv.case.tag(), brief(&bad)));
        }
    }
    rep
}

/// Moves one edge inside the remnant of a part so that it is no longer a circuit.
fn corrupt(part: &Graph, gadget: &[Vertex], rng: &mut ChaCha8Rng) -> Option<Graph> {
    let rem: Vec<Vertex> = part.vertices().filter(|v| !gadget.contains(v)).collect();
    let mut inside: Vec<(Vertex, Vertex)> = part
        .edges()
        .into_iter()
        .filter(|(u, v)| rem.contains(u) && rem.contains(v))
        .collect();
    inside.shuffle(rng);
    for &(u, v) in inside.iter().take(8) {
        for _ in 0..8 {
            let (a, b) = (rem[rng.gen_range(0..rem.len())], rem[rng.gen_range(0..rem.len())]);
            if a == b || part.has_edge(a, b) {
                continue;
            }
            let mut h = part.clone();
            h.remove_edge(u, v).ok()?;
            h.add_edge(a, b).ok()?;
            if !is_circuit(&h) {
                return Some(h);
            }
        }
    }
    None
}

/// A random simple 4-regular graph on `n` vertices by the pairing model,
/// if a simple pairing turns up.
fn random_four_regular(n: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    for _ in 0..200 {
        let mut points: Vec<Vertex> = (0..n).flat_map(|v| [v; 4]).collect();
        points.shuffle(rng);
        let mut g = Graph::empty(n);
        let simple = points.chunks(2).all(|p| p[0] != p[1] && !g.has_edge(p[0], p[1]) && g.add_edge(p[0], p[1]).is_ok());
        if simple {
            return Some(g);
        }
    }
    None
}

fn random_graph(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    Graph::from_edges(n, &pairs[..m.min(pairs.len())]).expect("pairs in range")
}

/// The minimum-degree characterisation on sampled 4-regular graphs of order
/// 5 to `max_n` and on random controls, and the admissible degree-4 vertex
/// on the essentially 5-edge-connected samples other than `K5`.
pub fn sweep_regular(seed: u64, per_order: usize, max_n: usize) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SweepReport::default();
    let mut seen = HashSet::new();
    for n in 5..=max_n {
        for _ in 0..per_order {
            if let Some(g) = random_four_regular(n, &mut rng) {
                let ok = g.is_connected() == is_circuit(&g);
                rep.record(REGULAR_MIN_DEGREE, ok, || brief(&g));
                let fresh = canonical_form(&g).map(|f| seen.insert(f)).unwrap_or(false);
                if fresh && n > 5 && g.is_connected() && is_essentially_k_edge_connected(&g, 5).unwrap_or(false) {
                    rep.record(ADMISSIBLE_DEGREE4, !admissible_degree4(&g, Mode::Simple).is_empty(), || brief(&g));
                }
            }
            // Controls: 2n random edges, and 4-regular plus extra edges.
            let c = random_graph(n, 2 * n, &mut rng);
            let lhs = is_circuit(&c) && c.min_degree() == Some(4);
            rep.record(REGULAR_MIN_DEGREE, lhs == (c.is_connected() && is_four_regular(&c)), || brief(&c));
            let full = n * (n - 1) / 2;
            if 2 * n < full {
                let c = random_graph(n, rng.gen_range(2 * n + 1..=full), &mut rng);
                let lhs = is_circuit(&c) && c.min_degree() == Some(4);
                rep.record(REGULAR_MIN_DEGREE, !lhs && !is_four_regular(&c), || brief(&c));
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{entry, g60};

    #[test]
    fn k5_is_clean_and_stuck() {
        let mut rep = SweepReport::default();
        check_circuit(&Graph::complete(5), &mut rep);
        assert_eq!(rep.violations(), 0, "{}", rep.render());
        assert_eq!((rep.four_regular, rep.stuck.len()), (1, 1));
    }

    #[test]
    fn fixtures_are_clean() {
        let graphs: Vec<Graph> = ["S5", "G293c", "S1"].iter().map(|n| entry(n).unwrap().graph.clone()).chain([g60()]).collect();
        let rep = sweep_circuits(&graphs);
        assert_eq!(rep.violations(), 0, "{}", rep.render());
        assert!(rep.tally(SPLIT_ROUND_TRIP).checked > 0);
    }

    #[test]
    fn reduction_test_is_exercised() {
        let mut rep = SweepReport::default();
        check_circuit(&g60(), &mut rep);
        assert_eq!(rep.tally(REDUCTION_TEST).checked, 1);
    }

    #[test]
    fn corrupted_parts_are_caught() {
        let sums = random_sums(5, 12, 11).unwrap();
        let rep = sweep_sums(&sums, 5);
        assert_eq!(rep.violations(), 0, "{}", rep.render());
        assert!(rep.tally(JOIN_CORRUPTED).checked > 0);
    }

    #[test]
    fn regular_samples() {
        let rep = sweep_regular(1, 10, 8);
        assert_eq!(rep.violations(), 0, "{}", rep.render());
        assert!(rep.tally(ADMISSIBLE_DEGREE4).checked > 0);
    }

    #[test]
    fn violations_are_counted_and_capped() {
        let mut rep = SweepReport::default();
        for _ in 0..9 {
            rep.record(DEGREE3_FOREST, false, || "x".into());
        }
        let t = rep.tally(DEGREE3_FOREST);
        assert_eq!((t.checked, t.violations, t.examples.len()), (9, 9, KEPT));
    }
}
