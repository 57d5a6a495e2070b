use sparse21::catalog::{all_entries, Family};
use sparse21::certificate::Certificate;
use sparse21::engine::{decompose, decompose_with, Mode};
use sparse21::enumerate::enumerate_exhaustive;
use sparse21::generate::random_sums;
use sparse21::io::{parse_graph, to_edge_list, to_graph6};
use sparse21::sparsity::is_circuit;
use sparse21::sums::sum_join;
use sparse21::{canonical_form, Error, Graph};

#[test]
fn census_certificates_survive_text_round_trip() {
    for n in 5..=7 {
        for g in enumerate_exhaustive(n).unwrap().graphs() {
            let text = decompose(g).unwrap().to_text().unwrap();
            let cert = Certificate::parse(&text).unwrap();
            assert_eq!(cert.to_text().unwrap(), text);
            assert_eq!(canonical_form(&cert.replay().unwrap()).unwrap(), canonical_form(g).unwrap());
        }
    }
}

#[test]
fn multigraph_fixtures_decompose_in_multigraph_mode() {
    for e in all_entries().iter().filter(|e| e.family == Family::MultiExtra) {
        let cert = decompose_with(&e.graph, Mode::Multigraph).unwrap();
        assert!(!cert.simple_mode());
        assert_eq!(cert.root, canonical_form(&e.graph).unwrap(), "{}", e.name);
    }
}

#[test]
fn generated_sums_join_to_circuits() {
    for s in random_sums(7, 60, 11).unwrap() {
        let joined = sum_join(&s.mv, &s.ga, &s.gb).unwrap();
        assert!(is_circuit(&joined.graph), "case {}", s.mv.case.tag());
    }
}

#[test]
fn graph_formats_agree() {
    for e in all_entries().iter().filter(|e| e.family == Family::Simple) {
        let from_list = parse_graph(&to_edge_list(&e.graph)).unwrap();
        let from_g6 = parse_graph(&to_graph6(&e.graph).unwrap()).unwrap();
        assert_eq!(from_list, e.graph);
        assert_eq!(canonical_form(&from_g6).unwrap(), canonical_form(&e.graph).unwrap());
    }
}

#[test]
fn non_circuits_are_refused() {
    let mut g = Graph::complete(5);
    g.remove_edge(0, 1).unwrap();
    assert!(matches!(decompose(&g), Err(Error::NotCircuit)));
    let loops = Graph::from_edges(1, &[(0, 0), (0, 0)]).unwrap();
    assert!(matches!(decompose_with(&loops, Mode::Simple), Err(Error::NotSimple)));
}
