use std::collections::BTreeMap;

use sfcov_core::coverage::{extract_oracles, state_field_coverage, OracleQuery, Selector};
use sfcov_core::fixtures::{default_fixture_root, fixture_names, load_fixture, FixtureError};
use sfcov_core::graph::{build_type_graph, coverable_labels, iterable_fields, GraphOptions, LabelSet};

fn set<'a>(labels: impl IntoIterator<Item = &'a sfcov_core::graph::Label>) -> LabelSet {
    labels.into_iter().cloned().collect()
}

#[test]
fn every_fixture_matches_its_graph_expectations() {
    let root = default_fixture_root();
    let names = fixture_names(&root);
    assert!(names.len() >= 8, "fixtures found: {names:?}");
    for name in names {
        let fx = load_fixture(&root, &name).unwrap();
        let corpus = fx.corpus().unwrap();
        assert!(corpus.diagnostics.iter().all(|d| d.kind != sfcov_core::source::DiagnosticKind::Syntax), "{name}: {:?}", corpus.diagnostics);
        for exp in &fx.graphs {
            let g = build_type_graph(&corpus, &exp.graph.root, GraphOptions::default()).unwrap();
            assert_eq!(g, exp.graph, "{name}: graph of {}", exp.graph.root);
            assert_eq!(iterable_fields(&g), set(&exp.iterable), "{name}: iterable fields");
            assert_eq!(coverable_labels(&g), set(&exp.universe), "{name}: universe");
        }
    }
}

#[test]
fn every_fixture_matches_its_coverage_expectations() {
    let root = default_fixture_root();
    for name in fixture_names(&root) {
        let fx = load_fixture(&root, &name).unwrap();
        let corpus = fx.corpus().unwrap();
        for case in &fx.coverage {
            let mut query = OracleQuery::new(case.mode);
            if let Some(s) = &case.selector {
                query = query.with_selector(Selector::parse(s).unwrap());
            }
            let oracles = extract_oracles(&corpus, &case.roots, &query).unwrap();
            let universe = set(&case.universe);
            let graphs: Vec<_> =
                case.roots.iter().map(|r| build_type_graph(&corpus, r, GraphOptions::default()).unwrap()).collect();
            assert_eq!(sfcov_core::graph::merge_label_universes(&graphs), universe, "{name}: universe");

            let result = state_field_coverage(&corpus, &oracles, &universe, case.options);
            let got: BTreeMap<&str, _> = result.per_oracle.iter().map(|o| (o.id.as_str(), o)).collect();
            let ids: Vec<&str> = case.oracles.iter().map(|o| o.id.as_str()).collect();
            assert_eq!(got.keys().copied().collect::<Vec<_>>(), ids, "{name}: oracle ids");
            for exp in &case.oracles {
                let o = got[exp.id.as_str()];
                assert_eq!(o.covered, set(&exp.covered), "{name}: {}", exp.id);
                match (o.sfc, exp.sfc) {
                    (Some(a), Some(b)) => assert!((a - b).abs() < 1e-12, "{name}: {} sfc {a} vs {b}", exp.id),
                    (a, b) => assert_eq!(a, b, "{name}: {} sfc", exp.id),
                }
            }
            assert_eq!(result.covered, set(&case.aggregate.covered), "{name}: aggregate");
            match (result.sfc, case.aggregate.sfc) {
                (Some(a), Some(b)) => assert!((a - b).abs() < 1e-12),
                (a, b) => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn unknown_fixture() {
    let err = load_fixture(&default_fixture_root(), "no-such-fixture").unwrap_err();
    assert!(matches!(err, FixtureError::UnknownFixture(n) if n == "no-such-fixture"));
}

#[test]
fn named_examples() {
    let root = default_fixture_root();
    let ll = load_fixture(&root, "linkedlist").unwrap();
    assert_eq!(ll.graphs[0].universe.len(), 9);
    let sfcs: Vec<f64> = ll.coverage[0].oracles.iter().filter_map(|o| o.sfc).collect();
    assert_eq!(sfcs.len(), 2);
    let st = load_fixture(&root, "stateless").unwrap();
    assert!(st.graphs[0].universe.is_empty());
    assert_eq!(st.coverage[0].aggregate.sfc, None);
    let dec = load_fixture(&root, "invariant-decomposition").unwrap();
    assert_eq!(dec.coverage.len(), 4);
}
