//! Property checks shared by the proptest target and the acceptance run.
//! Each check compares the library against a small brute-force oracle.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use sfcov_core::graph::{build_type_graph, coverable_labels, iterable_fields, GraphOptions, Label, LabelSet};
use sfcov_core::harness::{apfd, run_harness, greedy_sfc_order, HarnessInput, KillMatrix, Outcome, TestRecord};
use sfcov_core::source::{parse_corpus, resolve_types, SourceFile};

/// Field kinds of a generated class: 0 reference, 1 `int`, 2 `List<target>`.
#[derive(Debug, Clone)]
pub struct GraphShape {
    pub fields: Vec<Vec<(u8, usize)>>,
}

pub fn graph_shape() -> impl Strategy<Value = GraphShape> {
    (1usize..=8).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec((0u8..3, 0..n), 0..=3), n).prop_map(|fields| GraphShape { fields })
    })
}

impl GraphShape {
    pub fn source(&self) -> String {
        let mut s = String::from("import java.util.List;\n");
        for (i, fs) in self.fields.iter().enumerate() {
            s.push_str(&format!("class C{i} {{\n"));
            for (k, (kind, to)) in fs.iter().enumerate() {
                let ty = match kind {
                    0 => format!("C{to}"),
                    1 => "int".to_string(),
                    _ => format!("List<C{to}>"),
                };
                s.push_str(&format!("    {ty} f{k};\n"));
            }
            s.push_str("}\n");
        }
        s
    }
}

pub fn check_graph(shape: &GraphShape) -> Result<(), TestCaseError> {
    let corpus = parse_corpus(vec![SourceFile::new("Gen.java", shape.source())]).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let corpus = resolve_types(corpus);
    let g = build_type_graph(&corpus, "C0", GraphOptions::default()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let again = build_type_graph(&corpus, "C0", GraphOptions::default()).unwrap();
    prop_assert_eq!(&g, &again);

    let n = shape.fields.len();
    // closure[i][j]: a path of one or more class edges from Ci to Cj
    let mut closure = vec![vec![false; n]; n];
    for (i, fs) in shape.fields.iter().enumerate() {
        for &(kind, to) in fs {
            if kind != 1 {
                closure[i][to] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if closure[i][k] && closure[k][j] {
                    closure[i][j] = true;
                }
            }
        }
    }
    let reachable: Vec<usize> = (0..n).filter(|&j| j == 0 || closure[0][j]).collect();

    let mut edges = 0;
    let mut iterable = LabelSet::new();
    let mut prims = BTreeSet::new();
    for &i in &reachable {
        for (k, &(kind, _)) in shape.fields[i].iter().enumerate() {
            edges += 1;
            let on_cycle = closure[i][i];
            if kind == 2 || on_cycle {
                iterable.insert(Label::plain(&format!("C{i}"), &format!("f{k}")));
            }
            if kind == 1 {
                prims.insert("int");
            }
        }
    }
    prop_assert_eq!(g.nodes.len(), reachable.len() + prims.len());
    prop_assert_eq!(g.edges.len(), edges);
    prop_assert_eq!(iterable_fields(&g), iterable.clone());
    let labels = coverable_labels(&g);
    prop_assert_eq!(labels.len(), edges + iterable.len());
    for l in &labels {
        if l.plus {
            prop_assert!(labels.contains(&l.to_plain()));
        }
    }
    Ok(())
}

/// A small suite: per test its labels (indices into a pool) and kills.
#[derive(Debug, Clone)]
pub struct SuiteShape {
    pub labels: Vec<BTreeSet<usize>>,
    pub kills: Vec<Vec<u8>>,
    pub pool: usize,
}

pub fn suite_shape(max_tests: usize, max_labels: usize, max_mutants: usize) -> impl Strategy<Value = SuiteShape> {
    (1..=max_tests, 1..=max_labels, 1..=max_mutants).prop_flat_map(|(n, pool, m)| {
        (
            prop::collection::vec(prop::collection::btree_set(0..pool, 0..=pool), n),
            prop::collection::vec(prop::collection::vec(0u8..4, m), n),
        )
            .prop_map(move |(labels, kills)| SuiteShape { labels, kills, pool })
    })
}

fn label(i: usize) -> Label {
    Label::plain("S", &format!("l{i}"))
}

impl SuiteShape {
    pub fn ids(&self) -> Vec<String> {
        (0..self.labels.len()).map(|i| format!("T{i}")).collect()
    }

    pub fn records(&self) -> Vec<TestRecord> {
        self.labels.iter().enumerate().map(|(i, ls)| TestRecord::new(format!("T{i}"), ls.iter().map(|&l| label(l)).collect())).collect()
    }

    pub fn universe(&self) -> LabelSet {
        (0..self.pool).map(label).collect()
    }

    /// Cells: 0/1 survived, 2 killed, 3 killed too, unless `trivial` flags it.
    pub fn matrix(&self, trivial: bool) -> KillMatrix {
        let m = self.kills.first().map_or(0, Vec::len);
        let cells = self
            .kills
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&c| match c {
                        0 | 1 => Outcome::Survived,
                        3 if trivial => Outcome::Trivial,
                        _ => Outcome::Killed,
                    })
                    .collect()
            })
            .collect();
        KillMatrix::new(self.ids(), (0..m).map(|j| format!("m{j}")).collect(), cells).unwrap()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// The lexicographically smallest permutation where every step takes a
/// test of maximal additional gain (any order once all gains are zero).
pub fn exhaustive_greedy(labels: &[BTreeSet<usize>]) -> Vec<String> {
    let ids: Vec<String> = (0..labels.len()).map(|i| format!("T{i}")).collect();
    let mut best: Option<Vec<String>> = None;
    for p in permutations(labels.len()) {
        let mut covered = BTreeSet::new();
        let mut ok = true;
        for (k, &t) in p.iter().enumerate() {
            let gain = |i: usize| labels[i].difference(&covered).count();
            let max = p[k..].iter().map(|&i| gain(i)).max().unwrap();
            let g = gain(t);
            if max > 0 && g != max {
                ok = false;
                break;
            }
            if max == 0 {
                // tail must be sorted by id
                ok = p[k..].windows(2).all(|w| ids[w[0]] < ids[w[1]]);
                break;
            }
            covered.extend(labels[t].iter().copied());
        }
        if ok {
            let cand: Vec<String> = p.iter().map(|&i| ids[i].clone()).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

pub fn check_greedy(s: &SuiteShape) -> Result<(), TestCaseError> {
    let got = greedy_sfc_order(&s.records(), &s.universe());
    prop_assert_eq!(got, exhaustive_greedy(&s.labels));
    Ok(())
}

/// Trapezoid area under the detected-faults step curve, faults counted
/// only when the order detects them.
pub fn apfd_area(order: &[String], m: &KillMatrix) -> Option<f64> {
    let n = order.len();
    let detected: BTreeSet<usize> = order.iter().flat_map(|t| m.killed_by(t)).collect();
    let faults = detected.len();
    if n == 0 || faults == 0 {
        return None;
    }
    let mut seen = BTreeSet::new();
    let mut prev = 0.0;
    let mut area = 0.0;
    for t in order {
        seen.extend(m.killed_by(t));
        let d = seen.len() as f64 / faults as f64;
        area += (prev + d) / 2.0 / n as f64;
        prev = d;
    }
    Some(area)
}

pub fn check_apfd(s: &SuiteShape, perm_seed: u64) -> Result<(), TestCaseError> {
    let m = s.matrix(true);
    let mut order = s.ids();
    let n = order.len();
    order.rotate_left((perm_seed as usize) % n);
    if perm_seed % 2 == 1 {
        order.reverse();
    }
    match (apfd(&order, &m).ok(), apfd_area(&order, &m)) {
        (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b),
        (a, b) => prop_assert_eq!(a, b),
    }
    Ok(())
}

/// Harness-level invariants: non-decreasing prefixes, equal final prefix
/// for every strategy, trivial mutants excluded, deterministic output.
pub fn check_harness(s: &SuiteShape, seed: u64) -> Result<(), TestCaseError> {
    let input = HarnessInput {
        tests: s.records(),
        universe: s.universe(),
        kill: Some(s.matrix(true)),
        coverage: None,
        failing: None,
        seed,
        repetitions: 4,
        project: "P".into(),
        bug_id: "1".into(),
    };
    let r = run_harness(&input).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let again = run_harness(&input).unwrap();
    prop_assert_eq!(&r, &again);
    prop_assert_eq!(r.curves_csv(), again.curves_csv());

    let m = s.matrix(true);
    let trivial: usize = (0..m.mutants().len()).filter(|&j| m.is_trivial(j)).count();
    prop_assert_eq!(m.denominator(), m.mutants().len() - trivial);
    for j in (0..m.mutants().len()).filter(|&j| m.is_trivial(j)) {
        for t in s.ids() {
            prop_assert!(!m.killed_by(&t).contains(&j));
        }
    }

    let last = |o: &sfcov_core::harness::OrderingResult| o.prefixes.last().cloned().unwrap();
    let first = last(&r.orderings[0]);
    for o in &r.orderings {
        for w in o.prefixes.windows(2) {
            prop_assert!(w[1].covered_labels >= w[0].covered_labels - 1e-12);
            prop_assert!(w[1].sfc >= w[0].sfc - 1e-12);
            if let (Some(a), Some(b)) = (w[0].mutation_score, w[1].mutation_score) {
                prop_assert!(b >= a - 1e-12);
            }
        }
        let p = last(o);
        prop_assert!((p.sfc - first.sfc).abs() < 1e-12);
        prop_assert_eq!(p.mutation_score.map(|x| (x * 1e9).round()), first.mutation_score.map(|x| (x * 1e9).round()));
        prop_assert!((0.0..=1.0).contains(&p.sfc));
    }
    Ok(())
}

/// Coverage-level invariants over a family of oracles on one corpus:
/// plus implies plain, union is monotone, 0 <= SFC <= 1.
pub fn check_union(per_oracle: &[LabelSet], universe: &LabelSet, small: &BTreeSet<usize>, extra: &BTreeSet<usize>) -> Result<(), TestCaseError> {
    let union = |ix: &BTreeSet<usize>| -> LabelSet { ix.iter().flat_map(|&i| per_oracle[i].iter().cloned()).collect() };
    let a = union(small);
    let big: BTreeSet<usize> = small.union(extra).copied().collect();
    let b = union(&big);
    prop_assert!(a.is_subset(&b));
    for set in [&a, &b] {
        prop_assert!(set.is_subset(universe));
        for l in set.iter().filter(|l| l.plus) {
            prop_assert!(set.contains(&l.to_plain()), "{} without its plain label", l);
        }
        if !universe.is_empty() {
            let sfc = set.len() as f64 / universe.len() as f64;
            prop_assert!((0.0..=1.0).contains(&sfc));
        }
    }
    Ok(())
}
