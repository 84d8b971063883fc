//! Acceptance run: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/props.rs"]
mod props;
#[path = "../../core/tests/common/walker.rs"]
mod walker;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;
use sfcov_core::coverage::{
    covered_labels, extract_oracles, reachable_code, state_field_coverage, OracleKind, OracleQuery, ReachOptions, Selector,
};
use sfcov_core::fixtures::{default_fixture_root, fixture_names, load_fixture, ExpectedCoverage, FixtureCase};
use sfcov_core::graph::{build_type_graph, coverable_labels, iterable_fields, GraphOptions, Label, LabelSet};
use sfcov_core::harness::{
    apfd, apfd_progression, greedy_sfc_order, random_order, run_harness, HarnessInput, KillMatrix, Outcome, TestRecord,
};
use sfcov_core::source::SourceCorpus;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn fixture(name: &str) -> FixtureCase {
    load_fixture(&default_fixture_root(), name).unwrap()
}

fn query(case: &ExpectedCoverage) -> OracleQuery {
    let mut q = OracleQuery::new(case.mode);
    if let Some(s) = &case.selector {
        q = q.with_selector(Selector::parse(s).unwrap());
    }
    q
}

fn sfcov(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sfcov")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into())
}

fn labels(v: &[&str]) -> LabelSet {
    v.iter().map(|s| s.parse().unwrap()).collect()
}

fn linked_list_golden() -> Verdict {
    let start = Instant::now();
    let fx = fixture("linkedlist");
    let corpus = fx.corpus().unwrap();
    let g = build_type_graph(&corpus, "LinkedList", GraphOptions::default()).map_err(|e| e.to_string())?;
    let universe = coverable_labels(&g);
    let q = OracleQuery::new(sfcov_core::coverage::OracleMode::Invariants).with_selector(Selector::parse("isEmpty,checkSize").unwrap());
    let oracles = extract_oracles(&corpus, &["LinkedList".into()], &q).map_err(|e| e.to_string())?;
    let r = state_field_coverage(&corpus, &oracles, &universe, ReachOptions::default());
    let elapsed = start.elapsed();
    ensure(g.nodes.len() == 4 && g.edges.len() == 6, || format!("{} nodes, {} edges", g.nodes.len(), g.edges.len()))?;
    ensure(universe.len() == 9, || format!("{} labels", universe.len()))?;
    let by_id: BTreeMap<&str, _> = r.per_oracle.iter().map(|o| (o.id.as_str(), o)).collect();
    let a = by_id.get("LinkedList#isEmpty/0").and_then(|o| o.sfc).ok_or("isEmpty missing")?;
    let b = by_id.get("LinkedList#checkSize/0").ok_or("checkSize missing")?;
    let bs = b.sfc.ok_or("checkSize NA")?;
    ensure(close(a, 0.111, 0.001) && close(bs, 0.444, 0.001), || format!("sfc {a:.4} and {bs:.4}"))?;
    let want = labels(&["LinkedList.size", "LinkedList.first", "LinkedList.Node.next", "LinkedList.Node.next+"]);
    ensure(b.covered == want, || format!("checkSize covers {:?}", b.covered))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("4 nodes, 6 edges, 9 labels, sfc {a:.3} / {bs:.3}, {} ms", elapsed.as_millis()))
}

fn plus_count(name: &str) -> usize {
    let fx = fixture(name);
    let corpus = fx.corpus().unwrap();
    let g = build_type_graph(&corpus, &fx.graphs[0].graph.root, GraphOptions::default()).unwrap();
    coverable_labels(&g).iter().filter(|l| l.plus).count()
}

fn iterable_classification() -> Verdict {
    let fx = fixture("linkedlist");
    let corpus = fx.corpus().unwrap();
    let g = build_type_graph(&corpus, "LinkedList", GraphOptions::default()).unwrap();
    let names: BTreeSet<String> = iterable_fields(&g).into_iter().map(|l| l.field).collect();
    let want: BTreeSet<String> = ["next", "prev", "item"].iter().map(|s| s.to_string()).collect();
    ensure(names == want, || format!("iterable {names:?}"))?;
    let (c, a, z) = (plus_count("container"), plus_count("array"), plus_count("acyclic"));
    ensure(c == 1 && a == 1 && z == 0, || format!("plus labels: container {c}, array {a}, acyclic {z}"))?;
    Ok("LinkedList {item, next, prev}; container 1, array 1, acyclic 0 plus labels".into())
}

fn invariant_growth() -> Verdict {
    let fx = fixture("invariant-decomposition");
    let corpus = fx.corpus().unwrap();
    let mut summary = Vec::new();
    for case in &fx.coverage {
        let family = case.family.clone().unwrap_or_else(|| case.roots.join(","));
        let oracles = extract_oracles(&corpus, &case.roots, &query(case)).map_err(|e| e.to_string())?;
        let universe: LabelSet = case.universe.iter().cloned().collect();
        let r = state_field_coverage(&corpus, &oracles, &universe, case.options);
        let k_of: BTreeMap<&str, usize> =
            case.oracles.iter().filter_map(|o| o.properties.map(|k| (o.id.as_str(), k))).collect();
        let mut by_k: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for o in &r.per_oracle {
            let k = *k_of.get(o.id.as_str()).ok_or_else(|| format!("{family}: no property count for {}", o.id))?;
            by_k.entry(k).or_default().push(o.sfc.unwrap_or(0.0));
        }
        let means: Vec<f64> = by_k.values().map(|v| v.iter().sum::<f64>() / v.len() as f64).collect();
        ensure(means.len() >= 2, || format!("{family}: only {} property counts", means.len()))?;
        ensure(means.windows(2).all(|w| w[1] >= w[0] - 1e-12), || format!("{family}: means {means:?}"))?;
        summary.push(format!("{family} {}", means.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>().join("<=")));
    }
    Ok(summary.join("; "))
}

fn greedy_exhaustive() -> Verdict {
    let start = Instant::now();
    let mut runner = TestRunner::new(Config { cases: 3000, failure_persistence: None, ..Config::default() });
    runner
        .run(&props::suite_shape(6, 10, 1), |s| {
            props::check_greedy(&s)?;
            let order = greedy_sfc_order(&s.records(), &s.universe());
            let best = s.labels.iter().map(BTreeSet::len).max().unwrap();
            let first: usize = order[0][1..].parse().unwrap();
            proptest::prop_assert_eq!(s.labels[first].len(), best);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let ids: Vec<String> = (0..12).map(|i| format!("t{i:02}")).collect();
    ensure(random_order(&ids, 1, 10) == random_order(&ids, 1, 10), || "random replay differs".into())?;
    ensure(random_order(&ids, 1, 10) != random_order(&ids, 2, 10), || "seed has no effect".into())?;
    ensure(elapsed < Duration::from_secs(10), || format!("sweep took {elapsed:?}"))?;
    Ok(format!("3000 suites match exhaustive search in {} ms; random replay identical", elapsed.as_millis()))
}

/// 20 tests, 25 real mutants and one trivial one. T00-T04 carry many labels
/// and kill four mutants each; T05-T19 carry one shared label and split the
/// last five mutants three ways.
fn synthetic_suite() -> (Vec<TestRecord>, LabelSet, KillMatrix) {
    let mut tests = Vec::new();
    let mut universe = LabelSet::new();
    for i in 0..20 {
        let ls: LabelSet = if i < 5 {
            (0..6).map(|j| Label::plain("Rich", &format!("f{i}_{j}"))).collect()
        } else {
            [Label::plain("Poor", "x")].into()
        };
        universe.extend(ls.iter().cloned());
        tests.push(TestRecord::new(format!("T{i:02}"), ls));
    }
    let mutants: Vec<String> = (0..26).map(|j| format!("m{j:02}")).collect();
    let cells = (0..20)
        .map(|i| {
            (0..26)
                .map(|j| {
                    let kill = if j < 20 { j / 4 == i } else if j < 25 { i >= 5 && (i - 5) / 3 == j - 20 } else { false };
                    if j == 25 && i == 0 {
                        Outcome::Trivial
                    } else if kill {
                        Outcome::Killed
                    } else {
                        Outcome::Survived
                    }
                })
                .collect()
        })
        .collect();
    let ids = tests.iter().map(|t| t.id.clone()).collect();
    (tests, universe, KillMatrix::new(ids, mutants, cells).unwrap())
}

fn harness_semantics() -> Verdict {
    let (tests, universe, kill) = synthetic_suite();
    ensure(kill.denominator() == 25, || format!("denominator {}", kill.denominator()))?;
    let input = HarnessInput {
        tests,
        universe,
        kill: Some(kill),
        coverage: None,
        failing: None,
        seed: 1,
        repetitions: 10,
        project: String::new(),
        bug_id: String::new(),
    };
    let r = run_harness(&input).map_err(|e| e.to_string())?;
    let greedy = r.ordering("sfc-greedy").ok_or("no greedy ordering")?;
    let random = r.ordering("random").ok_or("no random mean")?;
    let cut = 6; // 30% of 20
    let mut gaps = Vec::new();
    for k in 0..cut {
        let g = greedy.prefixes[k].mutation_score.ok_or("NA score")?;
        let m = random.prefixes[k].mutation_score.ok_or("NA score")?;
        // hand count: each of the first five greedy picks kills four mutants
        let want = (4 * (k + 1).min(5) + usize::from(k >= 5)) as f64 / 25.0;
        ensure(close(g, want, 1e-12), || format!("greedy prefix {} scores {g}, expected {want}", k + 1))?;
        ensure(g > m, || format!("prefix {}: greedy {g:.3} vs random {m:.3}", k + 1))?;
        gaps.push(format!("{:.2}/{:.2}", g, m));
    }
    let finals: BTreeSet<String> =
        r.orderings.iter().map(|o| format!("{:.12}", o.prefixes.last().unwrap().mutation_score.unwrap())).collect();
    ensure(finals.len() == 1 && finals.contains("1.000000000000"), || format!("final scores {finals:?}"))?;
    Ok(format!("greedy/random at prefixes 1-6: {}; trivial mutant excluded; final 1.0 everywhere", gaps.join(" ")))
}

fn matrix(rows: &[(&str, &[char])]) -> KillMatrix {
    let m = rows[0].1.len();
    let cells = rows
        .iter()
        .map(|(_, r)| r.iter().map(|c| if *c == 'K' { Outcome::Killed } else { Outcome::Survived }).collect())
        .collect();
    KillMatrix::new(rows.iter().map(|r| r.0.to_string()).collect(), (1..=m).map(|j| format!("m{j}")).collect(), cells).unwrap()
}

fn apfd_cases() -> Verdict {
    let order: Vec<String> = vec!["T1".into(), "T2".into()];
    let first = apfd(&order, &matrix(&[("T1", &['K']), ("T2", &['S'])])).map_err(|e| e.to_string())?;
    let second = apfd(&order, &matrix(&[("T1", &['S']), ("T2", &['K'])])).map_err(|e| e.to_string())?;
    ensure(first == 0.75 && second == 0.25, || format!("closed forms {first} and {second}"))?;

    let mut runner = TestRunner::new(Config { cases: 2000, failure_persistence: None, ..Config::default() });
    runner
        .run(&(props::suite_shape(6, 1, 6), 0u64..64), |(s, perm)| props::check_apfd(&s, perm))
        .map_err(|e| e.to_string())?;

    let dec = matrix(&[("T1", &['K', 'S']), ("T2", &['S', 'S']), ("T3", &['S', 'S']), ("T4", &['S', 'K'])]);
    let order: Vec<String> = (1..=4).map(|i| format!("T{i}")).collect();
    let prog = apfd_progression(&order, &dec, &[50, 100]);
    let (half, full) = (prog[0].apfd.ok_or("NA")?, prog[1].apfd.ok_or("NA")?);
    ensure(close(half, 0.75, 1e-12) && close(full, 0.5, 1e-12), || format!("progression {half} -> {full}"))?;
    Ok(format!("0.75 / 0.25 exact; 2000 random cases match the area formula; decreasing prefix {half} -> {full}"))
}

fn stateless() -> Verdict {
    let src = default_fixture_root().join("stateless/src");
    let (code, out, err) = sfcov(&["coverage", "--src", src.to_str().unwrap(), "--root", "MathUtil", "--oracles", "tests"]);
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(v["universe"].as_array().is_some_and(Vec::is_empty), || "universe not empty".into())?;
    ensure(v["aggregate"]["sfc"].is_null(), || format!("sfc {}", v["aggregate"]["sfc"]))?;
    let line = err.lines().find(|l| l.contains("MathUtil")).ok_or_else(|| format!("no diagnostic naming MathUtil: {err}"))?;
    Ok(format!("empty universe, sfc NA, exit 0, `{}`", line.trim()))
}

fn walker_equivalence() -> Result<usize, String> {
    let root = default_fixture_root();
    let mut n = 0;
    for name in fixture_names(&root) {
        let fx = load_fixture(&root, &name).unwrap();
        let corpus = fx.corpus().unwrap();
        for case in fx.coverage.iter().filter(|c| c.options == ReachOptions::default()) {
            let universe: LabelSet = case.universe.iter().cloned().collect();
            for o in extract_oracles(&corpus, &case.roots, &query(case)).map_err(|e| e.to_string())? {
                let got = covered_labels(&reachable_code(&corpus, &o, ReachOptions::default()), &universe);
                let hits = match o.kind {
                    OracleKind::TestAssertions => walker::Walker::new(&corpus).test(&o.method),
                    OracleKind::InvariantMethod => walker::Walker::new(&corpus).invariant(&o.method),
                };
                let want = walker::labels_of(&hits, &universe);
                ensure(got == want, || format!("{name} {}: {got:?} vs {want:?}", o.id))?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn fixture_families() -> Vec<(Vec<LabelSet>, LabelSet)> {
    let root = default_fixture_root();
    let mut out = Vec::new();
    for name in fixture_names(&root) {
        let fx = load_fixture(&root, &name).unwrap();
        let corpus: SourceCorpus = fx.corpus().unwrap();
        for case in &fx.coverage {
            let oracles = extract_oracles(&corpus, &case.roots, &query(case)).unwrap();
            let universe: LabelSet = case.universe.iter().cloned().collect();
            let r = state_field_coverage(&corpus, &oracles, &universe, case.options);
            out.push((r.per_oracle.into_iter().map(|o| o.covered).collect(), universe));
        }
    }
    out
}

fn cli_determinism() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let src = default_fixture_root().join("test-assertions/src");
    let kill = dir.path().join("kill.csv");
    std::fs::write(
        &kill,
        "test_id,m1,m2,m3\nCounterTest#startsAtZero,K,S,T\nCounterTest#incrementWithoutCheck,S,K,S\nCounterTest#nameLengthViaLocal,S,S,S\nCounterTest#nameViaGetter,K,K,S\n",
    )
    .unwrap();
    let mut runs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}"));
        let args = [
            "prioritize",
            "--src",
            src.to_str().unwrap(),
            "--root",
            "Counter",
            "--oracles",
            "tests",
            "--kill",
            kill.to_str().unwrap(),
            "--seed",
            "42",
            "--out-dir",
            out.to_str().unwrap(),
        ];
        let (code, _, err) = sfcov(&args);
        ensure(code == 0, || format!("prioritize exit {code}: {err}"))?;
        let files: Vec<String> = ["curves.csv", "apfd.csv", "first_fault.csv", "report.json"]
            .iter()
            .map(|f| std::fs::read_to_string(out.join(f)).unwrap().replace(out.to_str().unwrap(), "OUT"))
            .collect();
        runs.push(files);
    }
    ensure(runs[0] == runs[1], || "reports differ between identical runs".into())
}

fn property_suite() -> Verdict {
    let cfg = || Config { cases: 300, failure_persistence: None, ..Config::default() };
    let err = |e: proptest::test_runner::TestError<_>| -> String { format!("{e}") };
    TestRunner::new(cfg()).run(&props::graph_shape(), |s| props::check_graph(&s)).map_err(err)?;
    TestRunner::new(cfg())
        .run(&(props::suite_shape(6, 8, 6), proptest::num::u64::ANY), |(s, seed)| props::check_harness(&s, seed))
        .map_err(|e| e.to_string())?;
    let fams = fixture_families();
    TestRunner::new(cfg())
        .run(&(0..fams.len(), proptest::num::u64::ANY, proptest::num::u64::ANY), |(i, a, b)| {
            let (per, universe) = &fams[i];
            let n = per.len().min(64);
            let small = (0..n).filter(|j| a >> j & 1 == 1).collect();
            let extra = (0..n).filter(|j| b >> j & 1 == 1).collect();
            props::check_union(per, universe, &small, &extra)
        })
        .map_err(|e| e.to_string())?;
    for (per, universe) in &fams {
        for c in per {
            ensure(c.is_subset(universe), || "covered label outside the universe".into())?;
        }
    }
    let n = walker_equivalence()?;
    cli_determinism()?;
    Ok(format!("graph rule, plus-implies-plain, union monotonicity, sfc bounds, harness invariants, determinism; walker agrees on {n} oracles"))
}

/// Deterministic linear congruential stream for the synthetic corpus.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self, n: usize) -> usize {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 33) % n as u64) as usize
    }
}

fn write_synthetic_corpus(dir: &Path) -> Vec<String> {
    let mut rng = Lcg(7);
    let mut roots = Vec::new();
    for i in 0..50 {
        let name = format!("C{i:02}");
        let (a, b, c) = (rng.next(50), rng.next(50), rng.next(50));
        let src = format!(
            "package synth;\n\nimport java.util.List;\n\npublic class {name} {{\n    private int value;\n    private String tag;\n    private C{a:02} next;\n    private C{b:02} other;\n    private List<C{c:02}> items;\n\n    public int getValue() {{ return value; }}\n    public String getTag() {{ return tag; }}\n    public C{a:02} getNext() {{ return next; }}\n\n    public int total() {{\n        int s = value;\n        for (C{c:02} x : items) {{\n            s += x.getValue();\n        }}\n        return s;\n    }}\n\n    public int depth() {{\n        return next == null ? 0 : 1 + next.depth();\n    }}\n\n    public boolean linked() {{\n        return other != null && other.getTag() != null;\n    }}\n}}\n"
        );
        std::fs::write(dir.join(format!("{name}.java")), src).unwrap();
        roots.push(name);
    }
    let calls = ["getValue()", "getTag()", "total()", "depth()", "linked()", "getNext()"];
    for t in 0..20 {
        let mut body = format!("package synth;\n\nimport org.junit.Test;\nimport static org.junit.Assert.*;\n\npublic class Suite{t:02}Test {{\n");
        for m in 0..10 {
            let target = rng.next(50);
            let _ = writeln!(body, "    @Test\n    public void case{m}() {{\n        C{target:02} o = new C{target:02}();");
            for _ in 0..=rng.next(3) {
                let call = calls[rng.next(calls.len())];
                let _ = writeln!(body, "        assertNotNull(o.{call});");
            }
            body.push_str("    }\n\n");
        }
        body.push_str("}\n");
        std::fs::write(dir.join(format!("Suite{t:02}Test.java")), body).unwrap();
    }
    roots
}

fn efficiency() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let src = dir.path().join("src");
    std::fs::create_dir(&src).unwrap();
    let roots = write_synthetic_corpus(&src);
    let out = dir.path().join("out");
    let start = Instant::now();
    let (code, stdout, err) = sfcov(&[
        "coverage",
        "--src",
        src.to_str().unwrap(),
        "--root",
        &roots.join(","),
        "--oracles",
        "tests",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    ensure(!err.contains(".java:"), || format!("source diagnostics: {err}"))?;
    let v: Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
    let n = v["per_oracle"].as_array().map_or(0, Vec::len);
    ensure(n == 200, || format!("{n} oracles"))?;
    ensure(out.join("labels.json").is_file(), || "no label sidecar".into())?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("50 classes, 200 test oracles, sfc {:.3}, {} ms", v["aggregate"]["sfc"].as_f64().unwrap_or(0.0), elapsed.as_millis()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 linked list golden numbers", linked_list_golden),
        ("2 iterable classification", iterable_classification),
        ("3 invariant growth trend", invariant_growth),
        ("4 greedy prioritization correctness", greedy_exhaustive),
        ("5 harness semantics on synthetic data", harness_semantics),
        ("6 apfd", apfd_cases),
        ("7 stateless handling", stateless),
        ("8 property suite", property_suite),
        ("9 efficiency sanity", efficiency),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
