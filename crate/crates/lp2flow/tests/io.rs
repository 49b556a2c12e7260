mod common;

use lp2flow::arith::{int, ratio, Int, Rat};
use lp2flow::io::{parse, parse_instance, parse_solution, serialize, Document};
use lp2flow::model::{FhfInstance, FlowGraph, Instance, LpInstance, Solution, SparseIntMatrix};
use lp2flow::pipeline::compile;
use lp2flow::reduce::Stage;
use lp2flow::witness::construct_witness;
use proptest::prelude::*;
use serde_json::{json, Value};

fn round_trip(doc: &Document) {
    let text = serialize(doc);
    let back = parse(&text).unwrap_or_else(|e| panic!("{} does not parse: {e}", doc.schema()));
    assert_eq!(&back, doc, "{} changed through a round trip", doc.schema());
    assert_eq!(serialize(&back), text, "{} is not idempotent", doc.schema());
}

fn small_lp() -> (LpInstance, Vec<Rat>) {
    let lp = LpInstance {
        a: SparseIntMatrix::from_dense(&[vec![2, -1], vec![1, 3]]),
        b: vec![int(3), int(5)],
        c: vec![int(1), int(1)],
        k: int(1),
        r: int(3),
    };
    (lp, vec![ratio(1, 2), ratio(1, 1)])
}

#[test]
fn every_level_round_trips() {
    let (lp, x) = small_lp();
    let c = compile(&lp, &ratio(1, 100)).unwrap();
    let mut sol = Solution::Vector(x);
    for stage in Stage::ALL {
        let k = stage.index();
        round_trip(&Document::Instance(c.sources[k].clone()));
        round_trip(&Document::Solution(sol.clone()));
        sol = construct_witness(stage, &c.sources[k], &sol, &c.traces[k]).unwrap();
    }
    round_trip(&Document::Instance(Instance::TwoCf(c.instance.clone())));
    round_trip(&Document::Solution(sol));
    round_trip(&Document::Traces(c.traces.clone()));
    round_trip(&Document::Budget(c.budget.clone()));
    round_trip(&Document::Report(c.report.clone()));
}

#[test]
fn construction_order_does_not_matter() {
    let t = |v: &[(u32, u32, i64)]| v.iter().map(|&(i, j, x)| (i, j, Int::from(x))).collect::<Vec<_>>();
    let a1 = SparseIntMatrix::from_triples(2, 2, t(&[(0, 0, 1), (1, 1, -2), (0, 1, 3)])).unwrap();
    let a2 = SparseIntMatrix::from_triples(2, 2, t(&[(1, 1, -2), (0, 1, 3), (0, 0, 1)])).unwrap();
    let lp = |a: SparseIntMatrix| LpInstance {
        a,
        b: vec![int(1), int(1)],
        c: vec![int(0), int(1)],
        k: int(0),
        r: int(2),
    };
    let s1 = serialize(&Document::Instance(Instance::Lp(lp(a1))));
    let s2 = serialize(&Document::Instance(Instance::Lp(lp(a2))));
    assert_eq!(s1, s2);

    let graph = || {
        let mut g = FlowGraph::new(3);
        for (u, v) in [(0, 1), (1, 2), (0, 2), (0, 1), (1, 2)] {
            g.add_edge(u, v, &int(1));
        }
        g
    };
    let h1 = FhfInstance::new(graph(), vec![2], vec![vec![0, 3], vec![1, 4]], 0, 2);
    let h2 = FhfInstance::new(graph(), vec![2], vec![vec![4, 1], vec![3, 0]], 0, 2);
    assert_eq!(
        serialize(&Document::Instance(Instance::Fhf(h1))),
        serialize(&Document::Instance(Instance::Fhf(h2)))
    );
}

fn lp_value() -> Value {
    let (lp, _) = small_lp();
    serde_json::from_str(&serialize(&Document::Instance(Instance::Lp(lp)))).unwrap()
}

#[test]
fn duplicate_triple_is_named() {
    let mut v = lp_value();
    let first = v["a"][0].clone();
    v["a"].as_array_mut().unwrap().insert(1, first);
    let err = parse_instance(&v.to_string()).unwrap_err().to_string();
    assert!(err.contains("duplicate matrix entry (0, 0)"), "{err}");
}

#[test]
fn unreduced_rational_is_rejected() {
    let text = json!({"schema": "vector-solution", "version": 1, "x": ["4/2"]}).to_string();
    let err = parse_solution(&text).unwrap_err().to_string();
    assert!(err.contains("not reduced"), "{err}");
}

#[test]
fn homologous_set_with_fixed_edge_is_rejected() {
    let mut g = FlowGraph::new(2);
    for _ in 0..3 {
        g.add_edge(0, 1, &int(1));
    }
    let h = FhfInstance::new(g, vec![0], vec![vec![1, 2]], 0, 1);
    let mut v: Value = serde_json::from_str(&serialize(&Document::Instance(Instance::Fhf(h)))).unwrap();
    v["homologous"] = json!([[0, 1]]);
    let err = parse_instance(&v.to_string()).unwrap_err().to_string();
    assert!(err.contains("fixed and homologous edges must be disjoint"), "{err}");
}

#[test]
fn unknown_and_missing_keys_are_rejected() {
    let mut v = lp_value();
    v["extra"] = json!(1);
    assert!(parse_instance(&v.to_string()).is_err());
    let mut v = lp_value();
    v.as_object_mut().unwrap().remove("k");
    assert!(parse_instance(&v.to_string()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_lps_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let lp = common::random_lp(&mut rng, common::SMALL, 5);
        let doc = Document::Instance(Instance::Lp(lp));
        let text = serialize(&doc);
        prop_assert_eq!(parse(&text).unwrap(), doc);
    }

    #[test]
    fn rational_vectors_round_trip(v in prop::collection::vec((0i64..1000, 1i64..50), 0..12)) {
        let doc = Document::Solution(Solution::Vector(v.iter().map(|&(n, d)| ratio(n, d)).collect()));
        let text = serialize(&doc);
        prop_assert_eq!(parse(&text).unwrap(), doc);
    }
}
