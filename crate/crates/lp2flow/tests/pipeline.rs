mod common;

use lp2flow::arith::{int, rat, ratio, Int, Rat};
use lp2flow::mapback::map_back_chain;
use lp2flow::model::{Class, Instance, LpInstance, Solution, SparseIntMatrix, TwoCommodityFlow};
use lp2flow::oracle::{twocf_solve_exact_with, Guard};
use lp2flow::pipeline::{compile, compile_with, recover_lp};
use lp2flow::verify::check;
use num_traits::{One, Zero};

/// nnz = 4, X = 7.
fn seven() -> LpInstance {
    LpInstance {
        a: SparseIntMatrix::from_dense(&[vec![7, 1], vec![2, -3]]),
        b: vec![int(5), int(4)],
        c: vec![int(1), int(1)],
        k: int(2),
        r: int(3),
    }
}

fn stat(c: &lp2flow::pipeline::Compiled, level: usize, key: &str) -> Int {
    c.report.levels[level].2[key].clone()
}

#[test]
fn hand_evaluated_sizes() {
    let c = compile(&seven(), &Rat::one()).unwrap();
    assert!(c.report.all_audits_hold(), "{:?}", c.report.failed_audits());
    // LEN: n + m + 1 columns, m + 1 rows, R~ = 5 m R X.
    assert_eq!(stat(&c, 1, "n"), int(5));
    assert_eq!(stat(&c, 1, "m"), int(3));
    assert_eq!(stat(&c, 1, "nnz"), int(9));
    assert_eq!(stat(&c, 1, "r"), int(210));
    assert_eq!(stat(&c, 1, "x"), int(7));
    // 2-LEN: bit widths 1, 2, 2 give 5 carries, 8 bit rows and 10 bound rows.
    assert_eq!(stat(&c, 2, "n"), int(25));
    assert_eq!(stat(&c, 2, "m"), int(18));
    assert_eq!(stat(&c, 2, "nnz"), int(52));
    assert_eq!(stat(&c, 2, "r"), int(105_840));
    assert_eq!(stat(&c, 2, "x"), int(2940));
    // 1-LEN: R^ = 2 R-.
    assert_eq!(stat(&c, 3, "r"), int(211_680));
    // 2CF: R = R1 + R2 = 4 M^f.
    let mf = stat(&c, 7, "total_cap");
    assert_eq!(stat(&c, 9, "r"), Int::from(4) * &mf);
    assert_eq!(stat(&c, 9, "max_cap"), Int::from(2) * &mf);
    assert_eq!(stat(&c, 9, "edges"), Int::from(7) * stat(&c, 7, "edges") + 12);
}

#[test]
fn unit_budget_is_the_nine_divisions() {
    let c = compile(&seven(), &Rat::one()).unwrap();
    let q = |v: Int| Rat::from_integer(v);
    let e = &c.budget.eps;
    assert_eq!(e[1], rat(1));
    assert_eq!(e[2], ratio(1, 14));
    assert_eq!(e[3], ratio(1, 14 * 26));
    let d = q(Int::from(5) * stat(&c, 3, "n") * stat(&c, 3, "x"));
    assert_eq!(e[4], &e[3] / d);
    assert_eq!(e[5], &e[4] / q(stat(&c, 4, "edges")));
    assert_eq!(e[6], &e[5] / q(Int::from(11) * stat(&c, 5, "edges")));
    assert_eq!(e[7], &e[6] / q(Int::from(6) * stat(&c, 6, "edges")));
    assert_eq!(e[8], &e[7] / q(Int::from(12) * stat(&c, 7, "edges")));
    assert_eq!(e[9], &e[8] / rat(4));
}

#[test]
fn oracle_flow_maps_back_to_a_solution() {
    let lp = LpInstance {
        a: SparseIntMatrix::from_dense(&[vec![1]]),
        b: vec![int(1)],
        c: vec![int(1)],
        k: int(1),
        r: int(1),
    };
    let c = compile_with(&lp, &Rat::zero(), false).unwrap();
    let guard = Guard::default().unlimited_instances();
    let (verdict, _) = twocf_solve_exact_with(&c.instance, &guard).unwrap();
    let flow = verdict.witness().expect("feasible");
    let (x, rep) = recover_lp(&lp, &c.traces, &c.budget, flow).unwrap();
    assert_eq!(x, vec![rat(1)]);
    assert!(rep.is_exact());
}

#[test]
fn infeasible_lp_compiles_to_an_infeasible_flow() {
    // x <= 1 and x >= 2.
    let lp = LpInstance {
        a: SparseIntMatrix::from_dense(&[vec![1]]),
        b: vec![int(1)],
        c: vec![int(1)],
        k: int(2),
        r: int(2),
    };
    let c = compile_with(&lp, &Rat::zero(), false).unwrap();
    let guard = Guard::default().unlimited_instances();
    let (verdict, _) = twocf_solve_exact_with(&c.instance, &guard).unwrap();
    assert!(!verdict.is_feasible());
}

#[test]
fn zero_flow_gives_the_zero_point() {
    let lp = LpInstance {
        a: SparseIntMatrix::from_dense(&[vec![1, -2], vec![0, 3]]),
        b: vec![int(2), int(0)],
        c: vec![int(1), int(1)],
        k: int(-1),
        r: int(2),
    };
    let c = compile_with(&lp, &Rat::zero(), false).unwrap();
    let zero = TwoCommodityFlow::zero(c.instance.graph.num_edges(), 2);
    let (x, _) = map_back_chain(&zero, &c.traces).unwrap();
    assert!(x.iter().all(|v| v.is_zero()));
    let rep = check(Class::Lp, &Instance::Lp(lp), &Solution::Vector(x), &Rat::zero()).unwrap();
    assert!(rep.is_exact());
}

#[test]
fn eps_outside_unit_interval_is_rejected() {
    assert!(compile(&seven(), &rat(2)).is_err());
    assert!(compile(&seven(), &rat(-1)).is_err());
}

#[test]
fn compile_is_deterministic() {
    let mut rng = common::rng(99);
    let lp = common::random_lp(&mut rng, common::SMALL, 4);
    let a = compile_with(&lp, &ratio(1, 3), false).unwrap();
    let b = compile_with(&lp, &ratio(1, 3), false).unwrap();
    assert_eq!(a.instance, b.instance);
    assert_eq!(a.traces, b.traces);
    assert_eq!(a.report.audits, b.report.audits);
}
