mod common;

use lp2flow::arith::{int, Int};
use lp2flow::model::{LpInstance, SparseIntMatrix};
use lp2flow::oracle::{lp_feasible_by_vertices, lp_feasible_exact, optimize_by_bisection, Guard};
use rand::Rng;

const SQUARE: common::Shape = common::Shape {
    max_n: 3,
    max_m: 3,
    max_entry: 3,
    max_nnz: 9,
};

fn square_lp(rng: &mut impl Rng) -> LpInstance {
    let a = common::random_matrix(rng, 3, 3, SQUARE.max_entry, SQUARE.max_nnz);
    let k = SQUARE.max_entry;
    LpInstance {
        a,
        b: (0..3).map(|_| Int::from(rng.gen_range(-k..=k))).collect(),
        c: (0..3).map(|_| Int::from(rng.gen_range(-k..=k))).collect(),
        k: Int::from(rng.gen_range(-k..=k)),
        r: int(10),
    }
}

#[test]
fn elimination_agrees_with_vertex_enumeration() {
    let mut rng = common::rng(11);
    let guard = Guard::default();
    let mut feasible = 0;
    for case in 0..200 {
        let lp = square_lp(&mut rng);
        let fm = lp_feasible_exact(&lp).unwrap();
        let vx = lp_feasible_by_vertices(&lp, &guard).unwrap();
        assert_eq!(fm.is_feasible(), vx.is_feasible(), "case {case}: {lp:?}");
        feasible += fm.is_feasible() as usize;
    }
    assert!(feasible > 20 && feasible < 180, "{feasible} feasible of 200");
}

#[test]
fn bisection_agrees_with_a_scan_over_vertices() {
    let mut rng = common::rng(12);
    let guard = Guard::default();
    for case in 0..60 {
        let lp = common::random_lp(&mut rng, common::TINY, 10);
        let (lo, hi) = (int(-12), int(12));
        let got = optimize_by_bisection(&lp.a, &lp.b, &lp.c, &lp.r, &lo, &hi).unwrap();
        let mut best = None;
        let mut k = lo.clone();
        while k <= hi {
            let probe = LpInstance {
                k: k.clone(),
                ..lp.clone()
            };
            if lp_feasible_by_vertices(&probe, &guard).unwrap().is_feasible() {
                best = Some(k.clone());
            }
            k += 1;
        }
        assert_eq!(got, best, "case {case}");
    }
}

#[test]
fn bounded_maximum() {
    let a = SparseIntMatrix::from_dense(&[vec![1]]);
    let got = optimize_by_bisection(&a, &[int(3)], &[int(1)], &int(5), &int(0), &int(10)).unwrap();
    assert_eq!(got, Some(int(3)));
}
