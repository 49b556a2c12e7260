mod common;

use std::time::{Duration, Instant};

use lp2flow::arith::{add, floor_log2, int, ratio, Int, Rat};
use lp2flow::mapback::map_back;
use lp2flow::model::{lp_x, Instance, LenInstance, LpInstance, Solution, SparseIntMatrix};
use lp2flow::oracle::{lp_feasible_exact, twocf_solve_exact_with, Guard};
use lp2flow::pipeline::{compile, compile_with, recover, recover_lp, Compiled};
use lp2flow::reduce::{len_to_2len, render_equations, Stage};
use lp2flow::verify::{check, flow_value};
use lp2flow::witness::{construct_witness, witness_chain};
use num_traits::{One, Signed, Zero};
use rand::Rng;

const GOLDEN: &str = include_str!("golden/worked_example.txt");

const C1_LIMIT: Duration = Duration::from_secs(1);
const C2_CASES: usize = 500;
const C2_LIMIT: Duration = Duration::from_secs(60);
const C3_CASES: usize = 200;
const C3_LIMIT: Duration = Duration::from_secs(60);
const C4_CASES: usize = 150;
const C4_R: i64 = 1000;
const C4_LIMIT: Duration = Duration::from_secs(600);
const C5_TRIALS: usize = 100;
const C5_EPS_LP: (i64, i64) = (1, 1000);
const C5_LIMIT: Duration = Duration::from_secs(300);
const C6_TRIALS: usize = 100;
const C6_LIMIT: Duration = Duration::from_secs(60);
const C8_SIZES: [usize; 3] = [100, 1_000, 10_000];
const C8_X: i64 = 1000;
const C8_FACTOR: f64 = 4.0;
const C8_RUNS: usize = 3;
/// Halvings of a perturbation before it is accepted as feasible at eps^B.
const MAX_HALVINGS: usize = 64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(limit: Duration, start: Instant, pass: bool, detail: String) -> Outcome {
    let t = start.elapsed();
    outcome(pass && t < limit, format!("{detail}; {:.2?} (limit {:?})", t, limit))
}

fn pow(base: &Int, e: u32) -> Int {
    (0..e).fold(Int::one(), |acc, _| acc * base)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let len = LenInstance {
        a: SparseIntMatrix::from_dense(&[vec![5, 3, -7]]),
        b: vec![int(-1)],
        r: int(1),
    };
    let (out, trace) = len_to_2len(&len).expect("reduction");
    let text = render_equations(&out, &trace);
    let same = text == GOLDEN;
    let detail = if same {
        format!("{} rows match the golden file byte for byte", GOLDEN.lines().count())
    } else {
        format!("rendered text differs from the golden file:\n{text}")
    };
    timed(C1_LIMIT, start, same, detail)
}

/// End-to-end bounds recomputed from the final instance.
fn overall_bounds_hold(lp: &LpInstance, c: &Compiled) -> bool {
    let nnz = Int::from(lp.a.nnz());
    let x = lp_x(lp).max(Int::one());
    let lg = Int::from(floor_log2(&x));
    let g = &c.instance.graph;
    let size = Int::from(1_000_000) * &nnz * (&lg + 3);
    let two = &lg + 2;
    let value = Int::from(100_000_000) * pow(&nnz, 3) * &lp.r * &x * &x * &two * &two;
    Int::from(g.num_vertices()) <= size
        && Int::from(g.num_edges()) <= size
        && g.max_capacity() <= value
        && c.instance.r <= value
}

fn budget_floor_holds(lp: &LpInstance, c: &Compiled) -> bool {
    let nnz = Int::from(lp.a.nnz());
    let x = lp_x(lp).max(Int::one());
    let three = Int::from(floor_log2(&x)) + 3;
    let denom = pow(&Int::from(10), 24) * pow(&nnz, 7) * &lp.r * pow(&x, 3) * pow(&three, 6);
    c.budget.twocf() >= &(c.budget.lp() / Rat::from_integer(denom))
}

/// Criteria 2 and 7 share the same 500 instances.
fn criteria_2_and_7() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut rng = common::rng(2);
    let (mut audit_fail, mut bound_fail, mut floor_fail, mut audits) = (0, 0, 0, 0);
    let mut first = None;
    for case in 0..C2_CASES {
        let r = rng.gen_range(1..=10);
        let lp = common::random_lp(&mut rng, common::SMALL, r);
        let eps = ratio(1, rng.gen_range(1..=1000));
        let c = compile_with(&lp, &eps, false).expect("compile");
        audits += c.report.audits.len();
        if !c.report.all_audits_hold() {
            audit_fail += 1;
            first.get_or_insert_with(|| format!("case {case}: {}", c.report.failed_audits()[0]));
        }
        if !overall_bounds_hold(&lp, &c) {
            bound_fail += 1;
        }
        if !budget_floor_holds(&lp, &c) {
            floor_fail += 1;
        }
    }
    let c2 = timed(
        C2_LIMIT,
        start,
        audit_fail == 0 && bound_fail == 0,
        format!(
            "{C2_CASES} LPs, {audits} size relations checked, {audit_fail} LPs with a failed relation, {bound_fail} with a failed overall bound{}",
            first.map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    );
    let c7 = outcome(floor_fail == 0, format!("{C2_CASES} LPs, {floor_fail} below the floor"));
    (c2, c7)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(3);
    let mut bad = Vec::new();
    for case in 0..C3_CASES {
        let (lp, x) = common::feasible_lp(&mut rng, common::SMALL);
        let c = compile(&lp, &Rat::zero()).expect("compile");
        let flow = witness_chain(&c.sources, &c.traces, &x).expect("witness");
        let rec = recover(&c, &flow).expect("recover");
        let exact = rec.reports.len() == 10 && rec.reports.iter().all(|(_, r)| r.is_exact());
        let g = &c.instance.graph;
        let t = &c.instance.terminals;
        let (o1, i1) = flow_value(g, &flow.f1, t.source(1), t.sink(1));
        let (o2, i2) = flow_value(g, flow.commodity(2), t.source(2), t.sink(2));
        let r = Rat::from_integer(c.instance.r.clone());
        let total = &o1 + &o2 == r && &i1 + &i2 == r;
        if !(exact && total && rec.x == x) {
            bad.push(case);
        }
    }
    timed(
        C3_LIMIT,
        start,
        bad.is_empty(),
        format!("{C3_CASES} LPs, {} failed round trips {:?}", bad.len(), bad),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(4);
    let guard = Guard::from_env().expect("guard").unlimited_instances();
    let (mut feasible, mut mismatch, mut recover_fail, mut errors) = (0, Vec::new(), Vec::new(), Vec::new());
    for case in 0..C4_CASES {
        let lp = common::random_lp(&mut rng, common::TINY, C4_R);
        let lp_verdict = lp_feasible_exact(&lp).expect("lp oracle");
        let c = compile_with(&lp, &Rat::zero(), false).expect("compile");
        let flow_verdict = match twocf_solve_exact_with(&c.instance, &guard) {
            Ok((v, _)) => v,
            Err(e) => {
                errors.push(format!("case {case}: {e}"));
                continue;
            }
        };
        if lp_verdict.is_feasible() != flow_verdict.is_feasible() {
            mismatch.push(case);
            continue;
        }
        if let Some(flow) = flow_verdict.witness() {
            feasible += 1;
            let (_, rep) = recover_lp(&lp, &c.traces, &c.budget, flow).expect("map back");
            if !rep.passes(&Rat::zero()) {
                recover_fail.push(case);
            }
        }
    }
    timed(
        C4_LIMIT,
        start,
        mismatch.is_empty() && recover_fail.is_empty() && errors.is_empty(),
        format!(
            "{C4_CASES} LPs ({feasible} feasible), verdict mismatches {:?}, LPA failures {:?}, oracle errors {:?}",
            mismatch, recover_fail, errors
        ),
    )
}

/// The 33 multiples k/16 of `scale`, k in -16..=16.
fn jitters(scale: &Rat) -> Vec<Rat> {
    (-16..=16).map(|k| scale * ratio(k, 16)).collect()
}

fn nudge(v: &Rat, d: &Rat) -> Rat {
    let w = add(v, d);
    if w.is_negative() {
        Rat::zero()
    } else {
        w
    }
}

fn perturb_values(rng: &mut impl Rng, v: &mut [Rat], steps: &[Rat], dense: bool) {
    let picks: Vec<usize> = if dense || v.is_empty() {
        (0..v.len()).collect()
    } else {
        (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..v.len())).collect()
    };
    for j in picks {
        let d = &steps[rng.gen_range(0..steps.len())];
        v[j] = nudge(&v[j], d);
    }
}

/// Perturbs every coordinate (dense) or a few (sparse) by at most `scale`,
/// keeping values nonnegative.
fn perturb(rng: &mut impl Rng, sol: &Solution, scale: &Rat, dense: bool) -> Solution {
    let steps = jitters(scale);
    let mut sol = sol.clone();
    match &mut sol {
        Solution::Vector(x) => perturb_values(rng, x, &steps, dense),
        Solution::Flow(f) => {
            for i in 1..=f.commodities() {
                perturb_values(rng, f.commodity_mut(i), &steps, dense);
            }
        }
    }
    sol
}

/// A perturbation of `exact` that verifies at `eps` against `inst`, and the
/// number of halvings it took.
fn feasible_perturbation(
    rng: &mut impl Rng,
    inst: &Instance,
    exact: &Solution,
    eps: &Rat,
    dense: bool,
) -> (Solution, usize) {
    let mut scale = eps.clone();
    let seed: u64 = rng.gen();
    for halvings in 0..MAX_HALVINGS {
        let mut local = common::rng(seed);
        let sol = perturb(&mut local, exact, &scale, dense);
        if check(inst.class(), inst, &sol, eps).expect("verify").passes(eps) {
            return (sol, halvings);
        }
        scale /= Rat::from_integer(int(2));
    }
    (exact.clone(), MAX_HALVINGS)
}

/// Exact witnesses at every level of the chain of a feasible LP.
fn witness_levels(c: &Compiled, x: &[Rat]) -> Vec<Solution> {
    let mut sols = vec![Solution::Vector(x.to_vec())];
    for stage in Stage::ALL {
        let k = stage.index();
        let next = construct_witness(stage, &c.sources[k], &sols[k], &c.traces[k]).expect("witness");
        sols.push(next);
    }
    sols
}

fn level_instance(c: &Compiled, k: usize) -> Instance {
    if k == 9 {
        Instance::TwoCf(c.instance.clone())
    } else {
        c.sources[k].clone()
    }
}

fn chain_fixture(seed: u64, eps_lp: &Rat) -> (Compiled, Vec<Solution>) {
    let mut rng = common::rng(seed);
    loop {
        let (lp, x) = common::feasible_lp(&mut rng, common::TINY);
        if x.iter().all(|v| v.is_zero()) {
            continue;
        }
        let c = compile(&lp, eps_lp).expect("compile");
        let sols = witness_levels(&c, &x);
        return (c, sols);
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let eps_lp = ratio(C5_EPS_LP.0, C5_EPS_LP.1);
    let fixtures: Vec<_> = (0..4).map(|s| chain_fixture(50 + s, &eps_lp)).collect();
    let mut rng = common::rng(5);
    let (mut violations, mut full_scale, mut total) = (Vec::new(), 0, 0);
    for stage in Stage::ALL {
        let k = stage.index();
        for trial in 0..C5_TRIALS {
            let (c, sols) = &fixtures[trial % fixtures.len()];
            let (eps_a, eps_b) = c.budget.stage(stage);
            let target = level_instance(c, k + 1);
            let (sol, halvings) = feasible_perturbation(&mut rng, &target, &sols[k + 1], eps_b, trial % 2 == 0);
            total += 1;
            if halvings == 0 {
                full_scale += 1;
            }
            let back = map_back(stage, &target, &sol, &c.traces[k]).expect("map back");
            let source = &c.sources[k];
            let rep = check(source.class(), source, &back, eps_a).expect("verify");
            if !rep.passes(eps_a) {
                violations.push(format!("{} trial {trial}: {}", stage.name(), rep.max()));
            }
        }
    }
    timed(
        C5_LIMIT,
        start,
        violations.is_empty(),
        format!(
            "{total} perturbations over 9 stages ({full_scale} at full scale eps^B), {} violations {:?}",
            violations.len(),
            violations.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let eps_lp = ratio(C5_EPS_LP.0, C5_EPS_LP.1);
    let fixtures: Vec<_> = (0..4).map(|s| chain_fixture(60 + s, &eps_lp)).collect();
    let mut rng = common::rng(6);
    let (mut bad, mut worst) = (0, Rat::zero());
    for trial in 0..C6_TRIALS {
        let (c, sols) = &fixtures[trial % fixtures.len()];
        let eps_r = &c.budget.eps[8];
        let inst = level_instance(c, 8);
        let (sol, _) = feasible_perturbation(&mut rng, &inst, &sols[8], eps_r, trial % 2 == 0);
        let Solution::Flow(f) = sol else {
            unreachable!("2CFR solutions are flows")
        };
        let edges_f = c.sources[7].graph().expect("2CFF graph").num_edges();
        let sum: Rat = (0..edges_f)
            .map(|e| (f.get(1, 7 * e + 3) - f.get(1, 7 * e + 5)).abs())
            .sum();
        let bound = Rat::from_integer(Int::from(6 * edges_f)) * eps_r;
        if sum > bound {
            bad += 1;
        }
        let share = if bound.is_zero() { Rat::zero() } else { &sum / &bound };
        worst = worst.max(share);
    }
    timed(
        C6_LIMIT,
        start,
        bad == 0,
        format!("{C6_TRIALS} perturbations, {bad} above 6|E^f|eps^r, largest sum/bound {worst}"),
    )
}

/// LP with exactly `nnz` nonzeros (ten per row) and X = C8_X.
fn wide_lp(rng: &mut impl Rng, nnz: usize) -> LpInstance {
    let n = nnz / 10;
    let step = n / 10;
    let mut triples = Vec::with_capacity(nnz);
    for i in 0..n {
        for k in 0..10 {
            let mut v = rng.gen_range(-C8_X..=C8_X);
            if v == 0 {
                v = C8_X;
            }
            triples.push((i as u32, ((i + k * step) % n) as u32, Int::from(v)));
        }
    }
    triples[0].2 = Int::from(C8_X);
    LpInstance {
        a: SparseIntMatrix::from_triples(n, n, triples).expect("distinct columns per row"),
        b: (0..n).map(|_| Int::from(rng.gen_range(0..=C8_X))).collect(),
        c: (0..n).map(|_| Int::from(rng.gen_range(-C8_X..=C8_X))).collect(),
        k: Int::zero(),
        r: Int::from(C8_X),
    }
}

fn criterion_8() -> Outcome {
    let mut rng = common::rng(8);
    let mut points = Vec::new();
    for nnz in C8_SIZES {
        let lp = wide_lp(&mut rng, nnz);
        assert_eq!(lp.a.nnz(), nnz);
        let x = lp_x(&lp);
        assert!(x <= Int::from(C8_X));
        let mut times: Vec<Duration> = (0..C8_RUNS)
            .map(|_| {
                let start = Instant::now();
                let c = compile_with(&lp, &ratio(1, 1000), false).expect("compile");
                let t = start.elapsed();
                drop(c);
                t
            })
            .collect();
        times.sort();
        let work = nnz as f64 * floor_log2(&x).max(1) as f64;
        points.push((nnz, work, times[C8_RUNS / 2]));
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for w in points.windows(2) {
        let growth = w[1].2.as_secs_f64() / w[0].2.as_secs_f64();
        let allowed = C8_FACTOR * w[1].1 / w[0].1;
        pass &= growth <= allowed;
        parts.push(format!(
            "{} -> {}: x{:.2} (allowed x{:.1})",
            w[0].0, w[1].0, growth, allowed
        ));
    }
    let times: Vec<String> = points.iter().map(|p| format!("{}: {:.2?}", p.0, p.2)).collect();
    outcome(pass, format!("median times {}; {}", times.join(", "), parts.join(", ")))
}

fn report(k: usize, o: &Outcome) {
    println!("criterion {k}: {} : {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
}

fn main() {
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |k: usize| only.is_empty() || only.contains(&k);
    let mut failed = 0;
    let mut run = |k: usize, o: Outcome| {
        report(k, &o);
        failed += usize::from(!o.pass);
    };
    if wanted(1) {
        run(1, criterion_1());
    }
    if wanted(2) || wanted(7) {
        let (c2, c7) = criteria_2_and_7();
        if wanted(2) {
            run(2, c2);
        }
        if wanted(7) {
            run(7, c7);
        }
    }
    let rest: [(usize, fn() -> Outcome); 5] = [
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (8, criterion_8),
    ];
    for (k, f) in rest {
        if wanted(k) {
            run(k, f());
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
