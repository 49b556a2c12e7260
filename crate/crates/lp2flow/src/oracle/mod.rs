//! Exact reference solvers for small instances.

pub mod exact_lp;
pub mod fm;

use num_traits::{Signed, Zero};

use crate::arith::{rat, to_rat, Int, Rat};
use crate::error::{Error, Result};
use crate::model::{validate, Instance, LpInstance, SparseIntMatrix, TwoCfInstance, TwoCommodityFlow};
use crate::verify::check;

pub use exact_lp::{EqualityLp, Outcome, SolveStats};

/// Environment variable overriding the instance size guards.
pub const GUARD_ENV: &str = "LP2FLOW_SIZE_GUARD";

/// Size limits of the oracles; exceeding one is an error, never a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    pub lp_vars: usize,
    pub lp_rows: usize,
    pub twocf_edges: usize,
    /// Largest intermediate system of the elimination.
    pub fm_rows: usize,
    /// Largest rows times columns of the simplex tableau after presolve.
    pub tableau: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            lp_vars: 8,
            lp_rows: 8,
            twocf_edges: 200,
            fm_rows: 200_000,
            tableau: 4_000_000,
        }
    }
}

impl Guard {
    /// Defaults, with the instance limits replaced by `LP2FLOW_SIZE_GUARD` when set.
    pub fn from_env() -> Result<Self> {
        let mut g = Guard::default();
        if let Ok(v) = std::env::var(GUARD_ENV) {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Range(format!("{GUARD_ENV} = {v:?} is not a count")))?;
            g.lp_vars = n;
            g.lp_rows = n;
            g.twocf_edges = n;
        }
        Ok(g)
    }

    pub fn unlimited_instances(self) -> Self {
        Guard {
            lp_vars: usize::MAX,
            lp_rows: usize::MAX,
            twocf_edges: usize::MAX,
            ..self
        }
    }
}

/// Decision with an exact certificate on the feasible side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<T> {
    Feasible(T),
    Infeasible,
}

impl<T> Verdict<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Verdict<U> {
        match self {
            Verdict::Feasible(t) => Verdict::Feasible(f(t)),
            Verdict::Infeasible => Verdict::Infeasible,
        }
    }

    pub fn witness(&self) -> Option<&T> {
        match self {
            Verdict::Feasible(t) => Some(t),
            Verdict::Infeasible => None,
        }
    }
}

fn lp_guard(lp: &LpInstance, guard: &Guard) -> Result<()> {
    let (n, m) = (lp.a.cols(), lp.a.rows());
    if n > guard.lp_vars || m > guard.lp_rows {
        return Err(Error::SizeGuard(format!(
            "LP has n = {n}, m = {m}; the oracle accepts n <= {}, m <= {}",
            guard.lp_vars, guard.lp_rows
        )));
    }
    Ok(())
}

/// Rows of `A x <= b`, `-c x <= -K`, `-x <= 0` as integer vectors with the rhs last.
fn inequalities(lp: &LpInstance) -> Vec<Vec<Int>> {
    let n = lp.a.cols();
    let mut rows = Vec::with_capacity(lp.a.rows() + n + 1);
    for i in 0..lp.a.rows() {
        let mut r = vec![Int::zero(); n + 1];
        for (_, j, v) in lp.a.row(i) {
            r[*j as usize] = v.clone();
        }
        r[n] = lp.b[i].clone();
        rows.push(r);
    }
    let mut obj: Vec<Int> = lp.c.iter().map(|v| -v).collect();
    obj.push(-&lp.k);
    rows.push(obj);
    for j in 0..n {
        let mut r = vec![Int::zero(); n + 1];
        r[j] = Int::from(-1);
        rows.push(r);
    }
    rows
}

/// Exact feasibility of `A x <= b, c x >= K, x >= 0` by Fourier–Motzkin elimination.
pub fn lp_feasible_exact(lp: &LpInstance) -> Result<Verdict<Vec<Rat>>> {
    lp_feasible_exact_with(lp, &Guard::from_env()?)
}

pub fn lp_feasible_exact_with(lp: &LpInstance, guard: &Guard) -> Result<Verdict<Vec<Rat>>> {
    lp_guard(lp, guard)?;
    let x = fm::solve(lp.a.cols(), inequalities(lp), guard.fm_rows)?;
    Ok(match x {
        Some(x) => {
            let rep = check(
                crate::model::Class::Lp,
                &Instance::Lp(lp.clone()),
                &crate::model::Solution::Vector(x.clone()),
                &Rat::zero(),
            )?;
            if !rep.is_exact() {
                return Err(Error::NotExact(format!("elimination witness has error {}", rep.max())));
            }
            Verdict::Feasible(x)
        }
        None => Verdict::Infeasible,
    })
}

/// Feasibility by enumerating every basic solution; an independent cross-check.
pub fn lp_feasible_by_vertices(lp: &LpInstance, guard: &Guard) -> Result<Verdict<Vec<Rat>>> {
    lp_guard(lp, guard)?;
    let n = lp.a.cols();
    let rows = inequalities(lp);
    let total = rows.len();
    let mut pick: Vec<usize> = (0..n).collect();
    if n == 0 {
        return Ok(if rows.iter().all(|r| !r[0].is_negative()) {
            Verdict::Feasible(Vec::new())
        } else {
            Verdict::Infeasible
        });
    }
    loop {
        if let Some(x) = solve_square(&rows, &pick, n) {
            let ok = rows.iter().all(|r| {
                let lhs: Rat = (0..n).map(|j| to_rat(&r[j]) * &x[j]).sum();
                lhs <= to_rat(&r[n])
            });
            if ok {
                return Ok(Verdict::Feasible(x));
            }
        }
        // Next n-subset in lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(Verdict::Infeasible);
            }
            i -= 1;
            if pick[i] < total - n + i {
                break;
            }
        }
        pick[i] += 1;
        for k in i + 1..n {
            pick[k] = pick[k - 1] + 1;
        }
    }
}

/// Unique solution of the chosen rows taken as equations, if any.
fn solve_square(rows: &[Vec<Int>], pick: &[usize], n: usize) -> Option<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = pick.iter().map(|&i| rows[i].iter().map(to_rat).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let piv = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &piv;
        }
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Variables of the LP encoding of a 2CF instance.
struct Encoding {
    lp: EqualityLp,
    f: [Vec<usize>; 2],
}

fn encode(cf: &TwoCfInstance) -> Encoding {
    let g = &cf.graph;
    let t = &cf.terminals;
    let m = g.num_edges();
    let mut lp = EqualityLp::default();
    let mut f: [Vec<usize>; 2] = [Vec::with_capacity(m), Vec::with_capacity(m)];
    for (c, fc) in f.iter_mut().enumerate() {
        let (s, sink) = (t.source(c + 1), t.sink(c + 1));
        for e in 0..m {
            let (x, y, u) = g.edge(e);
            let blocked = y == s || x == sink;
            let up = if blocked { Rat::zero() } else { to_rat(u) };
            fc.push(lp.add_var(Rat::zero(), Some(up)));
        }
    }
    for e in 0..m {
        let u = to_rat(g.capacity(e));
        let slack = lp.add_var(Rat::zero(), None);
        lp.add_row(vec![(f[0][e], rat(1)), (f[1][e], rat(1)), (slack, rat(1))], u);
    }
    let r = to_rat(&cf.r);
    let fv = [
        lp.add_var(Rat::zero(), Some(r.clone())),
        lp.add_var(Rat::zero(), Some(r.clone())),
    ];
    lp.add_row(vec![(fv[0], rat(1)), (fv[1], rat(1))], r);
    let one = || rat(1);
    let minus = || rat(-1);
    for c in 0..2 {
        let (s, sink) = (t.source(c + 1), t.sink(c + 1));
        let mut balance: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); g.num_vertices()];
        let mut out_s = vec![(fv[c], minus())];
        let mut in_t = vec![(fv[c], minus())];
        for e in 0..m {
            let (x, y, _) = g.edge(e);
            balance[x].push((f[c][e], one()));
            balance[y].push((f[c][e], minus()));
            if x == s {
                out_s.push((f[c][e], one()));
            }
            if y == sink {
                in_t.push((f[c][e], one()));
            }
        }
        lp.add_row(out_s, Rat::zero());
        lp.add_row(in_t, Rat::zero());
        for (v, row) in balance.into_iter().enumerate() {
            if v != s && v != sink && !row.is_empty() {
                lp.add_row(row, Rat::zero());
            }
        }
    }
    Encoding { lp, f }
}

/// Exact 2CF decision: a flow with F1 + F2 = R exists iff one with F1 + F2 >= R
/// does (scale it down). Solved through its LP encoding.
pub fn twocf_solve_exact(cf: &TwoCfInstance) -> Result<Verdict<TwoCommodityFlow>> {
    twocf_solve_exact_with(cf, &Guard::from_env()?).map(|(v, _)| v)
}

pub fn twocf_solve_exact_with(cf: &TwoCfInstance, guard: &Guard) -> Result<(Verdict<TwoCommodityFlow>, SolveStats)> {
    let inst = Instance::TwoCf(cf.clone());
    if let Some(v) = validate(&inst).first() {
        return Err(Error::invalid(v.to_string()));
    }
    let m = cf.graph.num_edges();
    if m > guard.twocf_edges {
        return Err(Error::SizeGuard(format!(
            "2CF instance has {m} edges; the oracle accepts at most {}",
            guard.twocf_edges
        )));
    }
    let enc = encode(cf);
    let (out, stats) = exact_lp::solve(&enc.lp, guard.tableau)?;
    let verdict = match out {
        Outcome::Infeasible => Verdict::Infeasible,
        Outcome::Feasible(x) => {
            let pick = |c: usize| enc.f[c].iter().map(|&v| x[v].clone()).collect();
            let flow = TwoCommodityFlow::pair(pick(0), pick(1));
            let rep = check(
                crate::model::Class::TwoCf,
                &inst,
                &crate::model::Solution::Flow(flow.clone()),
                &Rat::zero(),
            )?;
            if !rep.is_exact() {
                return Err(Error::NotExact(format!("encoded solution has error {}", rep.max())));
            }
            Verdict::Feasible(flow)
        }
    };
    Ok((verdict, stats))
}

/// Largest integer K in [k_lo, k_hi] for which `A x <= b, c x >= K, x >= 0`
/// is feasible; None when no K in the range is.
pub fn optimize_by_bisection(
    a: &SparseIntMatrix,
    b: &[Int],
    c: &[Int],
    r: &Int,
    k_lo: &Int,
    k_hi: &Int,
) -> Result<Option<Int>> {
    optimize_by_bisection_with(a, b, c, r, k_lo, k_hi, &Guard::from_env()?)
}

pub fn optimize_by_bisection_with(
    a: &SparseIntMatrix,
    b: &[Int],
    c: &[Int],
    r: &Int,
    k_lo: &Int,
    k_hi: &Int,
    guard: &Guard,
) -> Result<Option<Int>> {
    if k_lo > k_hi {
        return Err(Error::Range(format!("empty range [{k_lo}, {k_hi}]")));
    }
    let feasible = |k: &Int| -> Result<bool> {
        let lp = LpInstance {
            a: a.clone(),
            b: b.to_vec(),
            c: c.to_vec(),
            k: k.clone(),
            r: r.clone(),
        };
        Ok(lp_feasible_exact_with(&lp, guard)?.is_feasible())
    };
    if !feasible(k_lo)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (k_lo.clone(), k_hi.clone());
    // Invariant: lo feasible; every K above hi is outside the range.
    while lo < hi {
        let mid: Int = (&lo + &hi + 1) >> 1;
        if feasible(&mid)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(Some(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::model::{FlowGraph, Terminals};

    fn lp(a: &[Vec<i64>], b: &[i64], c: &[i64], k: i64) -> LpInstance {
        LpInstance {
            a: SparseIntMatrix::from_dense(a),
            b: b.iter().map(|v| int(*v)).collect(),
            c: c.iter().map(|v| int(*v)).collect(),
            k: int(k),
            r: int(10),
        }
    }

    #[test]
    fn threshold_above_bound_is_infeasible() {
        assert_eq!(
            lp_feasible_exact(&lp(&[vec![1]], &[1], &[1], 2)).unwrap(),
            Verdict::Infeasible
        );
    }

    #[test]
    fn unit_instance() {
        assert_eq!(
            lp_feasible_exact(&lp(&[vec![1]], &[1], &[1], 1)).unwrap(),
            Verdict::Feasible(vec![rat(1)])
        );
        assert!(
            lp_feasible_by_vertices(&lp(&[vec![1]], &[1], &[1], 1), &Guard::default())
                .unwrap()
                .is_feasible()
        );
    }

    #[test]
    fn guard_rejects_large_lp() {
        let big = lp(&[vec![1; 9]], &[1], &[0; 9], 0);
        assert!(matches!(
            lp_feasible_exact_with(&big, &Guard::default()),
            Err(Error::SizeGuard(_))
        ));
    }

    fn single_edge(r: i64) -> TwoCfInstance {
        let mut g = FlowGraph::new(4);
        g.add_edge(0, 1, &int(1));
        TwoCfInstance {
            graph: g,
            terminals: Terminals {
                s1: 0,
                t1: 1,
                s2: 2,
                t2: 3,
            },
            r: int(r),
        }
    }

    #[test]
    fn single_edge_flow() {
        let (v, _) = twocf_solve_exact_with(&single_edge(1), &Guard::default()).unwrap();
        assert_eq!(v, Verdict::Feasible(TwoCommodityFlow::pair(vec![rat(1)], vec![rat(0)])));
        let (v, _) = twocf_solve_exact_with(&single_edge(2), &Guard::default()).unwrap();
        assert_eq!(v, Verdict::Infeasible);
    }

    #[test]
    fn bisection() {
        let a = SparseIntMatrix::from_dense(&[vec![1]]);
        let k = optimize_by_bisection_with(&a, &[int(3)], &[int(1)], &int(3), &int(0), &int(10), &Guard::default())
            .unwrap();
        assert_eq!(k, Some(int(3)));
        let k = optimize_by_bisection_with(&a, &[int(-1)], &[int(1)], &int(3), &int(0), &int(10), &Guard::default())
            .unwrap();
        assert_eq!(k, None);
        assert!(
            optimize_by_bisection_with(&a, &[int(3)], &[int(1)], &int(3), &int(5), &int(1), &Guard::default()).is_err()
        );
    }
}
