//! Exact feasibility of `A x = b, l <= x <= u` by presolve and a bounded
//! primal simplex over rationals.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::arith::Rat;
use crate::error::{Error, Result};

/// Equality-form LP with bounded variables; `upper = None` is unbounded.
#[derive(Clone, Debug, Default)]
pub struct EqualityLp {
    pub num_vars: usize,
    pub rows: Vec<Vec<(usize, Rat)>>,
    pub rhs: Vec<Rat>,
    pub lower: Vec<Rat>,
    pub upper: Vec<Option<Rat>>,
}

impl EqualityLp {
    pub fn add_var(&mut self, lower: Rat, upper: Option<Rat>) -> usize {
        self.lower.push(lower);
        self.upper.push(upper);
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn add_row(&mut self, row: Vec<(usize, Rat)>, rhs: Rat) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    /// True when `x` satisfies every row and bound exactly.
    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        let bounds = x
            .iter()
            .enumerate()
            .all(|(j, v)| v >= &self.lower[j] && self.upper[j].as_ref().is_none_or(|u| v <= u));
        bounds
            && self
                .rows
                .iter()
                .zip(&self.rhs)
                .all(|(row, b)| &row.iter().map(|(j, a)| a * &x[*j]).sum::<Rat>() == b)
    }
}

/// Sizes seen while solving.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub vars: usize,
    pub rows: usize,
    pub core_vars: usize,
    pub core_rows: usize,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Feasible(Vec<Rat>),
    Infeasible,
}

/// Decides feasibility exactly; `max_core` bounds rows times columns of the
/// dense simplex tableau left after presolve.
pub fn solve(lp: &EqualityLp, max_core: usize) -> Result<(Outcome, SolveStats)> {
    let mut stats = SolveStats {
        vars: lp.num_vars,
        rows: lp.rows.len(),
        ..SolveStats::default()
    };
    let mut p = Presolve::new(lp);
    if p.run().is_err() {
        return Ok((Outcome::Infeasible, stats));
    }
    let core_rows: Vec<usize> = (0..p.rows.len()).filter(|&r| p.row_alive[r]).collect();
    let core_vars: Vec<usize> = (0..lp.num_vars)
        .filter(|&j| p.col_alive[j] && !p.cols[j].is_empty())
        .collect();
    stats.core_rows = core_rows.len();
    stats.core_vars = core_vars.len();
    if core_rows.len().saturating_mul(core_vars.len()) > max_core {
        return Err(Error::SizeGuard(format!(
            "presolved core has {} rows and {} columns, above the tableau limit {max_core}",
            core_rows.len(),
            core_vars.len()
        )));
    }
    let mut x: Vec<Option<Rat>> = vec![None; lp.num_vars];
    for j in 0..lp.num_vars {
        if p.col_alive[j] && p.cols[j].is_empty() {
            x[j] = Some(p.lower[j].clone());
        }
    }
    if !core_rows.is_empty() {
        let mut col_of = BTreeMap::new();
        for (k, &j) in core_vars.iter().enumerate() {
            col_of.insert(j as u32, k);
        }
        let a: Vec<Vec<(usize, Rat)>> = core_rows
            .iter()
            .map(|&r| p.rows[r].iter().map(|(j, v)| (col_of[j], v.clone())).collect())
            .collect();
        let b: Vec<Rat> = core_rows.iter().map(|&r| p.rhs[r].clone()).collect();
        let lo: Vec<Rat> = core_vars.iter().map(|&j| p.lower[j].clone()).collect();
        let up: Vec<Option<Rat>> = core_vars.iter().map(|&j| p.upper[j].clone()).collect();
        let (res, pivots) = phase_one(&a, &b, &lo, &up);
        stats.pivots = pivots;
        match res {
            Some(z) => {
                for (k, &j) in core_vars.iter().enumerate() {
                    x[j] = Some(z[k].clone());
                }
            }
            None => return Ok((Outcome::Infeasible, stats)),
        }
    }
    for op in p.post.iter().rev() {
        match op {
            Post::Fix(j, v) => x[*j as usize] = Some(v.clone()),
            Post::Subst { var, constant, terms } => {
                let mut v = constant.clone();
                for (k, c) in terms {
                    v += c * x[*k as usize].as_ref().expect("substituted after its terms");
                }
                x[*var as usize] = Some(v);
            }
        }
    }
    let x: Vec<Rat> = x.into_iter().map(|v| v.expect("every variable assigned")).collect();
    debug_assert!(lp.satisfied_by(&x));
    Ok((Outcome::Feasible(x), stats))
}

enum Post {
    Fix(u32, Rat),
    Subst {
        var: u32,
        constant: Rat,
        terms: Vec<(u32, Rat)>,
    },
}

struct Infeasible;

struct Presolve {
    rows: Vec<BTreeMap<u32, Rat>>,
    rhs: Vec<Rat>,
    row_alive: Vec<bool>,
    cols: Vec<BTreeSet<u32>>,
    col_alive: Vec<bool>,
    lower: Vec<Rat>,
    upper: Vec<Option<Rat>>,
    post: Vec<Post>,
    queue: VecDeque<u32>,
    queued: Vec<bool>,
}

impl Presolve {
    fn new(lp: &EqualityLp) -> Self {
        let mut rows = Vec::with_capacity(lp.rows.len());
        let mut cols = vec![BTreeSet::new(); lp.num_vars];
        for (r, row) in lp.rows.iter().enumerate() {
            let mut map: BTreeMap<u32, Rat> = BTreeMap::new();
            for (j, v) in row {
                *map.entry(*j as u32).or_insert_with(Rat::zero) += v;
            }
            map.retain(|_, v| !v.is_zero());
            for j in map.keys() {
                cols[*j as usize].insert(r as u32);
            }
            rows.push(map);
        }
        let n = lp.rows.len();
        Presolve {
            rows,
            rhs: lp.rhs.clone(),
            row_alive: vec![true; n],
            cols,
            col_alive: vec![true; lp.num_vars],
            lower: lp.lower.clone(),
            upper: lp.upper.clone(),
            post: Vec::new(),
            queue: (0..n as u32).collect(),
            queued: vec![true; n],
        }
    }

    fn enqueue(&mut self, r: u32) {
        if self.row_alive[r as usize] && !self.queued[r as usize] {
            self.queued[r as usize] = true;
            self.queue.push_back(r);
        }
    }

    fn enqueue_col(&mut self, j: u32) {
        let rows: Vec<u32> = self.cols[j as usize].iter().copied().collect();
        for r in rows {
            self.enqueue(r);
        }
    }

    fn run(&mut self) -> std::result::Result<(), Infeasible> {
        for j in 0..self.lower.len() {
            if let Some(u) = &self.upper[j] {
                if u < &self.lower[j] {
                    return Err(Infeasible);
                }
                if u == &self.lower[j] {
                    let v = u.clone();
                    self.fix(j as u32, v)?;
                }
            }
        }
        while let Some(r) = self.queue.pop_front() {
            self.queued[r as usize] = false;
            if self.row_alive[r as usize] {
                self.row(r)?;
            }
        }
        Ok(())
    }

    fn remove_row(&mut self, r: u32) {
        self.row_alive[r as usize] = false;
        for j in self.rows[r as usize].keys() {
            self.cols[*j as usize].remove(&r);
        }
        self.rows[r as usize].clear();
    }

    fn fix(&mut self, j: u32, v: Rat) -> std::result::Result<(), Infeasible> {
        let ju = j as usize;
        if v < self.lower[ju] || self.upper[ju].as_ref().is_some_and(|u| &v > u) {
            return Err(Infeasible);
        }
        let rows = std::mem::take(&mut self.cols[ju]);
        for r in rows {
            let a = self.rows[r as usize].remove(&j).expect("column entry");
            self.rhs[r as usize] -= a * &v;
            self.enqueue(r);
        }
        self.col_alive[ju] = false;
        self.post.push(Post::Fix(j, v));
        Ok(())
    }

    fn set_bounds(&mut self, j: u32, lo: Option<Rat>, up: Option<Rat>) -> std::result::Result<(), Infeasible> {
        let ju = j as usize;
        let mut changed = false;
        if let Some(lo) = lo {
            if lo > self.lower[ju] {
                self.lower[ju] = lo;
                changed = true;
            }
        }
        if let Some(up) = up {
            if self.upper[ju].as_ref().is_none_or(|u| &up < u) {
                self.upper[ju] = Some(up);
                changed = true;
            }
        }
        if let Some(u) = &self.upper[ju] {
            if u < &self.lower[ju] {
                return Err(Infeasible);
            }
            if u == &self.lower[ju] {
                let v = u.clone();
                return self.fix(j, v);
            }
        }
        if changed {
            self.enqueue_col(j);
        }
        Ok(())
    }

    fn row(&mut self, r: u32) -> std::result::Result<(), Infeasible> {
        let ru = r as usize;
        let len = self.rows[ru].len();
        if len == 0 {
            if !self.rhs[ru].is_zero() {
                return Err(Infeasible);
            }
            self.remove_row(r);
            return Ok(());
        }
        if len == 1 {
            let (j, a) = self.rows[ru].iter().next().map(|(j, a)| (*j, a.clone())).unwrap();
            let v = &self.rhs[ru] / a;
            self.remove_row(r);
            return self.fix(j, v);
        }
        // Activity bounds; None is infinite.
        let mut min = Some(Rat::zero());
        let mut max = Some(Rat::zero());
        for (j, a) in &self.rows[ru] {
            let (lo, up) = (&self.lower[*j as usize], &self.upper[*j as usize]);
            let (at_min, at_max) = if a.is_positive() {
                (Some(lo), up.as_ref())
            } else {
                (up.as_ref(), Some(lo))
            };
            min = match (min, at_min) {
                (Some(s), Some(v)) => Some(s + a * v),
                _ => None,
            };
            max = match (max, at_max) {
                (Some(s), Some(v)) => Some(s + a * v),
                _ => None,
            };
        }
        let b = self.rhs[ru].clone();
        if min.as_ref().is_some_and(|m| m > &b) || max.as_ref().is_some_and(|m| m < &b) {
            return Err(Infeasible);
        }
        let forcing = if min.as_ref() == Some(&b) {
            Some(true)
        } else if max.as_ref() == Some(&b) {
            Some(false)
        } else {
            None
        };
        if let Some(at_min) = forcing {
            let entries: Vec<(u32, bool)> = self.rows[ru].iter().map(|(j, a)| (*j, a.is_positive())).collect();
            self.remove_row(r);
            for (j, pos) in entries {
                if !self.col_alive[j as usize] {
                    continue;
                }
                let v = if pos == at_min {
                    self.lower[j as usize].clone()
                } else {
                    self.upper[j as usize].clone().expect("finite activity")
                };
                self.fix(j, v)?;
            }
            return Ok(());
        }
        if len == 2 {
            return self.doubleton(r);
        }
        Ok(())
    }

    /// a x + c y = b: substitutes x = b / a - (c / a) y everywhere.
    fn doubleton(&mut self, r: u32) -> std::result::Result<(), Infeasible> {
        let ru = r as usize;
        let mut it = self.rows[ru].iter();
        let (j1, a1) = it.next().map(|(j, a)| (*j, a.clone())).unwrap();
        let (j2, a2) = it.next().map(|(j, a)| (*j, a.clone())).unwrap();
        let (x, a, y, c) = if self.cols[j1 as usize].len() <= self.cols[j2 as usize].len() {
            (j1, a1, j2, a2)
        } else {
            (j2, a2, j1, a1)
        };
        let p = &self.rhs[ru] / &a;
        let q = -(&c / &a);
        self.remove_row(r);
        // Bounds of x become bounds of y.
        let (xl, xu) = (self.lower[x as usize].clone(), self.upper[x as usize].clone());
        let from_lo = (&xl - &p) / &q;
        let from_up = xu.map(|u| (u - &p) / &q);
        let (ylo, yup) = if q.is_positive() {
            (Some(from_lo), from_up)
        } else {
            (from_up, Some(from_lo))
        };
        let rows = std::mem::take(&mut self.cols[x as usize]);
        for s in rows {
            let su = s as usize;
            let coef = self.rows[su].remove(&x).expect("column entry");
            self.rhs[su] -= &coef * &p;
            let add = &coef * &q;
            let entry = self.rows[su].entry(y).or_insert_with(Rat::zero);
            *entry += add;
            if entry.is_zero() {
                self.rows[su].remove(&y);
                self.cols[y as usize].remove(&s);
            } else {
                self.cols[y as usize].insert(s);
            }
            self.enqueue(s);
        }
        self.col_alive[x as usize] = false;
        self.post.push(Post::Subst {
            var: x,
            constant: p,
            terms: vec![(y, q)],
        });
        self.set_bounds(y, ylo, yup)
    }
}

/// Phase one of the bounded primal simplex with Bland's rule on a dense
/// tableau; returns a feasible point and the pivot count.
fn phase_one(a: &[Vec<(usize, Rat)>], b: &[Rat], lo: &[Rat], up: &[Option<Rat>]) -> (Option<Vec<Rat>>, usize) {
    let m = a.len();
    let n = lo.len();
    // Shift x = lo + z, 0 <= z <= cap.
    let cap: Vec<Option<Rat>> = up.iter().zip(lo).map(|(u, l)| u.as_ref().map(|u| u - l)).collect();
    let mut t = vec![vec![Rat::zero(); n]; m];
    let mut beta = vec![Rat::zero(); m];
    for i in 0..m {
        let mut rhs = b[i].clone();
        for (j, v) in &a[i] {
            rhs -= v * &lo[*j];
            t[i][*j] = v.clone();
        }
        if rhs.is_negative() {
            rhs = -rhs;
            for v in t[i].iter_mut() {
                *v = -v.clone();
            }
        }
        beta[i] = rhs;
    }
    // Artificials sort last in the Bland order and never re-enter.
    const ART: usize = usize::MAX;
    let mut basis = vec![ART; m];
    let mut at_upper = vec![false; n];
    let mut is_basic = vec![false; n];
    // Reduced costs of minimizing the sum of artificials.
    let mut d: Vec<Rat> = (0..n).map(|j| -(0..m).map(|i| &t[i][j]).sum::<Rat>()).collect();
    let mut pivots = 0;
    loop {
        let entering = (0..n)
            .find(|&j| !is_basic[j] && ((!at_upper[j] && d[j].is_negative()) || (at_upper[j] && d[j].is_positive())));
        let Some(j) = entering else { break };
        let dir_up = !at_upper[j];
        // Largest step keeping every basic variable within bounds.
        let mut best: Option<(Rat, Option<usize>)> = cap[j].clone().map(|c| (c, None));
        for i in 0..m {
            let tij = &t[i][j];
            if tij.is_zero() {
                continue;
            }
            // Basic value moves by -tij per unit of the entering move.
            let delta = if dir_up { -tij.clone() } else { tij.clone() };
            let bcap = if basis[i] == ART { None } else { cap[basis[i]].clone() };
            let limit = if delta.is_negative() {
                Some(&beta[i] / (-&delta))
            } else {
                bcap.map(|u| (u - &beta[i]) / &delta)
            };
            if let Some(limit) = limit {
                let better = match &best {
                    None => true,
                    Some((v, row)) => &limit < v || (&limit == v && row.is_some_and(|r| basis[i] < basis[r])),
                };
                if better {
                    best = Some((limit, Some(i)));
                }
            }
        }
        let (step, row) = best.expect("phase one is bounded");
        for i in 0..m {
            let tij = &t[i][j];
            if !tij.is_zero() {
                let delta = if dir_up { -tij.clone() } else { tij.clone() };
                beta[i] += delta * &step;
            }
        }
        let Some(r) = row else {
            at_upper[j] = !at_upper[j];
            continue;
        };
        pivots += 1;
        let leaving = basis[r];
        let entering_value = if dir_up {
            step.clone()
        } else {
            cap[j].clone().unwrap() - &step
        };
        if leaving != ART {
            is_basic[leaving] = false;
            at_upper[leaving] = cap[leaving].as_ref().is_some_and(|u| beta[r] == *u);
        }
        at_upper[j] = false;
        is_basic[j] = true;
        basis[r] = j;
        beta[r] = entering_value;
        let piv = t[r][j].clone();
        for v in t[r].iter_mut() {
            *v /= &piv;
        }
        let prow = t[r].clone();
        let nz: Vec<usize> = (0..n).filter(|&k| !prow[k].is_zero()).collect();
        for i in 0..m {
            if i == r || t[i][j].is_zero() {
                continue;
            }
            let f = t[i][j].clone();
            for &k in &nz {
                let delta = &f * &prow[k];
                t[i][k] -= delta;
            }
        }
        let f = d[j].clone();
        if !f.is_zero() {
            for &k in &nz {
                let delta = &f * &prow[k];
                d[k] -= delta;
            }
        }
    }
    let infeasible = (0..m).any(|i| basis[i] == ART && !beta[i].is_zero());
    if infeasible {
        return (None, pivots);
    }
    let mut z: Vec<Rat> = (0..n)
        .map(|j| {
            if at_upper[j] {
                cap[j].clone().unwrap()
            } else {
                Rat::zero()
            }
        })
        .collect();
    for i in 0..m {
        if basis[i] != ART {
            z[basis[i]] = beta[i].clone();
        }
    }
    (Some(z.into_iter().zip(lo).map(|(z, l)| z + l).collect()), pivots)
}
