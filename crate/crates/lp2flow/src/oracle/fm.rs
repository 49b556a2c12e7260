//! Fourier–Motzkin elimination over primitive integer inequalities `a x <= b`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Int, Rat};
use crate::error::{Error, Result};

/// Inequality `coef . x <= rhs`, stored as coefficients followed by rhs.
type Row = Vec<Int>;

fn primitive(mut row: Row) -> Row {
    let g = row.iter().fold(Int::zero(), |g, v| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

/// Finds x with `rows` satisfied, or None when the system is infeasible.
/// `max_rows` bounds the size of any intermediate system.
pub fn solve(n: usize, rows: Vec<Vec<Int>>, max_rows: usize) -> Result<Option<Vec<Rat>>> {
    let mut system: BTreeSet<Row> = BTreeSet::new();
    for r in rows {
        debug_assert_eq!(r.len(), n + 1);
        if let Some(r) = keep(primitive(r)) {
            system.insert(r);
        }
    }
    if system.iter().any(is_contradiction) {
        return Ok(None);
    }
    let mut eliminated = Vec::with_capacity(n);
    let mut history: Vec<Vec<Row>> = Vec::with_capacity(n);
    let mut alive: Vec<bool> = vec![true; n];
    for _ in 0..n {
        // Variable with the fewest new rows.
        let k = (0..n)
            .filter(|&k| alive[k])
            .min_by_key(|&k| {
                let pos = system.iter().filter(|r| r[k].is_positive()).count();
                let neg = system.iter().filter(|r| r[k].is_negative()).count();
                pos * neg
            })
            .expect("a live variable");
        alive[k] = false;
        eliminated.push(k);
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), BTreeSet::new());
        for r in &system {
            if r[k].is_positive() {
                pos.push(r);
            } else if r[k].is_negative() {
                neg.push(r);
            } else {
                next.insert(r.clone());
            }
        }
        for p in &pos {
            for q in &neg {
                let (a, b) = (&p[k], -&q[k]);
                let row: Row = p.iter().zip(q.iter()).map(|(x, y)| &b * x + a * y).collect();
                if let Some(r) = keep(primitive(row)) {
                    if is_contradiction(&r) {
                        return Ok(None);
                    }
                    next.insert(r);
                }
                if next.len() > max_rows {
                    return Err(Error::SizeGuard(format!(
                        "elimination produced more than {max_rows} inequalities"
                    )));
                }
            }
        }
        history.push(system.into_iter().collect());
        system = next;
    }
    // Back substitution: each variable takes its largest lower bound.
    let mut x = vec![Rat::zero(); n];
    let mut known = vec![false; n];
    for (step, &k) in eliminated.iter().enumerate().rev() {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for r in &history[step] {
            if r[k].is_zero() {
                continue;
            }
            let mut rest = Rat::from_integer(r[n].clone());
            for j in 0..n {
                if j != k && known[j] {
                    rest -= Rat::from_integer(r[j].clone()) * &x[j];
                }
            }
            let bound = rest / Rat::from_integer(r[k].clone());
            if r[k].is_positive() {
                hi = Some(hi.map_or(bound.clone(), |h: Rat| h.min(bound)));
            } else {
                lo = Some(lo.map_or(bound.clone(), |l: Rat| l.max(bound)));
            }
        }
        x[k] = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h.min(Rat::zero()),
            (None, None) => Rat::zero(),
        };
        known[k] = true;
    }
    Ok(Some(x))
}

/// Drops rows with no variable that hold trivially.
fn keep(row: Row) -> Option<Row> {
    let n = row.len() - 1;
    if row[..n].iter().all(|v| v.is_zero()) && !row[n].is_negative() {
        None
    } else {
        Some(row)
    }
}

fn is_contradiction(row: &Row) -> bool {
    let n = row.len() - 1;
    row[..n].iter().all(|v| v.is_zero()) && row[n].is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn rows(v: &[&[i64]]) -> Vec<Vec<Int>> {
        v.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect()
    }

    #[test]
    fn box_and_sum() {
        // x <= 1, y <= 1, -x - y <= -2, x, y >= 0.
        let sys = rows(&[&[1, 0, 1], &[0, 1, 1], &[-1, -1, -2], &[-1, 0, 0], &[0, -1, 0]]);
        assert_eq!(solve(2, sys, 1000).unwrap(), Some(vec![rat(1), rat(1)]));
    }

    #[test]
    fn contradiction() {
        let sys = rows(&[&[1, 1], &[-1, -2]]);
        assert_eq!(solve(1, sys, 1000).unwrap(), None);
    }
}
