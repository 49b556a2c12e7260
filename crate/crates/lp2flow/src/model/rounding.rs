use num_traits::{One, Signed, Zero};

use super::{LpInstance, SparseIntMatrix};
use crate::arith::{Int, Rat};
use crate::error::{Error, Result};

/// An LP with rational data, before rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealLp {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<(usize, usize, Rat)>,
    pub b: Vec<Rat>,
    pub c: Vec<Rat>,
    pub k: Rat,
}

fn ceil(v: &Rat) -> Int {
    v.ceil().to_integer()
}

fn floor(v: &Rat) -> Int {
    v.floor().to_integer()
}

/// Rounds A down and b, c up on the grid 1/D with D = ceil(1/step), where
/// step = min(eps/(3R), U/(kappa R)) and U is the largest absolute entry, then
/// scales by D. K is rounded down on the same grid. Integral input is
/// returned unchanged with D = 1.
pub fn round_lp_to_integers(lp: &RealLp, r: &Int, kappa: &Rat, eps: &Rat) -> Result<(LpInstance, Int)> {
    if !kappa.is_positive() {
        return Err(Error::Range("kappa must be positive".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Range("eps must be positive".into()));
    }
    if r < &Int::one() {
        return Err(Error::Range("R must be at least 1".into()));
    }
    let all_integral = lp.a.iter().all(|e| e.2.is_integer())
        && lp.b.iter().all(|v| v.is_integer())
        && lp.c.iter().all(|v| v.is_integer())
        && lp.k.is_integer();
    let u =
        lp.a.iter()
            .map(|e| &e.2)
            .chain(lp.b.iter())
            .chain(lp.c.iter())
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rat::zero);
    let scale = if all_integral || u.is_zero() {
        Int::one()
    } else {
        let rr = Rat::from_integer(r.clone());
        let s1 = eps / (Rat::from_integer(Int::from(3)) * &rr);
        let s2 = &u / (kappa * &rr);
        let step = if s1 < s2 { s1 } else { s2 };
        ceil(&step.recip())
    };
    let d = Rat::from_integer(scale.clone());
    let mut triples = Vec::new();
    for (i, j, v) in &lp.a {
        let w = floor(&(v * &d));
        if !w.is_zero() {
            triples.push((*i as u32, *j as u32, w));
        }
    }
    let a = SparseIntMatrix::from_triples(lp.rows, lp.cols, triples)?;
    let b = lp.b.iter().map(|v| ceil(&(v * &d))).collect();
    let c = lp.c.iter().map(|v| ceil(&(v * &d))).collect();
    let k = floor(&(&lp.k * &d));
    Ok((
        LpInstance {
            a,
            b,
            c,
            k,
            r: r.clone(),
        },
        scale,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, ratio};

    #[test]
    fn third_rounds_down_on_tenths() {
        let lp = RealLp {
            rows: 1,
            cols: 1,
            a: vec![(0, 0, ratio(1, 3))],
            b: vec![rat(1)],
            c: vec![rat(1)],
            k: rat(0),
        };
        let (out, d) = round_lp_to_integers(&lp, &int(1), &rat(10), &rat(3)).unwrap();
        assert_eq!(d, int(10));
        assert_eq!(out.a.get(0, 0), int(3));
        assert_eq!(out.b, vec![int(10)]);
        assert_eq!(out.c, vec![int(10)]);
    }

    #[test]
    fn integral_input_is_identity() {
        let lp = RealLp {
            rows: 1,
            cols: 2,
            a: vec![(0, 0, rat(2)), (0, 1, rat(-1))],
            b: vec![rat(4)],
            c: vec![rat(1), rat(1)],
            k: rat(1),
        };
        let (out, d) = round_lp_to_integers(&lp, &int(5), &rat(2), &ratio(1, 100)).unwrap();
        assert_eq!(d, int(1));
        assert_eq!(out.a.get(0, 1), int(-1));
        assert_eq!(out.k, int(1));
    }

    #[test]
    fn rejects_bad_parameters() {
        let lp = RealLp {
            rows: 0,
            cols: 0,
            a: vec![],
            b: vec![],
            c: vec![],
            k: rat(0),
        };
        assert!(round_lp_to_integers(&lp, &int(1), &rat(0), &rat(1)).is_err());
        assert!(round_lp_to_integers(&lp, &int(1), &rat(1), &rat(0)).is_err());
    }
}
