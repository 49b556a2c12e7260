use num_traits::One;

use super::LpLenTrace;
use crate::arith::{at_least_one, Int};
use crate::error::Result;
use crate::model::{lp_x, LenInstance, LpInstance, SparseIntMatrix};

/// Adds slacks s and a surplus alpha: c^T x - alpha = K, Ax + s = b.
pub fn lp_to_len(lp: &LpInstance) -> Result<(LenInstance, LpLenTrace)> {
    let (m, n) = (lp.a.rows(), lp.a.cols());
    let cols = n + m + 1;
    let mut entries = Vec::with_capacity(lp.a.nnz() + lp.c.len() + m + 1);
    for (j, v) in lp.c.iter().enumerate() {
        if v.sign() != num_bigint::Sign::NoSign {
            entries.push((0, j as u32, v.clone()));
        }
    }
    entries.push((0, (n + m) as u32, -Int::one()));
    for i in 0..m {
        for (_, j, v) in lp.a.row(i) {
            entries.push((i as u32 + 1, *j, v.clone()));
        }
        entries.push((i as u32 + 1, (n + i) as u32, Int::one()));
    }
    let a = SparseIntMatrix::from_sorted_unchecked(m + 1, cols, entries);
    let mut b = Vec::with_capacity(m + 1);
    b.push(lp.k.clone());
    b.extend(lp.b.iter().cloned());
    let x = at_least_one(&lp_x(lp));
    let r_tilde = Int::from(5u32) * Int::from(m) * &lp.r * &x;
    Ok((
        LenInstance {
            a,
            b,
            r: r_tilde.clone(),
        },
        LpLenTrace { n, m, x, r_tilde },
    ))
}
