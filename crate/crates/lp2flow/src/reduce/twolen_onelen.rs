use num_traits::{One, Signed};

use super::TwoLenOneLenTrace;
use crate::arith::Int;
use crate::error::{Error, Result};
use crate::model::{KLenInstance, SparseIntMatrix};

/// Rewrites every coefficient +-2 on x(j) as +-(x(j) + x'(j)) and appends x(j) - x'(j) = 0.
pub fn twolen_to_onelen(kl: &KLenInstance) -> Result<(KLenInstance, TwoLenOneLenTrace)> {
    let (m, n) = (kl.a.rows(), kl.a.cols());
    let two = Int::from(2);
    let mut twin_of = vec![u32::MAX; n];
    for (i, j, v) in kl.a.entries() {
        let mag = v.abs();
        if mag > two {
            return Err(Error::invalid(format!("entry ({i}, {j}) = {v} is outside [-2, 2]")));
        }
        if mag == two {
            twin_of[*j as usize] = 0;
        }
    }
    let mut twins = Vec::new();
    for (j, t) in twin_of.iter_mut().enumerate() {
        if *t == 0 {
            *t = (n + twins.len()) as u32;
            twins.push(j as u32);
        }
    }
    let one = Int::one();
    let minus_one = -Int::one();
    let mut entries = Vec::with_capacity(kl.a.nnz() + 3 * twins.len());
    let mut extra = Vec::new();
    for i in 0..m {
        extra.clear();
        for (_, j, v) in kl.a.row(i) {
            if v.abs() == two {
                let unit = if v.is_negative() { &minus_one } else { &one };
                entries.push((i as u32, *j, unit.clone()));
                extra.push((i as u32, twin_of[*j as usize], unit.clone()));
            } else {
                entries.push((i as u32, *j, v.clone()));
            }
        }
        entries.append(&mut extra);
    }
    for (k, &j) in twins.iter().enumerate() {
        let r = (m + k) as u32;
        entries.push((r, j, one.clone()));
        entries.push((r, (n + k) as u32, minus_one.clone()));
    }
    let mut b = kl.b.clone();
    b.resize(m + twins.len(), Int::from(0));
    let r_hat = Int::from(2) * &kl.r;
    let a = SparseIntMatrix::from_sorted_unchecked(m + twins.len(), n + twins.len(), entries);
    Ok((
        KLenInstance {
            a,
            b,
            r: r_hat.clone(),
            k: 1,
        },
        TwoLenOneLenTrace {
            n_bar: n,
            m_bar: m,
            twins,
            r_hat,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn forced_rewrite() {
        let kl = KLenInstance {
            a: SparseIntMatrix::from_dense(&[vec![2]]),
            b: vec![int(2)],
            r: int(3),
            k: 2,
        };
        let (out, t) = twolen_to_onelen(&kl).unwrap();
        assert_eq!(out.a.to_dense_i64().unwrap(), vec![vec![1, 1], vec![1, -1]]);
        assert_eq!(out.b, vec![int(2), int(0)]);
        assert_eq!(out.r, int(6));
        assert_eq!(t.twins, vec![0]);
    }

    #[test]
    fn copy_without_twos() {
        let kl = KLenInstance {
            a: SparseIntMatrix::from_dense(&[vec![1, -1]]),
            b: vec![int(0)],
            r: int(4),
            k: 2,
        };
        let (out, _) = twolen_to_onelen(&kl).unwrap();
        assert_eq!(out.a, kl.a);
        assert_eq!(out.r, int(8));
    }
}
