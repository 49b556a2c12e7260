use num_traits::{One, Signed, Zero};

use super::{binary_representation, BitEquation, LenTwoLenTrace};
use crate::arith::{at_least_one, floor_log2, Int};
use crate::error::Result;
use crate::model::{len_x, KLenInstance, LenInstance, SparseIntMatrix};

/// Splits every equation into one equation per bit, linked by carries
/// c(l) - d(l), and bounds every carry by Delta through a slack.
pub fn len_to_2len(len: &LenInstance) -> Result<(KLenInstance, LenTwoLenTrace)> {
    let (m, n) = (len.a.rows(), len.a.cols());
    let x = at_least_one(&len_x(&len.a, &len.b));
    let log_x = floor_log2(&x);
    let delta = Int::from(2u32) * &x * &len.r;
    let r_bar = Int::from(8u32) * Int::from(m) * &len.r * &x * Int::from(1 + log_x);

    let mut equations = Vec::with_capacity(m);
    let (mut row, mut carries) = (0u32, 0u32);
    for q in 0..m {
        let mut mq = len.b[q].abs();
        for (_, _, v) in len.a.row(q) {
            if v.magnitude() > mq.magnitude() {
                mq = v.abs();
            }
        }
        let n_bits = floor_log2(&mq) as u32;
        let (rhs_sign, rhs_bits) = binary_representation(&len.b[q]);
        equations.push(BitEquation {
            n_bits,
            first_row: row,
            first_carry: n as u32 + 4 * carries,
            first_carry_index: carries,
            rhs_sign,
            rhs_bits,
        });
        row += n_bits + 1;
        carries += n_bits;
    }
    let bound_rows = row;
    let rows = bound_rows as usize + 2 * carries as usize;
    let cols = n + 4 * carries as usize;

    let one = Int::one();
    let minus_one = -Int::one();
    let two = Int::from(2);
    let minus_two = -Int::from(2);
    let mut entries = Vec::new();
    let mut b = Vec::with_capacity(rows);
    for (q, eq) in equations.iter().enumerate() {
        let nq = eq.n_bits as usize;
        let mut buckets: Vec<Vec<(u32, bool)>> = vec![Vec::new(); nq + 1];
        for (_, j, v) in len.a.row(q) {
            let neg = v.is_negative();
            let mag = v.magnitude();
            for l in 0..mag.bits() {
                if mag.bit(l) {
                    buckets[l as usize].push((*j, neg));
                }
            }
        }
        let mut rhs = vec![Int::zero(); nq + 1];
        for &l in &eq.rhs_bits {
            rhs[l as usize] = Int::from(eq.rhs_sign);
        }
        for (l, bucket) in buckets.into_iter().enumerate() {
            let r = eq.first_row + l as u32;
            for (j, neg) in bucket {
                entries.push((r, j, if neg { minus_one.clone() } else { one.clone() }));
            }
            if l >= 1 {
                let c = eq.first_carry + 4 * (l as u32 - 1);
                entries.push((r, c, one.clone()));
                entries.push((r, c + 1, minus_one.clone()));
            }
            if l < nq {
                let c = eq.first_carry + 4 * l as u32;
                entries.push((r, c, minus_two.clone()));
                entries.push((r, c + 1, two.clone()));
            }
        }
        b.extend(rhs);
    }
    for eq in &equations {
        for l in 0..eq.n_bits {
            let g = eq.first_carry_index + l;
            let c = eq.first_carry + 4 * l;
            let r = bound_rows + 2 * g;
            entries.push((r, c, one.clone()));
            entries.push((r, c + 2, one.clone()));
            entries.push((r + 1, c + 1, one.clone()));
            entries.push((r + 1, c + 3, one.clone()));
            b.push(delta.clone());
            b.push(delta.clone());
        }
    }
    let a = SparseIntMatrix::from_sorted_unchecked(rows, cols, entries);
    Ok((
        KLenInstance {
            a,
            b,
            r: r_bar.clone(),
            k: 2,
        },
        LenTwoLenTrace {
            n_tilde: n,
            m_tilde: m,
            x,
            r_tilde: len.r.clone(),
            delta,
            r_bar,
            bound_rows,
            equations,
        },
    ))
}

/// Renders the bit equations and carry bounds in the notation
/// `x1 + x2 - x3 - 2(c0 - d0) = -1`, one row per line.
pub fn render_equations(out: &KLenInstance, t: &LenTwoLenTrace) -> String {
    let mut text = String::new();
    for eq in &t.equations {
        for l in 0..=eq.n_bits {
            let row = (eq.first_row + l) as usize;
            let mut terms: Vec<(bool, String)> = Vec::new();
            for (_, j, v) in out.a.row(row) {
                if (*j as usize) < t.n_tilde {
                    terms.push((v.is_negative(), format!("x{}", j + 1)));
                }
            }
            if l >= 1 {
                let g = eq.first_carry_index + l - 1;
                terms.push((false, format!("(c{g} - d{g})")));
            }
            if l < eq.n_bits {
                let g = eq.first_carry_index + l;
                terms.push((true, format!("2(c{g} - d{g})")));
            }
            push_row(&mut text, &terms, &out.b[row]);
        }
    }
    for g in 0..t.num_carries() {
        let row = t.bound_rows as usize + 2 * g;
        push_row(
            &mut text,
            &[(false, format!("c{g}")), (false, format!("sc{g}"))],
            &out.b[row],
        );
        push_row(
            &mut text,
            &[(false, format!("d{g}")), (false, format!("sd{g}"))],
            &out.b[row + 1],
        );
    }
    text
}

fn push_row(text: &mut String, terms: &[(bool, String)], rhs: &Int) {
    for (i, (neg, term)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, false) => {}
            (0, true) => text.push('-'),
            (_, false) => text.push_str(" + "),
            (_, true) => text.push_str(" - "),
        }
        text.push_str(term);
    }
    if terms.is_empty() {
        text.push('0');
    }
    text.push_str(&format!(" = {rhs}\n"));
}
