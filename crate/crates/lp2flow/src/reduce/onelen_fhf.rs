use num_traits::{Signed, Zero};

use super::{OneLenFhfTrace, RowGadget};
use crate::arith::{at_least_one, Int};
use crate::error::{Error, Result};
use crate::model::{len_x, FhfInstance, FlowGraph, KLenInstance};

/// One vertex pair per equation; each +-1 coefficient becomes an edge from s,
/// each variable's edges form a homologous set.
pub fn onelen_to_fhf(kl: &KLenInstance) -> Result<(FhfInstance, OneLenFhfTrace)> {
    let (m, n) = (kl.a.rows(), kl.a.cols());
    for (i, j, v) in kl.a.entries() {
        if v.abs() > Int::from(1) {
            return Err(Error::invalid(format!("entry ({i}, {j}) = {v} is outside [-1, 1]")));
        }
    }
    let mut kept = Vec::with_capacity(m);
    for i in 0..m {
        if kl.a.row(i).is_empty() {
            if !kl.b[i].is_zero() {
                return Err(Error::TriviallyInfeasible {
                    row: i,
                    rhs: kl.b[i].to_string(),
                });
            }
        } else {
            kept.push(i);
        }
    }
    let edges = kl.a.nnz() + 3 * kept.len();
    let mut g = FlowGraph::with_capacity(2 + 2 * kept.len(), edges);
    let r = &kl.r;
    let mut var_edges: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut rows = Vec::with_capacity(kept.len());
    let mut fixed = Vec::new();
    let mut homologous = Vec::new();
    for (k, &i) in kept.iter().enumerate() {
        let flipped = kl.b[i].is_negative();
        let j_plus = 2 + 2 * k;
        let j_minus = j_plus + 1;
        for (_, j, v) in kl.a.row(i) {
            let positive = v.is_positive() != flipped;
            let head = if positive { j_plus } else { j_minus };
            let e = g.add_edge(0, head, r);
            var_edges[*j as usize].push(e as u32);
        }
        let rhs = kl.b[i].abs();
        let fixed_edge = if rhs.is_zero() {
            None
        } else {
            let e = g.add_edge(j_plus, 1, &rhs) as u32;
            fixed.push(e);
            Some(e)
        };
        let e_plus = g.add_edge(j_plus, 1, r) as u32;
        let e_minus = g.add_edge(j_minus, 1, r) as u32;
        homologous.push(vec![e_plus, e_minus]);
        rows.push(RowGadget {
            row: i as u32,
            flipped,
            j_plus: j_plus as u32,
            j_minus: j_minus as u32,
            fixed: fixed_edge,
            e_plus,
            e_minus,
        });
    }
    for set in &var_edges {
        if set.len() >= 2 {
            homologous.push(set.clone());
        }
    }
    let x = at_least_one(&len_x(&kl.a, &kl.b));
    let fhf = FhfInstance::new(g, fixed, homologous, 0, 1);
    Ok((
        fhf,
        OneLenFhfTrace {
            n_hat: n,
            m_hat: m,
            r_hat: r.clone(),
            x,
            rows,
            var_edges,
        },
    ))
}
