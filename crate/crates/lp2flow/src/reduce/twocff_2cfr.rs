use num_traits::Zero;

use super::TwoCffTwoCfrTrace;
use crate::arith::Int;
use crate::error::{Error, Result};
use crate::model::{membership, FlowGraph, Terminals, TwoCffInstance, TwoCfrInstance};

/// Replaces every edge by a seven-edge gadget hanging off new terminals
/// s̄_i, t̄_i, links t_i back to s_i through a five-edge terminal gadget,
/// and requires 2 M^f units per commodity.
pub fn twocff_to_2cfr(f: &TwoCffInstance) -> Result<(TwoCfrInstance, TwoCffTwoCfrTrace)> {
    let g = &f.graph;
    let m = g.num_edges();
    let m_f = g.total_capacity();
    if m_f.is_zero() {
        return Err(Error::invalid("instance has no edges"));
    }
    let fixed = membership(m, &f.fixed);
    let nv = g.num_vertices();
    let mut out = FlowGraph::with_capacity(nv + 2 * m, 7 * m + 10);
    let base = out.add_vertices(8);
    let nt: [u32; 8] = std::array::from_fn(|k| (base + k) as u32);
    let [sb1, tb1, sb2, tb2, ..] = nt.map(|v| v as usize);
    let two = Int::from(2);
    for e in 0..m {
        let (x, y, u) = g.edge(e);
        let xy = nv + 2 * e;
        let xy2 = xy + 1;
        let e2cap = if fixed[e] { u.clone() } else { &two * u };
        out.add_edge(x, xy, u);
        out.add_edge(xy2, xy, &e2cap);
        out.add_edge(xy2, y, u);
        out.add_edge(xy, tb1, u);
        out.add_edge(xy, tb2, u);
        out.add_edge(sb1, xy2, u);
        out.add_edge(sb2, xy2, u);
    }
    let t = &f.terminals;
    for i in 1..=2 {
        let (z, z2) = (nt[4 + 2 * (i - 1)] as usize, nt[5 + 2 * (i - 1)] as usize);
        let (sb, tb) = if i == 1 { (sb1, tb1) } else { (sb2, tb2) };
        out.add_edge(t.sink(i), z, &m_f);
        out.add_edge(z, tb, &m_f);
        out.add_edge(sb, z2, &m_f);
        out.add_edge(z2, t.source(i), &m_f);
        out.add_edge(z2, z, &m_f);
    }
    let r = &two * &m_f;
    Ok((
        TwoCfrInstance {
            graph: out,
            terminals: Terminals {
                s1: sb1,
                t1: tb1,
                s2: sb2,
                t2: tb2,
            },
            r1: r.clone(),
            r2: r,
        },
        TwoCffTwoCfrTrace {
            num_vertices_f: nv,
            num_edges_f: m,
            m_f,
            fixed,
            new_terminals: nt,
        },
    ))
}
