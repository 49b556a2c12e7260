use super::{FphfSffTrace, NONE};
use crate::error::{Error, Result};
use crate::model::{membership, FlowGraph, FphfInstance, SffInstance, Terminals};

/// Replaces every pair {e = (v, w), ê = (y, z)} by a nine-edge gadget in which
/// a second commodity crossing two fixed edges forces equal first-commodity flow.
pub fn fphf_to_sff(p: &FphfInstance) -> Result<(SffInstance, FphfSffTrace)> {
    let g = &p.graph;
    let m = g.num_edges();
    let mut paired = vec![false; m];
    for q in &p.pairs {
        if g.capacity(q[0] as usize) != g.capacity(q[1] as usize) {
            return Err(Error::invalid(format!(
                "paired edges {} and {} have different capacities",
                q[0], q[1]
            )));
        }
        paired[q[0] as usize] = true;
        paired[q[1] as usize] = true;
    }
    let nv = g.num_vertices();
    let np = p.pairs.len();
    let mut out = FlowGraph::with_capacity(nv, m + 7 * np);
    let s2 = out.add_vertex();
    let t2 = out.add_vertex();
    let fixed_in = membership(m, &p.fixed);
    let mut copy = vec![NONE; m];
    let mut fixed = Vec::new();
    let mut sel1 = Vec::new();
    let mut sel2 = Vec::new();
    for e in 0..m {
        if !paired[e] {
            let (v, w, u) = g.edge(e);
            let id = out.add_edge(v, w, u) as u32;
            copy[e] = id;
            sel1.push(id);
            if fixed_in[e] {
                fixed.push(id);
            }
        }
    }
    let gadget_base = out.num_edges() as u32;
    for q in &p.pairs {
        let (v, w, u) = g.edge(q[0] as usize);
        let (y, z, _) = g.edge(q[1] as usize);
        let u = u.clone();
        let vw = out.add_vertices(4);
        let (vw2, yz, yz2) = (vw + 1, vw + 2, vw + 3);
        let base = out.num_edges() as u32;
        out.add_edge(v, vw, &u);
        out.add_edge(vw2, w, &u);
        out.add_edge(s2, vw, &u);
        out.add_edge(vw, vw2, &u);
        out.add_edge(vw2, yz, &u);
        out.add_edge(y, yz, &u);
        out.add_edge(yz2, z, &u);
        out.add_edge(yz, yz2, &u);
        out.add_edge(yz2, t2, &u);
        sel1.extend([base, base + 1, base + 5, base + 6]);
        sel2.extend([base + 2, base + 4, base + 8]);
        fixed.extend([base + 3, base + 7]);
    }
    let terminals = Terminals {
        s1: p.s,
        t1: p.t,
        s2,
        t2,
    };
    Ok((
        SffInstance::new(out, fixed, sel1, sel2, terminals),
        FphfSffTrace {
            num_vertices_p: nv,
            copy,
            gadget_base,
            pairs: p.pairs.clone(),
            s2: s2 as u32,
            t2: t2 as u32,
        },
    ))
}
