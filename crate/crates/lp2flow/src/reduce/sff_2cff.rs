use super::{SffTwoCffTrace, NONE};
use crate::error::Result;
use crate::model::{membership, FlowGraph, SffInstance, TwoCffInstance};

/// Replaces every edge e = (x, y) selective for commodity i by
/// e1 = (x, xy), e2 = (xy', xy), e3 = (xy', y), e4 = (xy, t_i), e5 = (s_i, xy'),
/// with e4, e5 fixed and e2 omitted when e is fixed.
pub fn sff_to_2cff(s: &SffInstance) -> Result<(TwoCffInstance, SffTwoCffTrace)> {
    let g = &s.graph;
    let m = g.num_edges();
    let selective = s.selectivity();
    let fixed_in = membership(m, &s.fixed);
    let nsel = selective.iter().filter(|&&c| c != 0).count();
    let mut out = FlowGraph::with_capacity(g.num_vertices(), m + 4 * nsel);
    let mut base = Vec::with_capacity(m);
    let mut vertex = Vec::with_capacity(m);
    let mut fixed = Vec::new();
    for e in 0..m {
        let (x, y, u) = g.edge(e);
        let c = selective[e] as usize;
        if c == 0 {
            let id = out.add_edge(x, y, u) as u32;
            if fixed_in[e] {
                fixed.push(id);
            }
            base.push(id);
            vertex.push(NONE);
            continue;
        }
        let u = u.clone();
        let xy = out.add_vertices(2);
        let xy2 = xy + 1;
        let e1 = out.add_edge(x, xy, &u) as u32;
        if !fixed_in[e] {
            out.add_edge(xy2, xy, &u);
        }
        let e3 = out.add_edge(xy2, y, &u) as u32;
        let e4 = out.add_edge(xy, s.terminals.sink(c), &u) as u32;
        let e5 = out.add_edge(s.terminals.source(c), xy2, &u) as u32;
        if fixed_in[e] {
            fixed.extend([e1, e3]);
        }
        fixed.extend([e4, e5]);
        base.push(e1);
        vertex.push(xy as u32);
    }
    Ok((
        TwoCffInstance::new(out, fixed, s.terminals),
        SffTwoCffTrace {
            num_vertices_s: g.num_vertices(),
            base,
            selective,
            fixed: fixed_in,
            vertex,
        },
    ))
}
