use num_traits::Zero;

use super::TwoCfrTwoCfTrace;
use crate::error::{Error, Result};
use crate::model::{Terminals, TwoCfInstance, TwoCfrInstance};

/// Adds super-sources feeding s_i through an edge of capacity R_i.
pub fn twocfr_to_2cf(r: &TwoCfrInstance) -> Result<(TwoCfInstance, TwoCfrTwoCfTrace)> {
    if r.r1.is_zero() || r.r2.is_zero() {
        return Err(Error::invalid("requirements must be positive to become capacities"));
    }
    let mut g = r.graph.clone();
    let nv = g.num_vertices();
    let ne = g.num_edges();
    let ss1 = g.add_vertex();
    let ss2 = g.add_vertex();
    g.add_edge(ss1, r.terminals.s1, &r.r1);
    g.add_edge(ss2, r.terminals.s2, &r.r2);
    Ok((
        TwoCfInstance {
            graph: g,
            terminals: Terminals {
                s1: ss1,
                t1: r.terminals.t1,
                s2: ss2,
                t2: r.terminals.t2,
            },
            r: &r.r1 + &r.r2,
        },
        TwoCfrTwoCfTrace {
            num_vertices_r: nv,
            num_edges_r: ne,
            r1: r.r1.clone(),
            r2: r.r2.clone(),
        },
    ))
}
