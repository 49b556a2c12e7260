use super::FhfFphfTrace;
use crate::error::Result;
use crate::model::{FhfInstance, FlowGraph, FphfInstance};

/// Splits the interior members of every homologous set e1..ek by a new vertex
/// and chains the set into the pairs (e1, e2'), (e2'', e3'), ..., (e(k-1)'', ek).
pub fn fhf_to_fphf(h: &FhfInstance) -> Result<(FphfInstance, FhfFphfTrace)> {
    let g = &h.graph;
    let m = g.num_edges();
    let mut split = vec![false; m];
    for set in &h.homologous {
        if set.len() > 2 {
            for &e in &set[1..set.len() - 1] {
                split[e as usize] = true;
            }
        }
    }
    let extra = split.iter().filter(|&&s| s).count();
    let mut out = FlowGraph::with_capacity(g.num_vertices(), m + extra);
    let mut first = Vec::with_capacity(m);
    let mut second = Vec::with_capacity(m);
    for e in 0..m {
        let (v, w, u) = g.edge(e);
        if split[e] {
            let z = out.add_vertex();
            first.push(out.add_edge(v, z, u) as u32);
            second.push(out.add_edge(z, w, u) as u32);
        } else {
            let id = out.add_edge(v, w, u) as u32;
            first.push(id);
            second.push(id);
        }
    }
    let mut pairs = Vec::new();
    for set in &h.homologous {
        for w in set.windows(2) {
            pairs.push([second[w[0] as usize], first[w[1] as usize]]);
        }
    }
    let fixed = h.fixed.iter().map(|&e| first[e as usize]).collect();
    Ok((
        FphfInstance::new(out, fixed, pairs, h.s, h.t),
        FhfFphfTrace {
            num_vertices_h: g.num_vertices(),
            first,
            second,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn set_of_three() {
        let mut g = FlowGraph::new(4);
        for w in 1..4 {
            g.add_edge(0, w, &int(2));
        }
        let h = FhfInstance::new(g, vec![], vec![vec![0, 1, 2]], 0, 3);
        let (p, t) = fhf_to_fphf(&h).unwrap();
        assert_eq!(p.graph.num_vertices(), 5);
        assert_eq!(p.graph.num_edges(), 4);
        assert_eq!(p.pairs, vec![[0, 1], [2, 3]]);
        assert_eq!(t.first, vec![0, 1, 3]);
        assert_eq!(t.second, vec![0, 2, 3]);
        assert_eq!(p.graph.edge(1), (0, 4, &int(2)));
        assert_eq!(p.graph.edge(2), (4, 2, &int(2)));
    }

    #[test]
    fn pair_unchanged() {
        let mut g = FlowGraph::new(2);
        g.add_edge(0, 1, &int(1));
        g.add_edge(0, 1, &int(1));
        let h = FhfInstance::new(g.clone(), vec![], vec![vec![0, 1]], 0, 1);
        let (p, _) = fhf_to_fphf(&h).unwrap();
        assert_eq!(p.graph, g);
        assert_eq!(p.pairs, vec![[0, 1]]);
    }
}
