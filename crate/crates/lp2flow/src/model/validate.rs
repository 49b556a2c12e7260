use num_traits::{One, Signed};

use super::*;

/// One violated structural condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: &'static str,
    pub detail: String,
}

impl Violation {
    fn new(kind: &'static str, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            detail: detail.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

/// Returns every violated invariant of the instance's definition.
pub fn validate(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    match inst {
        Instance::Lp(lp) => {
            let (m, n) = (lp.a.rows(), lp.a.cols());
            if lp.b.len() != m {
                out.push(Violation::new(
                    "dimension",
                    format!("b has {} entries, A has {m} rows", lp.b.len()),
                ));
            }
            if lp.c.len() != n {
                out.push(Violation::new(
                    "dimension",
                    format!("c has {} entries, A has {n} columns", lp.c.len()),
                ));
            }
            if m == 0 || n == 0 {
                out.push(Violation::new(
                    "dimension",
                    "A must have at least one row and one column",
                ));
            }
            if lp.a.nnz() < m.max(n) {
                out.push(Violation::new(
                    "sparsity",
                    format!("nnz(A) = {} < max(m, n) = {}", lp.a.nnz(), m.max(n)),
                ));
            }
            radius(&lp.r, &mut out);
        }
        Instance::Len(len) => {
            equations(&len.a, &len.b, &mut out);
            radius(&len.r, &mut out);
        }
        Instance::KLen(kl) => {
            equations(&kl.a, &kl.b, &mut out);
            radius(&kl.r, &mut out);
            if kl.k == 0 {
                out.push(Violation::new("coefficient bound", "k must be positive"));
            }
            let k = Int::from(kl.k);
            for (i, j, v) in kl.a.entries() {
                if v.abs() > k {
                    out.push(Violation::new(
                        "coefficient bound",
                        format!("entry ({i}, {j}) = {v} exceeds k = {}", kl.k),
                    ));
                }
            }
        }
        Instance::Fhf(h) => {
            graph(&h.graph, &mut out);
            vertex(&h.graph, "s", h.s, &mut out);
            vertex(&h.graph, "t", h.t, &mut out);
            if h.s == h.t {
                out.push(Violation::new("terminal", "s = t"));
            }
            let fixed = ids(&h.graph, "fixed", &h.fixed, &mut out);
            let mut seen = vec![false; h.graph.num_edges()];
            for (k, set) in h.homologous.iter().enumerate() {
                for &e in set {
                    let e = e as usize;
                    if e >= h.graph.num_edges() {
                        out.push(Violation::new(
                            "dangling id",
                            format!("homologous set {k} references edge {e}"),
                        ));
                        continue;
                    }
                    if fixed[e] {
                        out.push(Violation::new("fixed/homologous overlap", format!("edge {e} is fixed and in homologous set {k}; fixed and homologous edges must be disjoint")));
                    }
                    if seen[e] {
                        out.push(Violation::new(
                            "homologous overlap",
                            format!("edge {e} appears in two homologous sets"),
                        ));
                    }
                    seen[e] = true;
                }
            }
        }
        Instance::Fphf(p) => {
            let as_sets = FhfInstance {
                graph: p.graph.clone(),
                fixed: p.fixed.clone(),
                homologous: p.pairs.iter().map(|q| q.to_vec()).collect(),
                s: p.s,
                t: p.t,
            };
            out = validate(&Instance::Fhf(as_sets));
            for (k, q) in p.pairs.iter().enumerate() {
                if q[0] == q[1] {
                    out.push(Violation::new("pair size", format!("pair {k} repeats edge {}", q[0])));
                }
            }
        }
        Instance::Sff(s) => {
            graph(&s.graph, &mut out);
            terminals(&s.graph, &s.terminals, &mut out);
            ids(&s.graph, "fixed", &s.fixed, &mut out);
            let one = ids(&s.graph, "S1", &s.sel1, &mut out);
            ids(&s.graph, "S2", &s.sel2, &mut out);
            for &e in &s.sel2 {
                if (e as usize) < one.len() && one[e as usize] {
                    out.push(Violation::new(
                        "selective overlap",
                        format!("edge {e} is in both S1 and S2"),
                    ));
                }
            }
        }
        Instance::TwoCff(f) => {
            graph(&f.graph, &mut out);
            terminals(&f.graph, &f.terminals, &mut out);
            ids(&f.graph, "fixed", &f.fixed, &mut out);
        }
        Instance::TwoCfr(r) => {
            graph(&r.graph, &mut out);
            terminals(&r.graph, &r.terminals, &mut out);
            if r.r1.is_negative() || r.r2.is_negative() {
                out.push(Violation::new("requirement", "requirements must be nonnegative"));
            }
        }
        Instance::TwoCf(c) => {
            graph(&c.graph, &mut out);
            terminals(&c.graph, &c.terminals, &mut out);
            if c.r.is_negative() {
                out.push(Violation::new("requirement", "requirement must be nonnegative"));
            }
        }
    }
    out
}

fn radius(r: &Int, out: &mut Vec<Violation>) {
    if r < &Int::one() {
        out.push(Violation::new("radius", format!("R = {r} < 1")));
    }
}

fn equations(a: &SparseIntMatrix, b: &[Int], out: &mut Vec<Violation>) {
    if b.len() != a.rows() {
        out.push(Violation::new(
            "dimension",
            format!("b has {} entries, A has {} rows", b.len(), a.rows()),
        ));
    }
}

fn graph(g: &FlowGraph, out: &mut Vec<Violation>) {
    if let Some(e) = g.has_nonpositive_capacity() {
        out.push(Violation::new(
            "positivity",
            format!("edge {e} has capacity {}", g.capacity(e)),
        ));
    }
}

fn vertex(g: &FlowGraph, name: &str, v: usize, out: &mut Vec<Violation>) {
    if v >= g.num_vertices() {
        out.push(Violation::new("dangling id", format!("{name} = {v} is not a vertex")));
    }
}

fn terminals(g: &FlowGraph, t: &Terminals, out: &mut Vec<Violation>) {
    for (name, v) in [("s1", t.s1), ("t1", t.t1), ("s2", t.s2), ("t2", t.t2)] {
        vertex(g, name, v, out);
    }
    let all = [t.s1, t.t1, t.s2, t.t2];
    for i in 0..4 {
        for j in i + 1..4 {
            if all[i] == all[j] {
                out.push(Violation::new("terminal", "terminals must be distinct"));
                return;
            }
        }
    }
}

fn ids(g: &FlowGraph, name: &str, set: &[u32], out: &mut Vec<Violation>) -> Vec<bool> {
    let mut m = vec![false; g.num_edges()];
    for &e in set {
        let e = e as usize;
        if e >= g.num_edges() {
            out.push(Violation::new("dangling id", format!("{name} references edge {e}")));
        } else if m[e] {
            out.push(Violation::new("duplicate id", format!("{name} lists edge {e} twice")));
        } else {
            m[e] = true;
        }
    }
    m
}
