//! Forward construction of exact solutions along the reduction chain.

use num_traits::{Signed, Zero};

use crate::arith::{to_rat, Int, Rat};
use crate::error::{Error, Result};
use crate::model::{FlowGraph, Instance, Solution, SparseIntMatrix, Terminals, TwoCommodityFlow};
use crate::reduce::{Stage, Trace, NONE};
use crate::verify::check;

/// Builds the exact target solution of one stage from an exact source solution.
pub fn construct_witness(stage: Stage, inst: &Instance, sol: &Solution, trace: &Trace) -> Result<Solution> {
    if trace.stage() != stage {
        return Err(Error::KeyMismatch(format!(
            "trace of stage {} given for stage {}",
            trace.stage().name(),
            stage.name()
        )));
    }
    let rep = check(inst.class(), inst, sol, &Rat::zero())?;
    if !rep.is_exact() {
        return Err(Error::NotExact(format!(
            "largest error {} on the {} instance",
            rep.max(),
            inst.class().schema()
        )));
    }
    let out = match (trace, inst, sol) {
        (Trace::LpLen(_), Instance::Lp(lp), Solution::Vector(x)) => {
            let mut y = x.clone();
            for (i, v) in lp.a.mul_vec(x).into_iter().enumerate() {
                y.push(to_rat(&lp.b[i]) - v);
            }
            let cx: Rat = lp.c.iter().zip(x).map(|(c, v)| to_rat(c) * v).sum();
            y.push(cx - to_rat(&lp.k));
            Solution::Vector(y)
        }
        (Trace::LenTwoLen(t), Instance::Len(l), Solution::Vector(x)) => Solution::Vector(carries(t, &l.a, x)?),
        (Trace::LenTwoLen(t), Instance::KLen(l), Solution::Vector(x)) => Solution::Vector(carries(t, &l.a, x)?),
        (Trace::TwoLenOneLen(t), Instance::KLen(_), Solution::Vector(x)) => {
            let mut y = x.clone();
            y.extend(t.twins.iter().map(|&j| x[j as usize].clone()));
            Solution::Vector(y)
        }
        (Trace::OneLenFhf(t), Instance::KLen(l), Solution::Vector(x)) => {
            let mut f = Vec::with_capacity(l.a.nnz() + 3 * t.rows.len());
            for gadget in &t.rows {
                let i = gadget.row as usize;
                let mut minus = Rat::zero();
                for (_, j, v) in l.a.row(i) {
                    let xj = &x[*j as usize];
                    if v.is_positive() == gadget.flipped {
                        minus += xj;
                    }
                    f.push(xj.clone());
                }
                if gadget.fixed.is_some() {
                    f.push(to_rat(&l.b[i].abs()));
                }
                f.push(minus.clone());
                f.push(minus);
            }
            Solution::Flow(TwoCommodityFlow::single(f))
        }
        (Trace::FhfFphf(t), Instance::Fhf(_), Solution::Flow(fh)) => {
            let len = t.second.last().map_or(0, |&e| e as usize + 1);
            let mut f = vec![Rat::zero(); len];
            for (e, v) in fh.f1.iter().enumerate() {
                f[t.first[e] as usize] = v.clone();
                f[t.second[e] as usize] = v.clone();
            }
            Solution::Flow(TwoCommodityFlow::single(f))
        }
        (Trace::FphfSff(t), Instance::Fphf(p), Solution::Flow(fp)) => {
            let len = t.gadget_base as usize + 9 * t.pairs.len();
            let mut f1 = vec![Rat::zero(); len];
            let mut f2 = vec![Rat::zero(); len];
            for (e, &id) in t.copy.iter().enumerate() {
                if id != NONE {
                    f1[id as usize] = fp.f1[e].clone();
                }
            }
            for (k, q) in t.pairs.iter().enumerate() {
                let b = t.gadget(k) as usize;
                let u = to_rat(p.graph.capacity(q[0] as usize));
                let a = &fp.f1[q[0] as usize];
                let ah = &fp.f1[q[1] as usize];
                for j in [0, 1, 3] {
                    f1[b + j] = a.clone();
                }
                for j in [5, 6, 7] {
                    f1[b + j] = ah.clone();
                }
                let rest = &u - a;
                for j in [2, 3, 4, 7, 8] {
                    f2[b + j] = rest.clone();
                }
            }
            Solution::Flow(TwoCommodityFlow::pair(f1, f2))
        }
        (Trace::SffTwoCff(t), Instance::Sff(s), Solution::Flow(fs)) => {
            let mut f1 = Vec::new();
            let mut f2 = Vec::new();
            for e in 0..s.graph.num_edges() {
                let c = t.selective[e] as usize;
                if c == 0 {
                    f1.push(fs.f1[e].clone());
                    f2.push(fs.get(2, e).clone());
                    continue;
                }
                let u = to_rat(s.graph.capacity(e));
                let v = fs.get(c, e).clone();
                let mut own = vec![v.clone()];
                if !t.fixed[e] {
                    own.push(&u - &v);
                }
                own.extend([v, u.clone(), u]);
                let zeros = vec![Rat::zero(); own.len()];
                let (a, b) = if c == 1 { (own, zeros) } else { (zeros, own) };
                f1.extend(a);
                f2.extend(b);
            }
            Solution::Flow(TwoCommodityFlow::pair(f1, f2))
        }
        (Trace::TwoCffTwoCfr(t), Instance::TwoCff(cf), Solution::Flow(ff)) => Solution::Flow(requirement_witness(
            t.num_edges_f,
            &t.m_f,
            &cf.graph,
            &cf.terminals,
            ff,
        )?),
        (Trace::TwoCfrTwoCf(t), Instance::TwoCfr(r), Solution::Flow(fr)) => {
            let mut f = fr.clone();
            for i in 1..=2 {
                let s = r.terminals.source(i);
                let mut net = Rat::zero();
                for e in 0..t.num_edges_r {
                    if r.graph.tail(e) == s {
                        net += fr.get(i, e);
                    }
                    if r.graph.head(e) == s {
                        net -= fr.get(i, e);
                    }
                }
                let (own, other) = if i == 1 { (net, Rat::zero()) } else { (Rat::zero(), net) };
                f.f1.push(own);
                f.commodity_mut(2).push(other);
            }
            Solution::Flow(f)
        }
        _ => {
            return Err(Error::KeyMismatch(format!(
                "stage {} cannot take a {} instance",
                stage.name(),
                inst.class().schema()
            )))
        }
    };
    Ok(out)
}

fn carries(t: &crate::reduce::LenTwoLenTrace, a: &SparseIntMatrix, x: &[Rat]) -> Result<Vec<Rat>> {
    let mut y = x.to_vec();
    y.resize(t.n_tilde + 4 * t.num_carries(), Rat::zero());
    let delta = to_rat(&t.delta);
    for (q, eq) in t.equations.iter().enumerate() {
        let nq = eq.n_bits as usize;
        if nq == 0 {
            continue;
        }
        let mut bits = vec![Rat::zero(); nq + 1];
        for (_, j, v) in a.row(q) {
            let mag = v.magnitude();
            for l in 0..mag.bits() {
                if mag.bit(l) {
                    if v.is_negative() {
                        bits[l as usize] -= &x[*j as usize];
                    } else {
                        bits[l as usize] += &x[*j as usize];
                    }
                }
            }
        }
        let mut rhs = vec![Rat::zero(); nq + 1];
        for &l in &eq.rhs_bits {
            rhs[l as usize] = Rat::from_integer(Int::from(eq.rhs_sign));
        }
        // d holds c(l) - d(l) for the carry below the current bit.
        let mut d = &rhs[nq] - &bits[nq];
        for l in (0..nq).rev() {
            let base = eq.first_carry as usize + 4 * l;
            let (c, dd) = if d.is_negative() {
                (Rat::zero(), -d.clone())
            } else {
                (d.clone(), Rat::zero())
            };
            if c > delta || dd > delta {
                return Err(Error::Range(format!(
                    "carry {} of equation {q} exceeds the bound {delta}",
                    l
                )));
            }
            y[base + 2] = &delta - &c;
            y[base + 3] = &delta - &dd;
            y[base] = c;
            y[base + 1] = dd;
            if l > 0 {
                d = &rhs[l] - &bits[l] + Rat::from_integer(Int::from(2)) * &d;
            }
        }
    }
    Ok(y)
}

fn requirement_witness(
    m: usize,
    m_f: &Int,
    g: &FlowGraph,
    terminals: &Terminals,
    ff: &TwoCommodityFlow,
) -> Result<TwoCommodityFlow> {
    let len = 7 * m + 10;
    let mut out = TwoCommodityFlow::zero(len, 2);
    let mf = to_rat(m_f);
    for e in 0..m {
        let u = to_rat(g.capacity(e));
        for i in 1..=2 {
            let v = ff.get(i, e).clone();
            let f = out.commodity_mut(i);
            f[7 * e] = v.clone();
            f[7 * e + 1] = &u - &v;
            f[7 * e + 2] = v;
        }
        out.f1[7 * e + 3] = u.clone();
        out.f1[7 * e + 5] = u.clone();
        out.commodity_mut(2)[7 * e + 4] = u.clone();
        out.commodity_mut(2)[7 * e + 6] = u;
    }
    for i in 1..=2 {
        let s = terminals.source(i);
        let mut net = Rat::zero();
        for e in 0..m {
            if g.tail(e) == s {
                net += ff.get(i, e);
            }
            if g.head(e) == s {
                net -= ff.get(i, e);
            }
        }
        if net.is_negative() {
            return Err(Error::NotExact(format!(
                "commodity {i} has negative net outflow {net} at its source"
            )));
        }
        let b = 7 * m + 5 * (i - 1);
        let f = out.commodity_mut(i);
        f[b] = net.clone();
        f[b + 1] = mf.clone();
        f[b + 2] = mf.clone();
        f[b + 3] = net.clone();
        f[b + 4] = &mf - &net;
    }
    Ok(out)
}

/// Composes the stage witnesses; `instances[k]` is the source instance of stage k.
pub fn witness_chain(instances: &[Instance], traces: &[Trace], x: &[Rat]) -> Result<TwoCommodityFlow> {
    if instances.len() != traces.len() {
        return Err(Error::KeyMismatch("one source instance per trace is required".into()));
    }
    let mut sol = Solution::Vector(x.to_vec());
    for (inst, trace) in instances.iter().zip(traces) {
        sol = construct_witness(trace.stage(), inst, &sol, trace)?;
    }
    match sol {
        Solution::Flow(f) => Ok(f),
        Solution::Vector(_) => Err(Error::KeyMismatch("chain does not end in a flow class".into())),
    }
}
