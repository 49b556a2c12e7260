//! Achieved errors of a solution under each class's approximation notions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{common_denominator, over, scaled_numer, to_rat, Int, Rat};
use crate::error::{Error, Result};
use crate::model::{check_vector, Class, FlowGraph, Instance, Solution, Terminals, TwoCommodityFlow};

/// Error notions of the approximate problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Notion {
    CongestionUpper,
    CongestionLower,
    Demand,
    Type,
    Homology,
    Requirement,
    Objective,
    Constraint,
}

impl Notion {
    pub const ALL: [Notion; 8] = [
        Notion::CongestionUpper,
        Notion::CongestionLower,
        Notion::Demand,
        Notion::Type,
        Notion::Homology,
        Notion::Requirement,
        Notion::Objective,
        Notion::Constraint,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Notion::CongestionUpper => "congestion_upper",
            Notion::CongestionLower => "congestion_lower",
            Notion::Demand => "demand",
            Notion::Type => "type",
            Notion::Homology => "homology",
            Notion::Requirement => "requirement",
            Notion::Objective => "objective",
            Notion::Constraint => "constraint",
        }
    }

    pub fn parse(s: &str) -> Option<Notion> {
        Notion::ALL.into_iter().find(|n| n.name() == s)
    }

    /// Notions checked for a class.
    pub fn of(class: Class) -> &'static [Notion] {
        use Notion::*;
        match class {
            Class::Lp => &[Objective, Constraint],
            Class::Len | Class::KLen => &[Constraint],
            Class::Fhf | Class::Fphf => &[CongestionUpper, CongestionLower, Demand, Homology],
            Class::Sff => &[CongestionUpper, CongestionLower, Demand, Type],
            Class::TwoCff => &[CongestionUpper, CongestionLower, Demand],
            Class::TwoCfr | Class::TwoCf => &[CongestionUpper, Demand, Requirement],
        }
    }
}

/// Worst violation of one notion and where it occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    pub value: Rat,
    pub location: Option<String>,
}

impl Measure {
    fn zero() -> Self {
        Measure {
            value: Rat::zero(),
            location: None,
        }
    }

    fn offer(&mut self, value: Rat, location: impl FnOnce() -> String) {
        if value > self.value {
            self.value = value;
            self.location = Some(location());
        }
    }
}

/// Achieved errors of one solution, per notion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorReport {
    pub class: Class,
    pub eps: Rat,
    pub measures: BTreeMap<Notion, Measure>,
    /// Flow leaving each source and entering each sink, per commodity.
    pub flow_values: Vec<(Rat, Rat)>,
    pub flags: Vec<String>,
}

impl ErrorReport {
    fn new(class: Class, eps: &Rat) -> Self {
        let mut flags = Vec::new();
        if eps > &Rat::one() {
            flags.push(format!("eps = {eps} exceeds 1, outside the definitions' range"));
        }
        ErrorReport {
            class,
            eps: eps.clone(),
            measures: Notion::of(class).iter().map(|&n| (n, Measure::zero())).collect(),
            flow_values: Vec::new(),
            flags,
        }
    }

    fn at(&mut self, n: Notion) -> &mut Measure {
        self.measures.get_mut(&n).expect("notion of this class")
    }

    pub fn get(&self, n: Notion) -> Option<&Rat> {
        self.measures.get(&n).map(|m| &m.value)
    }

    /// Largest achieved error over all notions.
    pub fn max(&self) -> Rat {
        self.measures
            .values()
            .map(|m| m.value.clone())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    pub fn passes(&self, eps: &Rat) -> bool {
        self.measures.values().all(|m| &m.value <= eps)
    }

    pub fn pass(&self) -> bool {
        self.passes(&self.eps)
    }

    pub fn is_exact(&self) -> bool {
        self.measures.values().all(|m| m.value.is_zero())
    }
}

impl fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} at eps = {}: {}",
            self.class.schema(),
            self.eps,
            if self.pass() { "pass" } else { "fail" }
        )?;
        for (n, m) in &self.measures {
            match &m.location {
                Some(l) => writeln!(f, "  {:<17} {} at {}", n.name(), m.value, l)?,
                None => writeln!(f, "  {:<17} {}", n.name(), m.value)?,
            }
        }
        for (i, (out, inn)) in self.flow_values.iter().enumerate() {
            writeln!(f, "  flow {}: out {} in {}", i + 1, out, inn)?;
        }
        for flag in &self.flags {
            writeln!(f, "  flag: {flag}")?;
        }
        Ok(())
    }
}

/// Gross flow leaving the source and entering the sink of a commodity.
pub fn flow_value(g: &FlowGraph, flow: &[Rat], source: usize, sink: usize) -> (Rat, Rat) {
    let out = (0..flow.len()).filter(|&e| g.tail(e) == source);
    let inn = (0..flow.len()).filter(|&e| g.head(e) == sink);
    (exact_sum(flow, out), exact_sum(flow, inn))
}

fn exact_sum(flow: &[Rat], edges: impl Iterator<Item = usize> + Clone) -> Rat {
    let l = common_denominator(edges.clone().map(|e| &flow[e]));
    let total = edges.fold(Int::zero(), |acc, e| acc + scaled_numer(&flow[e], &l));
    over(total, &l)
}

/// Evaluates every inequality of the class's approximate definition exactly.
pub fn check(class: Class, inst: &Instance, sol: &Solution, eps: &Rat) -> Result<ErrorReport> {
    if eps.is_negative() {
        return Err(Error::Range("eps must be nonnegative".into()));
    }
    let compatible = class == inst.class() || (class == Class::Len && inst.class() == Class::KLen);
    if !compatible {
        return Err(Error::KeyMismatch(format!(
            "class {} does not match a {} instance",
            class.schema(),
            inst.class().schema()
        )));
    }
    let mut rep = ErrorReport::new(class, eps);
    match (inst, sol) {
        (Instance::Lp(lp), Solution::Vector(x)) => {
            check_vector(x, lp.a.cols())?;
            let cx: Rat = lp.c.iter().zip(x).map(|(c, v)| to_rat(c) * v).sum();
            rep.at(Notion::Objective)
                .offer(to_rat(&lp.k) - cx, || "objective".into());
            for (i, v) in lp.a.mul_vec(x).into_iter().enumerate() {
                rep.at(Notion::Constraint)
                    .offer(v - to_rat(&lp.b[i]), || format!("row {i}"));
            }
        }
        (Instance::Len(l), Solution::Vector(x)) => equations(&mut rep, &l.a, &l.b, x)?,
        (Instance::KLen(l), Solution::Vector(x)) => equations(&mut rep, &l.a, &l.b, x)?,
        (Instance::Fhf(h), Solution::Flow(f)) => {
            f.check_shape(h.graph.num_edges(), 1)?;
            f.check_nonnegative()?;
            congestion(&mut rep, &h.graph, f, Some(&h.fixed));
            single_demand(&mut rep, &h.graph, &f.f1, h.s, h.t);
            for (k, set) in h.homologous.iter().enumerate() {
                homology(&mut rep, &f.f1, set, k);
            }
        }
        (Instance::Fphf(p), Solution::Flow(f)) => {
            f.check_shape(p.graph.num_edges(), 1)?;
            f.check_nonnegative()?;
            congestion(&mut rep, &p.graph, f, Some(&p.fixed));
            single_demand(&mut rep, &p.graph, &f.f1, p.s, p.t);
            for (k, q) in p.pairs.iter().enumerate() {
                homology(&mut rep, &f.f1, q, k);
            }
        }
        (Instance::Sff(s), Solution::Flow(f)) => {
            f.check_shape(s.graph.num_edges(), 2)?;
            f.check_nonnegative()?;
            congestion(&mut rep, &s.graph, f, Some(&s.fixed));
            two_demand(&mut rep, &s.graph, f, &s.terminals);
            for (c, set) in [(1, &s.sel1), (2, &s.sel2)] {
                let other = 3 - c;
                for &e in set.iter() {
                    let v = f.get(other, e as usize).clone();
                    rep.at(Notion::Type).offer(v, || format!("edge {e} commodity {other}"));
                }
            }
        }
        (Instance::TwoCff(c), Solution::Flow(f)) => {
            f.check_shape(c.graph.num_edges(), 2)?;
            f.check_nonnegative()?;
            congestion(&mut rep, &c.graph, f, Some(&c.fixed));
            two_demand(&mut rep, &c.graph, f, &c.terminals);
        }
        (Instance::TwoCfr(r), Solution::Flow(f)) => {
            f.check_shape(r.graph.num_edges(), 2)?;
            f.check_nonnegative()?;
            congestion(&mut rep, &r.graph, f, None);
            two_demand(&mut rep, &r.graph, f, &r.terminals);
            for (i, req) in [(1usize, &r.r1), (2, &r.r2)] {
                let (out, inn) = &rep.flow_values[i - 1];
                let req = to_rat(req);
                let a = (out - &req).abs();
                let b = (inn - &req).abs();
                rep.at(Notion::Requirement)
                    .offer(a, || format!("source of commodity {i}"));
                rep.at(Notion::Requirement)
                    .offer(b, || format!("sink of commodity {i}"));
            }
        }
        (Instance::TwoCf(c), Solution::Flow(f)) => {
            f.check_shape(c.graph.num_edges(), 2)?;
            f.check_nonnegative()?;
            congestion(&mut rep, &c.graph, f, None);
            two_demand(&mut rep, &c.graph, f, &c.terminals);
            let (err, f1) = split_requirement(&rep.flow_values, &to_rat(&c.r));
            let f2 = to_rat(&c.r) - &f1;
            rep.at(Notion::Requirement)
                .offer(err, || format!("F1 = {f1}, F2 = {f2}"));
        }
        _ => {
            return Err(Error::KeyMismatch(format!(
                "solution kind does not match a {} instance",
                inst.class().schema()
            )))
        }
    }
    Ok(rep)
}

/// Best split F1 + F2 = R with F1 in [0, R] of the requirement error, and its F1.
pub fn split_requirement(values: &[(Rat, Rat)], r: &Rat) -> (Rat, Rat) {
    let a = [
        values[0].0.clone(),
        values[0].1.clone(),
        r - &values[1].0,
        r - &values[1].1,
    ];
    let hi = a.iter().max().unwrap().clone();
    let lo = a.iter().min().unwrap().clone();
    let mut f1 = (&hi + &lo) / Rat::from_integer(2.into());
    if f1.is_negative() {
        f1 = Rat::zero();
    }
    if &f1 > r {
        f1 = r.clone();
    }
    let err = std::cmp::max(&hi - &f1, &f1 - &lo);
    (err, f1)
}

fn equations(
    rep: &mut ErrorReport,
    a: &crate::model::SparseIntMatrix,
    b: &[crate::arith::Int],
    x: &[Rat],
) -> Result<()> {
    check_vector(x, a.cols())?;
    for (i, v) in a.mul_vec(x).into_iter().enumerate() {
        rep.at(Notion::Constraint)
            .offer((v - to_rat(&b[i])).abs(), || format!("row {i}"));
    }
    Ok(())
}

/// The first position of the largest positive value, if any.
fn largest(vals: impl Iterator<Item = (usize, Int)>) -> Option<(usize, Int)> {
    vals.fold(None, |best, (k, v)| match best {
        Some((_, ref b)) if &v <= b => best,
        _ if v.is_positive() => Some((k, v)),
        _ => best,
    })
}

fn congestion(rep: &mut ErrorReport, g: &FlowGraph, f: &TwoCommodityFlow, fixed: Option<&[u32]>) {
    let l = match &f.f2 {
        Some(f2) => common_denominator(f.f1.iter().chain(f2.iter())),
        None => common_denominator(f.f1.iter()),
    };
    let total = |e: usize| -> Int {
        let mut t = scaled_numer(&f.f1[e], &l);
        if let Some(f2) = &f.f2 {
            t += scaled_numer(&f2[e], &l);
        }
        t
    };
    let excess = (0..g.num_edges()).map(|e| (e, total(e) - g.capacity(e) * &l));
    if let Some((e, n)) = largest(excess) {
        rep.at(Notion::CongestionUpper)
            .offer(over(n, &l), || format!("edge {e}"));
    }
    if let Some(fixed) = fixed {
        let short = fixed
            .iter()
            .map(|&e| (e as usize, g.capacity(e as usize) * &l - total(e as usize)));
        if let Some((e, n)) = largest(short) {
            rep.at(Notion::CongestionLower)
                .offer(over(n, &l), || format!("edge {e}"));
        }
    }
}

/// Net inflow per vertex as numerators over a common denominator.
fn imbalance(g: &FlowGraph, f: &[Rat]) -> (Vec<Int>, Int) {
    let l = common_denominator(f.iter());
    let mut net = vec![Int::zero(); g.num_vertices()];
    for (e, v) in f.iter().enumerate() {
        if !v.is_zero() {
            let n = scaled_numer(v, &l);
            net[g.head(e)] += &n;
            net[g.tail(e)] -= n;
        }
    }
    (net, l)
}

/// Offers the largest |imbalance| over vertices other than `s` and `t`.
fn offer_demand(rep: &mut ErrorReport, g: &FlowGraph, f: &[Rat], s: usize, t: usize, commodity: Option<usize>) {
    let (net, l) = imbalance(g, f);
    let inner = net
        .into_iter()
        .enumerate()
        .filter(|&(v, _)| v != s && v != t)
        .map(|(v, n)| (v, n.abs()));
    if let Some((v, n)) = largest(inner) {
        rep.at(Notion::Demand).offer(over(n, &l), || match commodity {
            Some(c) => format!("vertex {v} commodity {c}"),
            None => format!("vertex {v}"),
        });
    }
}

fn single_demand(rep: &mut ErrorReport, g: &FlowGraph, f: &[Rat], s: usize, t: usize) {
    offer_demand(rep, g, f, s, t, None);
    rep.flow_values.push(flow_value(g, f, s, t));
}

fn two_demand(rep: &mut ErrorReport, g: &FlowGraph, f: &TwoCommodityFlow, t: &Terminals) {
    for c in 1..=2 {
        let (s, k) = (t.source(c), t.sink(c));
        offer_demand(rep, g, f.commodity(c), s, k, Some(c));
        rep.flow_values.push(flow_value(g, f.commodity(c), s, k));
    }
}

fn homology(rep: &mut ErrorReport, f: &[Rat], set: &[u32], k: usize) {
    let vals = set.iter().map(|&e| &f[e as usize]);
    let hi = vals.clone().max();
    let lo = vals.min();
    if let (Some(hi), Some(lo)) = (hi, lo) {
        rep.at(Notion::Homology)
            .offer(hi - lo, || format!("homologous set {k}"));
    }
}
