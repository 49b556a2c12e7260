//! Backward solution mapping and the error budget of the approximate chain.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{Int, Rat};
use crate::error::{Error, Result};
use crate::model::{FhfInstance, Instance, Solution, TwoCommodityFlow};
use crate::reduce::{Stage, Trace, TwoCffTwoCfrTrace, NONE};

/// Level names of the chain, from the LP to the 2CF instance.
pub const LEVELS: [&str; 10] = ["lp", "le", "2le", "1le", "h", "p", "s", "f", "r", "2cf"];

/// Chain factors read from the traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetFactors {
    /// max(1, X(A~, b~)).
    pub x_len: Int,
    pub n_bar: usize,
    pub n_hat: usize,
    /// max(1, X(A^, b^)).
    pub x_hat: Int,
    pub edges_h: usize,
    pub edges_p: usize,
    pub edges_s: usize,
    pub edges_f: usize,
}

impl BudgetFactors {
    pub fn from_traces(traces: &[Trace]) -> Result<Self> {
        let mut f = BudgetFactors {
            x_len: Int::one(),
            n_bar: 0,
            n_hat: 0,
            x_hat: Int::one(),
            edges_h: 0,
            edges_p: 0,
            edges_s: 0,
            edges_f: 0,
        };
        let mut seen = 0u16;
        for t in traces {
            seen |= 1 << t.stage().index();
            match t {
                Trace::LenTwoLen(t) => f.x_len = t.x.clone(),
                Trace::TwoLenOneLen(t) => f.n_bar = t.n_bar,
                Trace::OneLenFhf(t) => {
                    f.n_hat = t.n_hat;
                    f.x_hat = t.x.clone();
                }
                Trace::FhfFphf(t) => f.edges_h = t.num_edges_h(),
                Trace::FphfSff(t) => f.edges_p = t.num_edges_p(),
                Trace::SffTwoCff(t) => f.edges_s = t.num_edges_s(),
                Trace::TwoCffTwoCfr(t) => f.edges_f = t.num_edges_f,
                _ => {}
            }
        }
        if seen != (1 << 9) - 1 {
            return Err(Error::KeyMismatch(
                "the budget needs the traces of all nine stages".into(),
            ));
        }
        Ok(f)
    }
}

/// Target error of every level of the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorBudget {
    pub eps: [Rat; 10],
}

impl ErrorBudget {
    pub fn level(&self, name: &str) -> Option<&Rat> {
        LEVELS.iter().position(|l| *l == name).map(|i| &self.eps[i])
    }

    pub fn lp(&self) -> &Rat {
        &self.eps[0]
    }

    pub fn twocf(&self) -> &Rat {
        &self.eps[9]
    }

    /// Error of the source (k) and target (k + 1) of stage k.
    pub fn stage(&self, stage: Stage) -> (&Rat, &Rat) {
        let k = stage.index();
        (&self.eps[k], &self.eps[k + 1])
    }
}

impl fmt::Display for ErrorBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, e) in LEVELS.iter().zip(&self.eps) {
            writeln!(f, "eps_{name:<3} = {e}")?;
        }
        Ok(())
    }
}

fn r(v: usize) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// Divides eps_lp down the chain by the factor of each approximate stage.
pub fn error_budget(eps_lp: &Rat, f: &BudgetFactors) -> Result<ErrorBudget> {
    if eps_lp.is_negative() || eps_lp > &Rat::one() {
        return Err(Error::Range(format!("eps_lp = {eps_lp} is outside [0, 1]")));
    }
    let positive = |v: usize| r(v.max(1));
    let divisors = [
        Rat::one(),
        Rat::from_integer(Int::from(2) * &f.x_len),
        r(f.n_bar + 1),
        r(5) * positive(f.n_hat) * Rat::from_integer(f.x_hat.clone()),
        positive(f.edges_h),
        r(11) * positive(f.edges_p),
        r(6) * positive(f.edges_s),
        r(12) * positive(f.edges_f),
        r(4),
    ];
    let mut eps: [Rat; 10] = std::array::from_fn(|_| Rat::zero());
    eps[0] = eps_lp.clone();
    for (k, d) in divisors.iter().enumerate() {
        eps[k + 1] = &eps[k] / d;
    }
    Ok(ErrorBudget { eps })
}

/// Maps a target solution back to the source of one stage, using the trace only.
pub fn map_back_trace(trace: &Trace, sol: &Solution) -> Result<Solution> {
    let vector = |s: &Solution| -> Result<Vec<Rat>> {
        match s {
            Solution::Vector(x) => Ok(x.clone()),
            Solution::Flow(_) => Err(Error::KeyMismatch("expected a vector solution".into())),
        }
    };
    let flow = |s: &Solution| -> Result<TwoCommodityFlow> {
        match s {
            Solution::Flow(f) => Ok(f.clone()),
            Solution::Vector(_) => Err(Error::KeyMismatch("expected a flow solution".into())),
        }
    };
    let need = |have: usize, want: usize| -> Result<()> {
        if have < want {
            Err(Error::KeyMismatch(format!("expected {want} coordinates, found {have}")))
        } else {
            Ok(())
        }
    };
    Ok(match trace {
        Trace::LpLen(t) => {
            let y = vector(sol)?;
            need(y.len(), t.n + t.m + 1)?;
            Solution::Vector(y[..t.n].to_vec())
        }
        Trace::LenTwoLen(t) => {
            let y = vector(sol)?;
            need(y.len(), t.n_tilde + 4 * t.num_carries())?;
            Solution::Vector(y[..t.n_tilde].to_vec())
        }
        Trace::TwoLenOneLen(t) => {
            let y = vector(sol)?;
            need(y.len(), t.n_bar + t.twins.len())?;
            let mut x = y[..t.n_bar].to_vec();
            let half = Rat::new(Int::one(), Int::from(2));
            for (k, &j) in t.twins.iter().enumerate() {
                let j = j as usize;
                x[j] = (&y[j] + &y[t.n_bar + k]) * &half;
            }
            Solution::Vector(x)
        }
        Trace::OneLenFhf(t) => {
            let f = flow(sol)?;
            let max = t.var_edges.iter().flatten().max().map_or(0, |&e| e as usize + 1);
            need(f.len(), max)?;
            let x = t
                .var_edges
                .iter()
                .map(|edges| edges.first().map_or_else(Rat::zero, |&e| f.f1[e as usize].clone()))
                .collect();
            Solution::Vector(x)
        }
        Trace::FhfFphf(t) => {
            let f = flow(sol)?;
            let max = t.second.iter().max().map_or(0, |&e| e as usize + 1);
            need(f.len(), max)?;
            Solution::Flow(TwoCommodityFlow::single(
                t.first.iter().map(|&e| f.f1[e as usize].clone()).collect(),
            ))
        }
        Trace::FphfSff(t) => {
            let f = flow(sol)?;
            need(f.len(), t.gadget_base as usize + 9 * t.pairs.len())?;
            let mut out = vec![Rat::zero(); t.num_edges_p()];
            for (e, &id) in t.copy.iter().enumerate() {
                if id != NONE {
                    out[e] = f.f1[id as usize].clone();
                }
            }
            for (k, q) in t.pairs.iter().enumerate() {
                let b = t.gadget(k) as usize;
                out[q[0] as usize] = f.f1[b].clone();
                out[q[1] as usize] = f.f1[b + 5].clone();
            }
            Solution::Flow(TwoCommodityFlow::single(out))
        }
        Trace::SffTwoCff(t) => {
            let f = flow(sol)?;
            let max = t.base.iter().max().map_or(0, |&e| e as usize + 1);
            need(f.len(), max)?;
            let pick = |c: usize| t.base.iter().map(|&e| f.get(c, e as usize).clone()).collect();
            Solution::Flow(TwoCommodityFlow::pair(pick(1), pick(2)))
        }
        Trace::TwoCffTwoCfr(t) => {
            let f = flow(sol)?;
            need(f.len(), 7 * t.num_edges_f + 10)?;
            let pick = |c: usize| (0..t.num_edges_f).map(|e| f.get(c, 7 * e).clone()).collect();
            Solution::Flow(TwoCommodityFlow::pair(pick(1), pick(2)))
        }
        Trace::TwoCfrTwoCf(t) => {
            let f = flow(sol)?;
            need(f.len(), t.num_edges_r + 2)?;
            let pick = |c: usize| f.commodity(c)[..t.num_edges_r].to_vec();
            Solution::Flow(TwoCommodityFlow::pair(pick(1), pick(2)))
        }
    })
}

/// Maps a solution of the stage's target instance back to its source.
pub fn map_back(stage: Stage, target: &Instance, sol: &Solution, trace: &Trace) -> Result<Solution> {
    if trace.stage() != stage {
        return Err(Error::KeyMismatch(format!(
            "trace of stage {} given for stage {}",
            trace.stage().name(),
            stage.name()
        )));
    }
    if target.class() != stage.target() {
        return Err(Error::KeyMismatch(format!(
            "stage {} maps back from {}, got {}",
            stage.name(),
            stage.target().schema(),
            target.class().schema()
        )));
    }
    match (target, sol) {
        (Instance::Lp(_) | Instance::Len(_) | Instance::KLen(_), Solution::Vector(x)) => {
            crate::model::check_vector(x, target.num_vars().unwrap_or(0))?;
        }
        (_, Solution::Flow(f)) if target.class().is_flow() => {
            let g = target.graph().expect("flow instance");
            f.check_shape(g.num_edges(), target.class().commodities())?;
            f.check_nonnegative()?;
        }
        _ => return Err(Error::KeyMismatch("solution kind does not match the instance".into())),
    }
    map_back_trace(trace, sol)
}

/// Maps a 2CF flow back through all traces; returns x and every intermediate
/// solution, ordered from the 2CF level down to the LP level.
pub fn map_back_chain(sol: &TwoCommodityFlow, traces: &[Trace]) -> Result<(Vec<Rat>, Vec<Solution>)> {
    sol.check_nonnegative()?;
    let mut cur = Solution::Flow(sol.clone());
    let mut levels = vec![cur.clone()];
    for t in traces.iter().rev() {
        cur = map_back_trace(t, &cur)?;
        levels.push(cur.clone());
    }
    match cur {
        Solution::Vector(x) => Ok((x, levels)),
        Solution::Flow(_) => Err(Error::KeyMismatch("traces do not end at an algebraic class".into())),
    }
}

/// Sum over source edges of |f1(e4) - f1(e6)| for a flow of the 2CFR instance.
pub fn gadget_pair_sum(trace: &TwoCffTwoCfrTrace, f: &TwoCommodityFlow) -> Rat {
    (0..trace.num_edges_f)
        .map(|k| (f.get(1, trace.gadget(k, 4)) - f.get(1, trace.gadget(k, 6))).abs())
        .sum()
}

/// The bound 6 |E^f| eps_r of that sum.
pub fn gadget_pair_bound(trace: &TwoCffTwoCfrTrace, eps_r: &Rat) -> Rat {
    r(6 * trace.num_edges_f) * eps_r
}

/// Number of FHF edges that are in no homologous set; the SFFA error analysis
/// assumes at least one.
pub fn free_edge_count(h: &FhfInstance) -> usize {
    h.graph.num_edges() - h.homologous_edge_count()
}
