//! End-to-end compilation, recovery and size auditing.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use crate::arith::{at_least_one, floor_log2, to_rat, Int, Rat};
use crate::error::{Error, Result};
use crate::mapback::{error_budget, map_back_chain, BudgetFactors, ErrorBudget, LEVELS};
use crate::model::{len_x, lp_x, validate, Class, Instance, LpInstance, Solution, TwoCfInstance, TwoCommodityFlow};
use crate::reduce::{reduce, Stage, Trace};
use crate::verify::{check, ErrorReport};

/// Size statistics of one instance.
pub type Stats = BTreeMap<&'static str, Int>;

/// Every statistic name `instance_stats` may record.
pub const STAT_KEYS: &[&str] = &[
    "n",
    "m",
    "nnz",
    "x",
    "r",
    "k",
    "vertices",
    "edges",
    "max_cap",
    "fixed",
    "sets",
    "set_edges",
    "sel1",
    "sel2",
    "fixed_selective",
    "total_cap",
    "r1",
    "r2",
];

pub fn instance_stats(inst: &Instance) -> Stats {
    let mut s = Stats::new();
    let n = |v: usize| Int::from(v);
    match inst {
        Instance::Lp(lp) => {
            s.insert("n", n(lp.a.cols()));
            s.insert("m", n(lp.a.rows()));
            s.insert("nnz", n(lp.a.nnz()));
            s.insert("x", lp_x(lp));
            s.insert("r", lp.r.clone());
        }
        Instance::Len(l) => {
            s.insert("n", n(l.a.cols()));
            s.insert("m", n(l.a.rows()));
            s.insert("nnz", n(l.a.nnz()));
            s.insert("x", len_x(&l.a, &l.b));
            s.insert("r", l.r.clone());
        }
        Instance::KLen(l) => {
            s.insert("n", n(l.a.cols()));
            s.insert("m", n(l.a.rows()));
            s.insert("nnz", n(l.a.nnz()));
            s.insert("x", len_x(&l.a, &l.b));
            s.insert("r", l.r.clone());
            s.insert("k", n(l.k as usize));
        }
        _ => {
            let g = inst.graph().expect("flow instance");
            s.insert("vertices", n(g.num_vertices()));
            s.insert("edges", n(g.num_edges()));
            s.insert("max_cap", g.max_capacity());
            match inst {
                Instance::Fhf(h) => {
                    s.insert("fixed", n(h.fixed.len()));
                    s.insert("sets", n(h.homologous.len()));
                    s.insert("set_edges", n(h.homologous_edge_count()));
                }
                Instance::Fphf(p) => {
                    s.insert("fixed", n(p.fixed.len()));
                    s.insert("sets", n(p.pairs.len()));
                    s.insert("set_edges", n(2 * p.pairs.len()));
                }
                Instance::Sff(x) => {
                    s.insert("fixed", n(x.fixed.len()));
                    s.insert("sel1", n(x.sel1.len()));
                    s.insert("sel2", n(x.sel2.len()));
                    let fixed = crate::model::membership(g.num_edges(), &x.fixed);
                    let fs = x.sel1.iter().chain(&x.sel2).filter(|&&e| fixed[e as usize]).count();
                    s.insert("fixed_selective", n(fs));
                }
                Instance::TwoCff(x) => {
                    s.insert("fixed", n(x.fixed.len()));
                    s.insert("total_cap", g.total_capacity());
                }
                Instance::TwoCfr(x) => {
                    s.insert("r1", x.r1.clone());
                    s.insert("r2", x.r2.clone());
                }
                Instance::TwoCf(x) => {
                    s.insert("r", x.r.clone());
                }
                _ => {}
            }
        }
    }
    s
}

/// One checked size relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Audit {
    pub name: String,
    /// "=" or "<=".
    pub relation: &'static str,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl Audit {
    pub fn holds(&self) -> bool {
        match self.relation {
            "=" => self.lhs == self.rhs,
            _ => self.lhs <= self.rhs,
        }
    }
}

impl fmt::Display for Audit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} {} {}",
            if self.holds() { "ok" } else { "FAIL" },
            self.name,
            self.lhs,
            self.relation,
            self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompileReport {
    /// Statistics of the ten levels, from the LP to the 2CF instance.
    pub levels: Vec<(&'static str, Class, Stats)>,
    pub budget: ErrorBudget,
    pub audits: Vec<Audit>,
    pub flags: Vec<String>,
}

impl CompileReport {
    pub fn all_audits_hold(&self) -> bool {
        self.audits.iter().all(|a| a.holds())
    }

    pub fn failed_audits(&self) -> Vec<&Audit> {
        self.audits.iter().filter(|a| !a.holds()).collect()
    }
}

impl fmt::Display for CompileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, class, stats) in &self.levels {
            write!(f, "{name:<3} {:<4}", class.schema())?;
            for (k, v) in stats {
                write!(f, " {k}={v}")?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", self.budget)?;
        for a in &self.audits {
            writeln!(f, "{a}")?;
        }
        for flag in &self.flags {
            writeln!(f, "flag: {flag}")?;
        }
        Ok(())
    }
}

/// Result of compiling an LP.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub instance: TwoCfInstance,
    pub traces: Vec<Trace>,
    pub budget: ErrorBudget,
    pub report: CompileReport,
    /// Source instance of every stage (the LP first), when retained.
    pub sources: Vec<Instance>,
    /// Wall time of every stage.
    pub timings: Vec<(Stage, Duration)>,
}

impl Compiled {
    pub fn total_time(&self) -> Duration {
        self.timings.iter().map(|t| t.1).sum()
    }
}

/// Runs all nine stages and audits every size relation.
pub fn compile(lp: &LpInstance, eps_lp: &Rat) -> Result<Compiled> {
    compile_with(lp, eps_lp, true)
}

/// As `compile`; with `keep_sources = false` intermediate instances are dropped as soon as possible.
pub fn compile_with(lp: &LpInstance, eps_lp: &Rat, keep_sources: bool) -> Result<Compiled> {
    let violations = validate(&Instance::Lp(lp.clone()));
    if let Some(v) = violations.first() {
        return Err(Error::invalid(v.to_string()));
    }
    if eps_lp < &Rat::zero() || eps_lp > &Rat::one() {
        return Err(Error::Range(format!("eps_lp = {eps_lp} is outside [0, 1]")));
    }
    let mut cur = Instance::Lp(lp.clone());
    let mut traces = Vec::with_capacity(9);
    let mut levels = vec![(LEVELS[0], Class::Lp, instance_stats(&cur))];
    let mut sources = Vec::new();
    let mut timings = Vec::new();
    let mut flags = Vec::new();
    for stage in Stage::ALL {
        let start = Instant::now();
        let (next, trace) = reduce(stage, &cur)?;
        timings.push((stage, start.elapsed()));
        if let Instance::Fhf(h) = &next {
            if crate::mapback::free_edge_count(h) == 0 {
                flags.push("every FHF edge is homologous; the SFFA error analysis assumes a free edge".into());
            }
        }
        levels.push((LEVELS[stage.index() + 1], next.class(), instance_stats(&next)));
        traces.push(trace);
        let prev = std::mem::replace(&mut cur, next);
        if keep_sources {
            sources.push(prev);
        }
    }
    let instance = match cur {
        Instance::TwoCf(c) => c,
        _ => unreachable!("the last stage yields a 2CF instance"),
    };
    let budget = error_budget(eps_lp, &BudgetFactors::from_traces(&traces)?)?;
    let audits = audit(&levels, &traces, &budget);
    Ok(Compiled {
        instance,
        traces,
        budget: budget.clone(),
        report: CompileReport {
            levels,
            budget,
            audits,
            flags,
        },
        sources,
        timings,
    })
}

fn q(v: &Int) -> Rat {
    to_rat(v)
}

fn audit(levels: &[(&'static str, Class, Stats)], traces: &[Trace], budget: &ErrorBudget) -> Vec<Audit> {
    let mut out = Vec::new();
    let mut rel = |name: &str, relation: &'static str, lhs: Int, rhs: Int| {
        out.push(Audit {
            name: name.to_string(),
            relation,
            lhs: q(&lhs),
            rhs: q(&rhs),
        })
    };
    let st = |k: usize, key: &str| -> Int { levels[k].2.get(key).cloned().unwrap_or_else(Int::zero) };
    let i = |v: u64| Int::from(v);
    let one_log = |x: &Int| Int::from(1 + floor_log2(&at_least_one(x)));

    // LP -> LEN
    let (n, m, nnz) = (st(0, "n"), st(0, "m"), st(0, "nnz"));
    let x = at_least_one(&st(0, "x"));
    rel("lp-len n~ = n + m + 1", "=", st(1, "n"), &n + &m + 1);
    rel("lp-len m~ = m + 1", "=", st(1, "m"), &m + 1);
    rel("lp-len nnz(A~) <= 4 nnz(A)", "<=", st(1, "nnz"), i(4) * &nnz);
    rel("lp-len R~ = 5 m R X", "=", st(1, "r"), i(5) * &m * st(0, "r") * &x);

    // LEN -> 2LEN
    let Trace::LenTwoLen(t2) = &traces[1] else {
        unreachable!()
    };
    let lx = one_log(&st(1, "x"));
    let (nt, mt) = (st(1, "n"), st(1, "m"));
    rel(
        "len-2len n- <= n~ + 4 m~ (1 + log X)",
        "<=",
        st(2, "n"),
        &nt + i(4) * &mt * &lx,
    );
    rel("len-2len m- <= 3 m~ (1 + log X)", "<=", st(2, "m"), i(3) * &mt * &lx);
    rel(
        "len-2len nnz(A-) <= 17 nnz(A~) (1 + log X)",
        "<=",
        st(2, "nnz"),
        i(17) * st(1, "nnz") * &lx,
    );
    let xt = at_least_one(&st(1, "x"));
    rel(
        "len-2len R- = 8 m~ R~ X (1 + log X)",
        "=",
        st(2, "r"),
        i(8) * &mt * st(1, "r") * &xt * &lx,
    );
    let delta = i(2) * &xt * st(1, "r");
    if t2.num_carries() > 0 {
        rel("len-2len X(A-, b-) = 2 X(A~, b~) R~", "=", st(2, "x"), delta);
    } else {
        rel("len-2len X(A-, b-) <= 2 X(A~, b~) R~", "<=", st(2, "x"), delta);
    }

    // 2LEN -> 1LEN
    let (nb, mb) = (st(2, "n"), st(2, "m"));
    rel("2len-1len n^ <= 2 n-", "<=", st(3, "n"), i(2) * &nb);
    rel("2len-1len m^ <= m- + n-", "<=", st(3, "m"), &mb + &nb);
    rel(
        "2len-1len nnz(A^) <= 4 nnz(A-)",
        "<=",
        st(3, "nnz"),
        i(4) * st(2, "nnz"),
    );
    rel("2len-1len R^ = 2 R-", "=", st(3, "r"), i(2) * st(2, "r"));
    rel("2len-1len X(A^, b^) <= X(A-, b-)", "<=", st(3, "x"), st(2, "x"));

    // 1LEN -> FHF
    let Trace::OneLenFhf(t4) = &traces[3] else {
        unreachable!()
    };
    let kept = Int::from(t4.rows.len());
    let (nh, mh) = (st(3, "n"), st(3, "m"));
    rel(
        "1len-fhf |V| = 2 (kept equations) + 2",
        "=",
        st(4, "vertices"),
        i(2) * &kept + 2,
    );
    rel("1len-fhf |V| <= 2 m^ + 2", "<=", st(4, "vertices"), i(2) * &mh + 2);
    rel("1len-fhf |E| <= 4 nnz(A^)", "<=", st(4, "edges"), i(4) * st(3, "nnz"));
    let nonzero_rhs = Int::from(t4.rows.iter().filter(|g| g.fixed.is_some()).count());
    rel(
        "1len-fhf |F| = nonzero right-hand sides",
        "=",
        st(4, "fixed"),
        nonzero_rhs,
    );
    rel("1len-fhf |F| <= m^", "<=", st(4, "fixed"), mh.clone());
    rel("1len-fhf h <= n^ + m^", "<=", st(4, "sets"), &nh + &mh);
    let rx = std::cmp::max(st(3, "r"), at_least_one(&st(3, "x")));
    rel(
        "1len-fhf max capacity <= max(R^, X(A^, b^))",
        "<=",
        st(4, "max_cap"),
        rx,
    );

    // FHF -> FPHF
    let (vh, eh) = (st(4, "vertices"), st(4, "edges"));
    let interior = st(4, "set_edges") - i(2) * st(4, "sets");
    rel(
        "fhf-fphf |V^p| = |V^h| + interior set members",
        "=",
        st(5, "vertices"),
        &vh + &interior,
    );
    rel("fhf-fphf |V^p| <= |V^h| + |E^h|", "<=", st(5, "vertices"), &vh + &eh);
    rel("fhf-fphf |E^p| <= 2 |E^h|", "<=", st(5, "edges"), i(2) * &eh);
    rel("fhf-fphf |F^p| = |F^h|", "=", st(5, "fixed"), st(4, "fixed"));
    rel("fhf-fphf p <= |E^h|", "<=", st(5, "sets"), eh.clone());
    rel(
        "fhf-fphf max capacity unchanged",
        "=",
        st(5, "max_cap"),
        st(4, "max_cap"),
    );

    // FPHF -> SFF
    let (vp, ep, p) = (st(5, "vertices"), st(5, "edges"), st(5, "sets"));
    rel(
        "fphf-sff |V^s| = |V^p| + 4p + 2",
        "=",
        st(6, "vertices"),
        &vp + i(4) * &p + 2,
    );
    rel("fphf-sff |E^s| = |E^p| + 7p", "=", st(6, "edges"), &ep + i(7) * &p);
    rel(
        "fphf-sff |F^s| = |F^p| + 2p",
        "=",
        st(6, "fixed"),
        st(5, "fixed") + i(2) * &p,
    );
    rel("fphf-sff |S1| = |E^p| + 2p", "=", st(6, "sel1"), &ep + i(2) * &p);
    rel("fphf-sff |S2| = 3p", "=", st(6, "sel2"), i(3) * &p);
    rel(
        "fphf-sff max capacity unchanged",
        "=",
        st(6, "max_cap"),
        st(5, "max_cap"),
    );

    // SFF -> 2CFF
    let sel = st(6, "sel1") + st(6, "sel2");
    let es = st(6, "edges");
    rel(
        "sff-2cff |V^f| = |V^s| + 2 (|S1| + |S2|)",
        "=",
        st(7, "vertices"),
        st(6, "vertices") + i(2) * &sel,
    );
    rel(
        "sff-2cff |E^f| = |E^s| + 4 (|S1| + |S2|) - |F^s and S|",
        "=",
        st(7, "edges"),
        &es + i(4) * &sel - st(6, "fixed_selective"),
    );
    rel(
        "sff-2cff |E^f| <= |E^s| + 4 (|S1| + |S2|)",
        "<=",
        st(7, "edges"),
        &es + i(4) * &sel,
    );
    rel(
        "sff-2cff |F^f| <= 4 (|F^s| + |S1| + |S2|)",
        "<=",
        st(7, "fixed"),
        i(4) * (st(6, "fixed") + &sel),
    );
    rel(
        "sff-2cff max capacity unchanged",
        "=",
        st(7, "max_cap"),
        st(6, "max_cap"),
    );

    // 2CFF -> 2CFR
    let (vf, ef, mf) = (st(7, "vertices"), st(7, "edges"), st(7, "total_cap"));
    rel(
        "2cff-2cfr |V^r| = |V^f| + 2 |E^f| + 8",
        "=",
        st(8, "vertices"),
        &vf + i(2) * &ef + 8,
    );
    rel("2cff-2cfr |E^r| = 7 |E^f| + 10", "=", st(8, "edges"), i(7) * &ef + 10);
    rel(
        "2cff-2cfr max capacity = max(2 max u^f, M^f)",
        "=",
        st(8, "max_cap"),
        std::cmp::max(i(2) * st(7, "max_cap"), mf.clone()),
    );
    rel("2cff-2cfr R1 = 2 M^f", "=", st(8, "r1"), i(2) * &mf);
    rel("2cff-2cfr R2 = 2 M^f", "=", st(8, "r2"), i(2) * &mf);

    // 2CFR -> 2CF
    rel(
        "2cfr-2cf |V| = |V^r| + 2",
        "=",
        st(9, "vertices"),
        st(8, "vertices") + 2,
    );
    rel("2cfr-2cf |E| = |E^r| + 2", "=", st(9, "edges"), st(8, "edges") + 2);
    rel("2cfr-2cf R = R1 + R2", "=", st(9, "r"), st(8, "r1") + st(8, "r2"));
    rel(
        "2cfr-2cf max capacity = max(R1, R2)",
        "=",
        st(9, "max_cap"),
        std::cmp::max(st(8, "r1"), st(8, "r2")),
    );

    // End-to-end bounds
    let lg = Int::from(floor_log2(&x));
    let size: Int = i(1_000_000) * &nnz * (&lg + 3);
    rel(
        "overall |V| <= 10^6 nnz (3 + log X)",
        "<=",
        st(9, "vertices"),
        size.clone(),
    );
    rel("overall |E| <= 10^6 nnz (3 + log X)", "<=", st(9, "edges"), size);
    let two_lg: Int = &lg + 2;
    let cap = i(100_000_000) * &nnz * &nnz * &nnz * st(0, "r") * &x * &x * &two_lg * &two_lg;
    rel(
        "overall max capacity <= 10^8 nnz^3 R X^2 (2 + log X)^2",
        "<=",
        st(9, "max_cap"),
        cap.clone(),
    );
    rel("overall R <= 10^8 nnz^3 R X^2 (2 + log X)^2", "<=", st(9, "r"), cap);
    let three_lg: Int = &lg + 3;
    let mut denom = Int::from(10u32).pow(24) * st(0, "r") * &x * &x * &x;
    for _ in 0..7 {
        denom *= &nnz;
    }
    for _ in 0..6 {
        denom *= &three_lg;
    }
    out.push(Audit {
        name: "overall eps_lp / (10^24 nnz^7 R X^3 (3 + log X)^6) <= eps_2cf".into(),
        relation: "<=",
        lhs: budget.lp() / to_rat(&denom),
        rhs: budget.twocf().clone(),
    });
    out
}

/// Recovered LP solution with the reports of every level that could be checked.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub x: Vec<Rat>,
    /// (level name, report), from the 2CF level down to the LP level.
    pub reports: Vec<(&'static str, ErrorReport)>,
}

impl Recovery {
    pub fn lp_report(&self) -> &ErrorReport {
        &self.reports.last().expect("LP report").1
    }
}

/// Maps a 2CF flow back to the LP and verifies each level against its budget.
pub fn recover(compiled: &Compiled, flow: &TwoCommodityFlow) -> Result<Recovery> {
    let (x, levels) = map_back_chain(flow, &compiled.traces)?;
    let mut reports = Vec::new();
    let top = Instance::TwoCf(compiled.instance.clone());
    reports.push((
        LEVELS[9],
        check(Class::TwoCf, &top, &levels[0], compiled.budget.twocf())?,
    ));
    if compiled.sources.len() == 9 {
        for k in (0..9).rev() {
            let sol = &levels[9 - k];
            let inst = &compiled.sources[k];
            reports.push((LEVELS[k], check(inst.class(), inst, sol, &compiled.budget.eps[k])?));
        }
    }
    Ok(Recovery { x, reports })
}

/// Recovers x and checks it against the LP only.
pub fn recover_lp(
    lp: &LpInstance,
    traces: &[Trace],
    budget: &ErrorBudget,
    flow: &TwoCommodityFlow,
) -> Result<(Vec<Rat>, ErrorReport)> {
    let (x, _) = map_back_chain(flow, traces)?;
    let rep = check(
        Class::Lp,
        &Instance::Lp(lp.clone()),
        &Solution::Vector(x.clone()),
        budget.lp(),
    )?;
    Ok((x, rep))
}
