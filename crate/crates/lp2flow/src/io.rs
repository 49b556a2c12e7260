//! Canonical JSON documents for instances, solutions, traces, budgets and reports.
//!
//! Keys are sorted, integers and rationals are decimal strings, rationals are
//! reduced, id arrays are sorted. Input must already be canonical.

use serde_json::{json, Map, Value};

use crate::arith::{fmt_rat, parse_int, parse_rat, Int, Rat};
use crate::error::{Error, Result};
use crate::mapback::{ErrorBudget, LEVELS};
use crate::model::{
    validate, Class, FhfInstance, FlowGraph, FphfInstance, Instance, KLenInstance, LenInstance, LpInstance,
    SffInstance, Solution, SparseIntMatrix, Terminals, TwoCfInstance, TwoCffInstance, TwoCfrInstance, TwoCommodityFlow,
};
use crate::pipeline::{Audit, CompileReport, STAT_KEYS};
use crate::reduce::*;

pub const VERSION: u64 = 1;

/// Any document the tools read or write.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Instance(Instance),
    Solution(Solution),
    Traces(Vec<Trace>),
    Budget(ErrorBudget),
    Report(CompileReport),
}

impl Document {
    pub fn schema(&self) -> &'static str {
        match self {
            Document::Instance(i) => i.class().schema(),
            Document::Solution(Solution::Vector(_)) => "vector-solution",
            Document::Solution(Solution::Flow(_)) => "flow-solution",
            Document::Traces(_) => "trace",
            Document::Budget(_) => "budget",
            Document::Report(_) => "report",
        }
    }
}

pub fn serialize(doc: &Document) -> String {
    let mut body = match doc {
        Document::Instance(i) => instance_value(i),
        Document::Solution(s) => solution_value(s),
        Document::Traces(t) => json!({ "stages": t.iter().map(trace_value).collect::<Vec<_>>() }),
        Document::Budget(b) => budget_value(b),
        Document::Report(r) => report_value(r),
    };
    let map = body.as_object_mut().expect("object payload");
    map.insert("schema".into(), json!(doc.schema()));
    map.insert("version".into(), json!(VERSION));
    let mut text = serde_json::to_string_pretty(&body).expect("serializable");
    text.push('\n');
    text
}

pub fn serialize_instance(i: &Instance) -> String {
    serialize(&Document::Instance(i.clone()))
}

pub fn serialize_solution(s: &Solution) -> String {
    serialize(&Document::Solution(s.clone()))
}

pub fn parse(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::format(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let root = Obj::root(&value)?;
    let schema = root.str("schema")?;
    let version = root.usize("version")?;
    if version as u64 != VERSION {
        return Err(root.err("version", format!("unsupported version {version}")));
    }
    match schema {
        "vector-solution" | "flow-solution" => Ok(Document::Solution(parse_solution_obj(&root, schema)?)),
        "trace" => {
            root.keys(&["stages"])?;
            let stages = root.arr("stages")?;
            let mut out = Vec::with_capacity(stages.len());
            for (k, v) in stages.iter().enumerate() {
                out.push(parse_trace(&Obj::new(v, format!("stages[{k}]"))?)?);
            }
            Ok(Document::Traces(out))
        }
        "budget" => Ok(Document::Budget(parse_budget(&root)?)),
        "report" => Ok(Document::Report(parse_report(&root)?)),
        other => match Class::ALL.into_iter().find(|c| c.schema() == other) {
            Some(class) => Ok(Document::Instance(parse_instance_obj(&root, class)?)),
            None => Err(root.err("schema", format!("unknown schema {other:?}"))),
        },
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    match parse(text)? {
        Document::Instance(i) => Ok(i),
        d => Err(Error::format(format!(
            "expected an instance, found schema {:?}",
            d.schema()
        ))),
    }
}

pub fn parse_solution(text: &str) -> Result<Solution> {
    match parse(text)? {
        Document::Solution(s) => Ok(s),
        d => Err(Error::format(format!(
            "expected a solution, found schema {:?}",
            d.schema()
        ))),
    }
}

pub fn parse_traces(text: &str) -> Result<Vec<Trace>> {
    match parse(text)? {
        Document::Traces(t) => Ok(t),
        d => Err(Error::format(format!(
            "expected a trace, found schema {:?}",
            d.schema()
        ))),
    }
}

// ---------------------------------------------------------------- writing

fn int(v: &Int) -> Value {
    Value::String(v.to_string())
}

fn rat(v: &Rat) -> Value {
    Value::String(fmt_rat(v))
}

fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn matrix(a: &SparseIntMatrix) -> Value {
    Value::Array(
        a.entries()
            .iter()
            .map(|(i, j, v)| json!([i, j, v.to_string()]))
            .collect(),
    )
}

fn edges(g: &FlowGraph) -> Value {
    Value::Array(
        (0..g.num_edges())
            .map(|e| {
                let (t, h, u) = g.edge(e);
                json!([e, t, h, u.to_string()])
            })
            .collect(),
    )
}

fn terminals(t: &Terminals) -> Value {
    json!({ "s1": t.s1, "t1": t.t1, "s2": t.s2, "t2": t.t2 })
}

fn sorted(ids: &[u32]) -> Value {
    let mut v = ids.to_vec();
    v.sort_unstable();
    json!(v)
}

fn instance_value(inst: &Instance) -> Value {
    match inst {
        Instance::Lp(lp) => json!({
            "n": lp.a.cols(), "m": lp.a.rows(), "a": matrix(&lp.a),
            "b": ints(&lp.b), "c": ints(&lp.c), "k": int(&lp.k), "r": int(&lp.r),
        }),
        Instance::Len(l) => json!({
            "n": l.a.cols(), "m": l.a.rows(), "a": matrix(&l.a), "b": ints(&l.b), "r": int(&l.r),
        }),
        Instance::KLen(l) => json!({
            "n": l.a.cols(), "m": l.a.rows(), "a": matrix(&l.a), "b": ints(&l.b), "r": int(&l.r), "k": l.k,
        }),
        Instance::Fhf(h) => {
            let mut sets: Vec<Vec<u32>> = h
                .homologous
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.sort_unstable();
                    s
                })
                .collect();
            sets.sort();
            json!({
                "num_vertices": h.graph.num_vertices(), "edges": edges(&h.graph),
                "fixed": sorted(&h.fixed), "homologous": sets, "s": h.s, "t": h.t,
            })
        }
        Instance::Fphf(p) => {
            let mut pairs: Vec<[u32; 2]> = p.pairs.iter().map(|q| [q[0].min(q[1]), q[0].max(q[1])]).collect();
            pairs.sort_unstable();
            json!({
                "num_vertices": p.graph.num_vertices(), "edges": edges(&p.graph),
                "fixed": sorted(&p.fixed), "pairs": pairs, "s": p.s, "t": p.t,
            })
        }
        Instance::Sff(s) => json!({
            "num_vertices": s.graph.num_vertices(), "edges": edges(&s.graph), "fixed": sorted(&s.fixed),
            "sel1": sorted(&s.sel1), "sel2": sorted(&s.sel2), "terminals": terminals(&s.terminals),
        }),
        Instance::TwoCff(c) => json!({
            "num_vertices": c.graph.num_vertices(), "edges": edges(&c.graph), "fixed": sorted(&c.fixed),
            "terminals": terminals(&c.terminals),
        }),
        Instance::TwoCfr(c) => json!({
            "num_vertices": c.graph.num_vertices(), "edges": edges(&c.graph),
            "terminals": terminals(&c.terminals), "r1": int(&c.r1), "r2": int(&c.r2),
        }),
        Instance::TwoCf(c) => json!({
            "num_vertices": c.graph.num_vertices(), "edges": edges(&c.graph),
            "terminals": terminals(&c.terminals), "r": int(&c.r),
        }),
    }
}

fn solution_value(s: &Solution) -> Value {
    match s {
        Solution::Vector(x) => json!({ "x": rats(x) }),
        Solution::Flow(f) => match &f.f2 {
            None => json!({ "commodities": 1, "f1": rats(&f.f1) }),
            Some(f2) => json!({ "commodities": 2, "f1": rats(&f.f1), "f2": rats(f2) }),
        },
    }
}

fn opt_id(v: u32) -> Value {
    if v == NONE {
        Value::Null
    } else {
        json!(v)
    }
}

fn trace_value(t: &Trace) -> Value {
    let mut v = match t {
        Trace::LpLen(t) => json!({ "n": t.n, "m": t.m, "x": int(&t.x), "r_tilde": int(&t.r_tilde) }),
        Trace::LenTwoLen(t) => json!({
            "n_tilde": t.n_tilde, "m_tilde": t.m_tilde, "x": int(&t.x), "r_tilde": int(&t.r_tilde),
            "delta": int(&t.delta), "r_bar": int(&t.r_bar), "bound_rows": t.bound_rows,
            "equations": t.equations.iter().map(|e| json!({
                "n_bits": e.n_bits, "first_row": e.first_row, "first_carry": e.first_carry,
                "first_carry_index": e.first_carry_index, "rhs_sign": e.rhs_sign, "rhs_bits": e.rhs_bits,
            })).collect::<Vec<_>>(),
        }),
        Trace::TwoLenOneLen(t) => json!({
            "n_bar": t.n_bar, "m_bar": t.m_bar, "twins": t.twins, "r_hat": int(&t.r_hat),
        }),
        Trace::OneLenFhf(t) => json!({
            "n_hat": t.n_hat, "m_hat": t.m_hat, "r_hat": int(&t.r_hat), "x": int(&t.x),
            "rows": t.rows.iter().map(|g| json!({
                "row": g.row, "flipped": g.flipped, "j_plus": g.j_plus, "j_minus": g.j_minus,
                "fixed": g.fixed, "e_plus": g.e_plus, "e_minus": g.e_minus,
            })).collect::<Vec<_>>(),
            "var_edges": t.var_edges,
        }),
        Trace::FhfFphf(t) => json!({ "num_vertices_h": t.num_vertices_h, "first": t.first, "second": t.second }),
        Trace::FphfSff(t) => json!({
            "num_vertices_p": t.num_vertices_p, "copy": t.copy.iter().map(|&c| opt_id(c)).collect::<Vec<_>>(),
            "gadget_base": t.gadget_base, "pairs": t.pairs, "s2": t.s2, "t2": t.t2,
        }),
        Trace::SffTwoCff(t) => json!({
            "num_vertices_s": t.num_vertices_s, "base": t.base, "selective": t.selective,
            "fixed": t.fixed, "vertex": t.vertex,
        }),
        Trace::TwoCffTwoCfr(t) => json!({
            "num_vertices_f": t.num_vertices_f, "num_edges_f": t.num_edges_f, "m_f": int(&t.m_f),
            "fixed": t.fixed, "new_terminals": t.new_terminals,
        }),
        Trace::TwoCfrTwoCf(t) => json!({
            "num_vertices_r": t.num_vertices_r, "num_edges_r": t.num_edges_r, "r1": int(&t.r1), "r2": int(&t.r2),
        }),
    };
    v.as_object_mut()
        .unwrap()
        .insert("stage".into(), json!(t.stage().name()));
    v
}

fn budget_value(b: &ErrorBudget) -> Value {
    json!({ "eps": LEVELS.iter().zip(&b.eps).map(|(l, e)| json!([l, fmt_rat(e)])).collect::<Vec<_>>() })
}

fn report_value(r: &CompileReport) -> Value {
    let mut budget = budget_value(&r.budget);
    budget.as_object_mut().unwrap().insert("schema".into(), json!("budget"));
    budget.as_object_mut().unwrap().insert("version".into(), json!(VERSION));
    json!({
        "levels": r.levels.iter().map(|(name, class, stats)| {
            let stats: Map<String, Value> = stats.iter().map(|(k, v)| (k.to_string(), int(v))).collect();
            json!({ "level": name, "class": class.schema(), "stats": stats })
        }).collect::<Vec<_>>(),
        "budget": budget,
        "audits": r.audits.iter().map(|a| json!({
            "name": a.name, "relation": a.relation, "lhs": fmt_rat(&a.lhs), "rhs": fmt_rat(&a.rhs), "holds": a.holds(),
        })).collect::<Vec<_>>(),
        "flags": r.flags,
    })
}

// ---------------------------------------------------------------- reading

/// JSON object with its location, for diagnostics.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn root(v: &'a Value) -> Result<Self> {
        Obj::new(v, String::new())
    }

    fn new(v: &'a Value, path: String) -> Result<Self> {
        match v.as_object() {
            Some(map) => Ok(Obj { map, path }),
            None => Err(Error::format(format!("{}: expected an object", display_path(&path)))),
        }
    }

    fn at(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn err(&self, key: &str, msg: impl std::fmt::Display) -> Error {
        Error::format(format!("field {}: {msg}", self.at(key)))
    }

    /// Rejects missing and unexpected fields; `schema` and `version` are always allowed.
    fn keys(&self, expected: &[&str]) -> Result<()> {
        for k in self.map.keys() {
            if !expected.contains(&k.as_str()) && k != "schema" && k != "version" {
                return Err(self.err(k, "unexpected field"));
            }
        }
        for k in expected {
            if !self.map.contains_key(*k) {
                return Err(self.err(k, "missing"));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Result<&'a Value> {
        self.map.get(key).ok_or_else(|| self.err(key, "missing"))
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.get(key)?
            .as_str()
            .ok_or_else(|| self.err(key, "expected a string"))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        as_usize(self.get(key)?).ok_or_else(|| self.err(key, "expected a nonnegative count"))
    }

    fn u32(&self, key: &str) -> Result<u32> {
        as_u32(self.get(key)?).ok_or_else(|| self.err(key, "expected a nonnegative id"))
    }

    fn bool(&self, key: &str) -> Result<bool> {
        self.get(key)?
            .as_bool()
            .ok_or_else(|| self.err(key, "expected a boolean"))
    }

    fn int(&self, key: &str) -> Result<Int> {
        parse_int(self.str(key)?).map_err(|e| self.err(key, e))
    }

    fn rat(&self, key: &str) -> Result<Rat> {
        parse_rat(self.str(key)?).map_err(|e| self.err(key, rat_msg(e)))
    }

    fn arr(&self, key: &str) -> Result<&'a Vec<Value>> {
        self.get(key)?
            .as_array()
            .ok_or_else(|| self.err(key, "expected an array"))
    }

    fn obj(&self, key: &str) -> Result<Obj<'a>> {
        Obj::new(self.get(key)?, self.at(key))
    }

    fn ints(&self, key: &str) -> Result<Vec<Int>> {
        self.arr(key)?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let s = v
                    .as_str()
                    .ok_or_else(|| self.err(key, format!("entry {i} is not a string")))?;
                parse_int(s).map_err(|e| self.err(key, format!("entry {i}: {e}")))
            })
            .collect()
    }

    fn rats(&self, key: &str) -> Result<Vec<Rat>> {
        self.arr(key)?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let s = v
                    .as_str()
                    .ok_or_else(|| self.err(key, format!("entry {i} is not a string")))?;
                parse_rat(s).map_err(|e| self.err(key, format!("entry {i}: {}", rat_msg(e))))
            })
            .collect()
    }

    fn ids(&self, key: &str) -> Result<Vec<u32>> {
        ids_of(self.get(key)?).ok_or_else(|| self.err(key, "expected an array of ids"))
    }

    /// Strictly increasing ids below `bound`.
    fn id_set(&self, key: &str, bound: usize) -> Result<Vec<u32>> {
        let ids = self.ids(key)?;
        check_set(&ids, bound).map_err(|m| self.err(key, m))?;
        Ok(ids)
    }
}

fn display_path(p: &str) -> &str {
    if p.is_empty() {
        "document"
    } else {
        p
    }
}

fn rat_msg(e: Error) -> String {
    match e {
        Error::Format(m) => m,
        other => other.to_string(),
    }
}

fn as_usize(v: &Value) -> Option<usize> {
    v.as_u64().and_then(|x| usize::try_from(x).ok())
}

fn as_u32(v: &Value) -> Option<u32> {
    v.as_u64().and_then(|x| u32::try_from(x).ok())
}

fn ids_of(v: &Value) -> Option<Vec<u32>> {
    v.as_array()?.iter().map(as_u32).collect()
}

fn check_set(ids: &[u32], bound: usize) -> std::result::Result<(), String> {
    for w in ids.windows(2) {
        if w[0] == w[1] {
            return Err(format!("duplicate id {}", w[0]));
        }
        if w[0] > w[1] {
            return Err(format!("ids not sorted at {}", w[1]));
        }
    }
    if let Some(&e) = ids.iter().find(|&&e| e as usize >= bound) {
        return Err(format!("dangling edge id {e} (there are {bound} edges)"));
    }
    Ok(())
}

fn parse_matrix(o: &Obj, rows: usize, cols: usize) -> Result<SparseIntMatrix> {
    let arr = o.arr("a")?;
    let mut triples = Vec::with_capacity(arr.len());
    for (k, t) in arr.iter().enumerate() {
        let bad = || o.err("a", format!("entry {k} is not a [row, col, \"value\"] triple"));
        let t = t.as_array().ok_or_else(bad)?;
        if t.len() != 3 {
            return Err(bad());
        }
        let (i, j) = (as_u32(&t[0]).ok_or_else(bad)?, as_u32(&t[1]).ok_or_else(bad)?);
        let v = parse_int(t[2].as_str().ok_or_else(bad)?).map_err(|e| o.err("a", format!("entry {k}: {e}")))?;
        triples.push((i, j, v));
    }
    for w in triples.windows(2) {
        let (a, b) = ((w[0].0, w[0].1), (w[1].0, w[1].1));
        if a == b {
            return Err(o.err("a", format!("duplicate matrix entry ({}, {})", a.0, a.1)));
        }
        if a > b {
            return Err(o.err("a", format!("triples not sorted at ({}, {})", b.0, b.1)));
        }
    }
    SparseIntMatrix::from_triples(rows, cols, triples).map_err(|e| o.err("a", rat_msg(e)))
}

fn parse_graph(o: &Obj) -> Result<FlowGraph> {
    let nv = o.usize("num_vertices")?;
    let arr = o.arr("edges")?;
    let mut g = FlowGraph::with_capacity(nv, arr.len());
    for (k, e) in arr.iter().enumerate() {
        let bad = || o.err("edges", format!("entry {k} is not an [id, tail, head, \"cap\"] edge"));
        let e = e.as_array().ok_or_else(bad)?;
        if e.len() != 4 {
            return Err(bad());
        }
        let id = as_usize(&e[0]).ok_or_else(bad)?;
        if id != k {
            return Err(o.err("edges", format!("entry {k} has id {id}; ids must be 0, 1, 2, ...")));
        }
        let (t, h) = (as_usize(&e[1]).ok_or_else(bad)?, as_usize(&e[2]).ok_or_else(bad)?);
        if t >= nv || h >= nv {
            return Err(o.err("edges", format!("edge {k} uses a vertex outside 0..{nv}")));
        }
        let u = parse_int(e[3].as_str().ok_or_else(bad)?).map_err(|err| o.err("edges", format!("edge {k}: {err}")))?;
        g.add_edge(t, h, &u);
    }
    Ok(g)
}

fn parse_terminals(o: &Obj) -> Result<Terminals> {
    let t = o.obj("terminals")?;
    t.keys(&["s1", "t1", "s2", "t2"])?;
    Ok(Terminals {
        s1: t.usize("s1")?,
        t1: t.usize("t1")?,
        s2: t.usize("s2")?,
        t2: t.usize("t2")?,
    })
}

fn parse_instance_obj(o: &Obj, class: Class) -> Result<Instance> {
    let algebraic = |o: &Obj, extra: &[&str]| -> Result<(SparseIntMatrix, Vec<Int>, Int)> {
        let mut keys = vec!["n", "m", "a", "b", "r"];
        keys.extend_from_slice(extra);
        o.keys(&keys)?;
        let (n, m) = (o.usize("n")?, o.usize("m")?);
        let a = parse_matrix(o, m, n)?;
        let b = o.ints("b")?;
        if b.len() != m {
            return Err(o.err("b", format!("has {} entries, expected m = {m}", b.len())));
        }
        Ok((a, b, o.int("r")?))
    };
    let inst = match class {
        Class::Lp => {
            let (a, b, r) = algebraic(o, &["c", "k"])?;
            let c = o.ints("c")?;
            if c.len() != a.cols() {
                return Err(o.err("c", format!("has {} entries, expected n = {}", c.len(), a.cols())));
            }
            Instance::Lp(LpInstance {
                a,
                b,
                c,
                k: o.int("k")?,
                r,
            })
        }
        Class::Len => {
            let (a, b, r) = algebraic(o, &[])?;
            Instance::Len(LenInstance { a, b, r })
        }
        Class::KLen => {
            let (a, b, r) = algebraic(o, &["k"])?;
            Instance::KLen(KLenInstance {
                a,
                b,
                r,
                k: o.u32("k")?,
            })
        }
        Class::Fhf => {
            o.keys(&["num_vertices", "edges", "fixed", "homologous", "s", "t"])?;
            let g = parse_graph(o)?;
            let m = g.num_edges();
            let fixed = o.id_set("fixed", m)?;
            let mut sets = Vec::new();
            for (k, v) in o.arr("homologous")?.iter().enumerate() {
                let set = ids_of(v).ok_or_else(|| o.err("homologous", format!("set {k} is not an id array")))?;
                check_set(&set, m).map_err(|msg| o.err("homologous", format!("set {k}: {msg}")))?;
                sets.push(set);
            }
            for w in sets.windows(2) {
                if w[0] >= w[1] {
                    return Err(o.err("homologous", "sets are not sorted"));
                }
            }
            Instance::Fhf(FhfInstance::new(g, fixed, sets, o.usize("s")?, o.usize("t")?))
        }
        Class::Fphf => {
            o.keys(&["num_vertices", "edges", "fixed", "pairs", "s", "t"])?;
            let g = parse_graph(o)?;
            let m = g.num_edges();
            let fixed = o.id_set("fixed", m)?;
            let mut pairs = Vec::new();
            for (k, v) in o.arr("pairs")?.iter().enumerate() {
                let p = ids_of(v)
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| o.err("pairs", format!("entry {k} is not an id pair")))?;
                check_set(&p, m).map_err(|msg| o.err("pairs", format!("pair {k}: {msg}")))?;
                pairs.push([p[0], p[1]]);
            }
            for w in pairs.windows(2) {
                if w[0] >= w[1] {
                    return Err(o.err("pairs", "pairs are not sorted"));
                }
            }
            Instance::Fphf(FphfInstance::new(g, fixed, pairs, o.usize("s")?, o.usize("t")?))
        }
        Class::Sff => {
            o.keys(&["num_vertices", "edges", "fixed", "sel1", "sel2", "terminals"])?;
            let g = parse_graph(o)?;
            let m = g.num_edges();
            let (fixed, sel1, sel2) = (o.id_set("fixed", m)?, o.id_set("sel1", m)?, o.id_set("sel2", m)?);
            Instance::Sff(SffInstance::new(g, fixed, sel1, sel2, parse_terminals(o)?))
        }
        Class::TwoCff => {
            o.keys(&["num_vertices", "edges", "fixed", "terminals"])?;
            let g = parse_graph(o)?;
            let fixed = o.id_set("fixed", g.num_edges())?;
            Instance::TwoCff(TwoCffInstance::new(g, fixed, parse_terminals(o)?))
        }
        Class::TwoCfr => {
            o.keys(&["num_vertices", "edges", "terminals", "r1", "r2"])?;
            Instance::TwoCfr(TwoCfrInstance {
                graph: parse_graph(o)?,
                terminals: parse_terminals(o)?,
                r1: o.int("r1")?,
                r2: o.int("r2")?,
            })
        }
        Class::TwoCf => {
            o.keys(&["num_vertices", "edges", "terminals", "r"])?;
            Instance::TwoCf(TwoCfInstance {
                graph: parse_graph(o)?,
                terminals: parse_terminals(o)?,
                r: o.int("r")?,
            })
        }
    };
    if let Some(v) = validate(&inst).first() {
        return Err(Error::format(format!("{} instance: {v}", class.schema())));
    }
    Ok(inst)
}

fn parse_solution_obj(o: &Obj, schema: &str) -> Result<Solution> {
    if schema == "vector-solution" {
        o.keys(&["x"])?;
        return Ok(Solution::Vector(o.rats("x")?));
    }
    match o.usize("commodities")? {
        1 => {
            o.keys(&["commodities", "f1"])?;
            Ok(Solution::Flow(TwoCommodityFlow::single(o.rats("f1")?)))
        }
        2 => {
            o.keys(&["commodities", "f1", "f2"])?;
            let (f1, f2) = (o.rats("f1")?, o.rats("f2")?);
            if f1.len() != f2.len() {
                return Err(o.err("f2", "commodities have different lengths"));
            }
            Ok(Solution::Flow(TwoCommodityFlow::pair(f1, f2)))
        }
        c => Err(o.err("commodities", format!("expected 1 or 2, found {c}"))),
    }
}

fn parse_trace(o: &Obj) -> Result<Trace> {
    let stage = Stage::parse(o.str("stage")?).ok_or_else(|| o.err("stage", "unknown stage"))?;
    let keys = |k: &[&str]| {
        let mut all = k.to_vec();
        all.push("stage");
        o.keys(&all)
    };
    let id_lists = |key: &str| -> Result<Vec<Vec<u32>>> {
        o.arr(key)?
            .iter()
            .enumerate()
            .map(|(k, v)| ids_of(v).ok_or_else(|| o.err(key, format!("entry {k} is not an id array"))))
            .collect()
    };
    Ok(match stage {
        Stage::LpLen => {
            keys(&["n", "m", "x", "r_tilde"])?;
            Trace::LpLen(LpLenTrace {
                n: o.usize("n")?,
                m: o.usize("m")?,
                x: o.int("x")?,
                r_tilde: o.int("r_tilde")?,
            })
        }
        Stage::LenTwoLen => {
            keys(&[
                "n_tilde",
                "m_tilde",
                "x",
                "r_tilde",
                "delta",
                "r_bar",
                "bound_rows",
                "equations",
            ])?;
            let mut equations = Vec::new();
            for (k, v) in o.arr("equations")?.iter().enumerate() {
                let e = Obj::new(v, o.at(&format!("equations[{k}]")))?;
                e.keys(&[
                    "n_bits",
                    "first_row",
                    "first_carry",
                    "first_carry_index",
                    "rhs_sign",
                    "rhs_bits",
                ])?;
                let sign = e
                    .get("rhs_sign")?
                    .as_i64()
                    .filter(|s| (-1..=1).contains(s))
                    .ok_or_else(|| e.err("rhs_sign", "expected -1, 0 or 1"))?;
                let bits = e
                    .arr("rhs_bits")?
                    .iter()
                    .map(|b| b.as_u64())
                    .collect::<Option<Vec<u64>>>()
                    .ok_or_else(|| e.err("rhs_bits", "expected bit positions"))?;
                equations.push(BitEquation {
                    n_bits: e.u32("n_bits")?,
                    first_row: e.u32("first_row")?,
                    first_carry: e.u32("first_carry")?,
                    first_carry_index: e.u32("first_carry_index")?,
                    rhs_sign: sign as i8,
                    rhs_bits: bits,
                });
            }
            Trace::LenTwoLen(LenTwoLenTrace {
                n_tilde: o.usize("n_tilde")?,
                m_tilde: o.usize("m_tilde")?,
                x: o.int("x")?,
                r_tilde: o.int("r_tilde")?,
                delta: o.int("delta")?,
                r_bar: o.int("r_bar")?,
                bound_rows: o.u32("bound_rows")?,
                equations,
            })
        }
        Stage::TwoLenOneLen => {
            keys(&["n_bar", "m_bar", "twins", "r_hat"])?;
            Trace::TwoLenOneLen(TwoLenOneLenTrace {
                n_bar: o.usize("n_bar")?,
                m_bar: o.usize("m_bar")?,
                twins: o.ids("twins")?,
                r_hat: o.int("r_hat")?,
            })
        }
        Stage::OneLenFhf => {
            keys(&["n_hat", "m_hat", "r_hat", "x", "rows", "var_edges"])?;
            let mut rows = Vec::new();
            for (k, v) in o.arr("rows")?.iter().enumerate() {
                let g = Obj::new(v, o.at(&format!("rows[{k}]")))?;
                g.keys(&["row", "flipped", "j_plus", "j_minus", "fixed", "e_plus", "e_minus"])?;
                let fixed = match g.get("fixed")? {
                    Value::Null => None,
                    v => Some(as_u32(v).ok_or_else(|| g.err("fixed", "expected an edge id or null"))?),
                };
                rows.push(RowGadget {
                    row: g.u32("row")?,
                    flipped: g.bool("flipped")?,
                    j_plus: g.u32("j_plus")?,
                    j_minus: g.u32("j_minus")?,
                    fixed,
                    e_plus: g.u32("e_plus")?,
                    e_minus: g.u32("e_minus")?,
                });
            }
            Trace::OneLenFhf(OneLenFhfTrace {
                n_hat: o.usize("n_hat")?,
                m_hat: o.usize("m_hat")?,
                r_hat: o.int("r_hat")?,
                x: o.int("x")?,
                rows,
                var_edges: id_lists("var_edges")?,
            })
        }
        Stage::FhfFphf => {
            keys(&["num_vertices_h", "first", "second"])?;
            let (first, second) = (o.ids("first")?, o.ids("second")?);
            if first.len() != second.len() {
                return Err(o.err("second", "length differs from first"));
            }
            Trace::FhfFphf(FhfFphfTrace {
                num_vertices_h: o.usize("num_vertices_h")?,
                first,
                second,
            })
        }
        Stage::FphfSff => {
            keys(&["num_vertices_p", "copy", "gadget_base", "pairs", "s2", "t2"])?;
            let copy = o
                .arr("copy")?
                .iter()
                .map(|v| if v.is_null() { Some(NONE) } else { as_u32(v) })
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| o.err("copy", "expected edge ids or null"))?;
            let pairs = id_lists("pairs")?
                .into_iter()
                .map(|p| if p.len() == 2 { Some([p[0], p[1]]) } else { None })
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| o.err("pairs", "expected id pairs"))?;
            Trace::FphfSff(FphfSffTrace {
                num_vertices_p: o.usize("num_vertices_p")?,
                copy,
                gadget_base: o.u32("gadget_base")?,
                pairs,
                s2: o.u32("s2")?,
                t2: o.u32("t2")?,
            })
        }
        Stage::SffTwoCff => {
            keys(&["num_vertices_s", "base", "selective", "fixed", "vertex"])?;
            let selective = o
                .arr("selective")?
                .iter()
                .map(|v| v.as_u64().filter(|c| *c <= 2).map(|c| c as u8))
                .collect::<Option<Vec<u8>>>()
                .ok_or_else(|| o.err("selective", "expected 0, 1 or 2 per edge"))?;
            let fixed = bools(o, "fixed")?;
            Trace::SffTwoCff(SffTwoCffTrace {
                num_vertices_s: o.usize("num_vertices_s")?,
                base: o.ids("base")?,
                selective,
                fixed,
                vertex: o.ids("vertex")?,
            })
        }
        Stage::TwoCffTwoCfr => {
            keys(&["num_vertices_f", "num_edges_f", "m_f", "fixed", "new_terminals"])?;
            let nt = o.ids("new_terminals")?;
            let new_terminals: [u32; 8] = nt
                .try_into()
                .map_err(|_| o.err("new_terminals", "expected eight vertex ids"))?;
            Trace::TwoCffTwoCfr(TwoCffTwoCfrTrace {
                num_vertices_f: o.usize("num_vertices_f")?,
                num_edges_f: o.usize("num_edges_f")?,
                m_f: o.int("m_f")?,
                fixed: bools(o, "fixed")?,
                new_terminals,
            })
        }
        Stage::TwoCfrTwoCf => {
            keys(&["num_vertices_r", "num_edges_r", "r1", "r2"])?;
            Trace::TwoCfrTwoCf(TwoCfrTwoCfTrace {
                num_vertices_r: o.usize("num_vertices_r")?,
                num_edges_r: o.usize("num_edges_r")?,
                r1: o.int("r1")?,
                r2: o.int("r2")?,
            })
        }
    })
}

fn bools(o: &Obj, key: &str) -> Result<Vec<bool>> {
    o.arr(key)?
        .iter()
        .map(|v| v.as_bool())
        .collect::<Option<Vec<bool>>>()
        .ok_or_else(|| o.err(key, "expected booleans"))
}

fn parse_budget(o: &Obj) -> Result<ErrorBudget> {
    o.keys(&["eps"])?;
    let arr = o.arr("eps")?;
    if arr.len() != LEVELS.len() {
        return Err(o.err("eps", format!("expected {} levels", LEVELS.len())));
    }
    let mut eps: [Rat; 10] = Default::default();
    for (k, v) in arr.iter().enumerate() {
        let bad = || o.err("eps", format!("entry {k} is not a [level, \"eps\"] pair"));
        let pair = v.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
        if pair[0].as_str() != Some(LEVELS[k]) {
            return Err(o.err("eps", format!("entry {k} must be level {:?}", LEVELS[k])));
        }
        eps[k] = parse_rat(pair[1].as_str().ok_or_else(bad)?)
            .map_err(|e| o.err("eps", format!("entry {k}: {}", rat_msg(e))))?;
    }
    Ok(ErrorBudget { eps })
}

fn parse_report(o: &Obj) -> Result<CompileReport> {
    o.keys(&["levels", "budget", "audits", "flags"])?;
    let mut levels = Vec::new();
    for (k, v) in o.arr("levels")?.iter().enumerate() {
        let l = Obj::new(v, o.at(&format!("levels[{k}]")))?;
        l.keys(&["level", "class", "stats"])?;
        let name = l.str("level")?;
        let name = *LEVELS
            .iter()
            .find(|x| **x == name)
            .ok_or_else(|| l.err("level", "unknown level"))?;
        let class = Class::ALL
            .into_iter()
            .find(|c| c.schema() == l.str("class").unwrap_or(""))
            .ok_or_else(|| l.err("class", "unknown class"))?;
        let s = l.obj("stats")?;
        let mut stats = crate::pipeline::Stats::new();
        for key in s.map.keys() {
            let stat = *STAT_KEYS
                .iter()
                .find(|x| **x == key)
                .ok_or_else(|| s.err(key, "unknown statistic"))?;
            stats.insert(stat, s.int(key)?);
        }
        levels.push((name, class, stats));
    }
    let budget = parse_budget(&o.obj("budget")?)?;
    let mut audits = Vec::new();
    for (k, v) in o.arr("audits")?.iter().enumerate() {
        let a = Obj::new(v, o.at(&format!("audits[{k}]")))?;
        a.keys(&["name", "relation", "lhs", "rhs", "holds"])?;
        let relation = match a.str("relation")? {
            "=" => "=",
            "<=" => "<=",
            _ => return Err(a.err("relation", "expected \"=\" or \"<=\"")),
        };
        let audit = Audit {
            name: a.str("name")?.to_string(),
            relation,
            lhs: a.rat("lhs")?,
            rhs: a.rat("rhs")?,
        };
        if audit.holds() != a.bool("holds")? {
            return Err(a.err("holds", "does not match lhs and rhs"));
        }
        audits.push(audit);
    }
    let flags = o
        .arr("flags")?
        .iter()
        .map(|v| v.as_str().map(str::to_string))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| o.err("flags", "expected strings"))?;
    Ok(CompileReport {
        levels,
        budget,
        audits,
        flags,
    })
}
