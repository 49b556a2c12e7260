//! Instance and solution types for every problem class of the chain.

mod graph;
mod instances;
mod matrix;
mod rounding;
mod validate;

pub use graph::FlowGraph;
pub use instances::*;
pub use matrix::SparseIntMatrix;
pub use rounding::{round_lp_to_integers, RealLp};
pub use validate::{validate, Violation};

use num_traits::{Signed, Zero};

use crate::arith::Int;

/// One argument of `compute_x`.
#[derive(Clone, Copy, Debug)]
pub enum XArg<'a> {
    Matrix(&'a SparseIntMatrix),
    Vector(&'a [Int]),
    Scalar(&'a Int),
}

/// Largest absolute entry over all arguments.
pub fn compute_x(args: &[XArg<'_>]) -> Int {
    let mut best = Int::zero();
    for a in args {
        let v = match a {
            XArg::Matrix(m) => m.max_abs(),
            XArg::Vector(v) => v.iter().map(|z| z.abs()).max().unwrap_or_else(Int::zero),
            XArg::Scalar(z) => z.abs(),
        };
        if v > best {
            best = v;
        }
    }
    best
}

/// X(A, b, c, K) of an LP.
pub fn lp_x(lp: &LpInstance) -> Int {
    compute_x(&[
        XArg::Matrix(&lp.a),
        XArg::Vector(&lp.b),
        XArg::Vector(&lp.c),
        XArg::Scalar(&lp.k),
    ])
}

/// X(A, b) of a system of equations.
pub fn len_x(a: &SparseIntMatrix, b: &[Int]) -> Int {
    compute_x(&[XArg::Matrix(a), XArg::Vector(b)])
}

/// Problem classes, named after their approximate versions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Lp,
    Len,
    KLen,
    Fhf,
    Fphf,
    Sff,
    TwoCff,
    TwoCfr,
    TwoCf,
}

impl Class {
    pub const ALL: [Class; 9] = [
        Class::Lp,
        Class::Len,
        Class::KLen,
        Class::Fhf,
        Class::Fphf,
        Class::Sff,
        Class::TwoCff,
        Class::TwoCfr,
        Class::TwoCf,
    ];

    pub fn schema(&self) -> &'static str {
        match self {
            Class::Lp => "lp",
            Class::Len => "len",
            Class::KLen => "klen",
            Class::Fhf => "fhf",
            Class::Fphf => "fphf",
            Class::Sff => "sff",
            Class::TwoCff => "2cff",
            Class::TwoCfr => "2cfr",
            Class::TwoCf => "2cf",
        }
    }

    /// Accepts both the problem name and its approximate name ("len", "lena").
    pub fn parse(s: &str) -> Option<Class> {
        let s = s.to_ascii_lowercase();
        let base = match s.as_str() {
            "lpa" | "lena" | "klena" | "fhfa" | "fphfa" | "sffa" | "2cffa" | "2cfra" | "2cfa" => &s[..s.len() - 1],
            "2lena" | "1lena" => "klen",
            "2len" | "1len" => "klen",
            other => other,
        };
        Class::ALL.into_iter().find(|c| c.schema() == base)
    }

    pub fn is_flow(&self) -> bool {
        !matches!(self, Class::Lp | Class::Len | Class::KLen)
    }

    pub fn commodities(&self) -> usize {
        match self {
            Class::Fhf | Class::Fphf => 1,
            Class::Lp | Class::Len | Class::KLen => 0,
            _ => 2,
        }
    }
}

/// Any instance of the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Lp(LpInstance),
    Len(LenInstance),
    KLen(KLenInstance),
    Fhf(FhfInstance),
    Fphf(FphfInstance),
    Sff(SffInstance),
    TwoCff(TwoCffInstance),
    TwoCfr(TwoCfrInstance),
    TwoCf(TwoCfInstance),
}

impl Instance {
    pub fn class(&self) -> Class {
        match self {
            Instance::Lp(_) => Class::Lp,
            Instance::Len(_) => Class::Len,
            Instance::KLen(_) => Class::KLen,
            Instance::Fhf(_) => Class::Fhf,
            Instance::Fphf(_) => Class::Fphf,
            Instance::Sff(_) => Class::Sff,
            Instance::TwoCff(_) => Class::TwoCff,
            Instance::TwoCfr(_) => Class::TwoCfr,
            Instance::TwoCf(_) => Class::TwoCf,
        }
    }

    pub fn graph(&self) -> Option<&FlowGraph> {
        match self {
            Instance::Fhf(i) => Some(&i.graph),
            Instance::Fphf(i) => Some(&i.graph),
            Instance::Sff(i) => Some(&i.graph),
            Instance::TwoCff(i) => Some(&i.graph),
            Instance::TwoCfr(i) => Some(&i.graph),
            Instance::TwoCf(i) => Some(&i.graph),
            _ => None,
        }
    }

    /// Number of variables of an algebraic instance.
    pub fn num_vars(&self) -> Option<usize> {
        match self {
            Instance::Lp(i) => Some(i.a.cols()),
            Instance::Len(i) => Some(i.a.cols()),
            Instance::KLen(i) => Some(i.a.cols()),
            _ => None,
        }
    }
}

/// A solution of any class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Vector(Vec<crate::arith::Rat>),
    Flow(TwoCommodityFlow),
}
