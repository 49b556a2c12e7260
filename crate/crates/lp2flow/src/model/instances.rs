use num_traits::{Signed, Zero};

use super::{FlowGraph, SparseIntMatrix};
use crate::arith::{Int, Rat};
use crate::error::{Error, Result};

/// Decision LP: find x >= 0 with Ax <= b and c^T x >= K. `r` bounds the l1 norm
/// of x over the feasible set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpInstance {
    pub a: SparseIntMatrix,
    pub b: Vec<Int>,
    pub c: Vec<Int>,
    pub k: Int,
    pub r: Int,
}

/// Linear equations Ax = b over x >= 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LenInstance {
    pub a: SparseIntMatrix,
    pub b: Vec<Int>,
    pub r: Int,
}

/// Linear equations whose coefficients lie in [-k, k].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLenInstance {
    pub a: SparseIntMatrix,
    pub b: Vec<Int>,
    pub r: Int,
    pub k: u32,
}

impl KLenInstance {
    pub fn as_len(&self) -> LenInstance {
        LenInstance {
            a: self.a.clone(),
            b: self.b.clone(),
            r: self.r.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Terminals {
    pub s1: usize,
    pub t1: usize,
    pub s2: usize,
    pub t2: usize,
}

impl Terminals {
    pub fn source(&self, commodity: usize) -> usize {
        if commodity == 1 {
            self.s1
        } else {
            self.s2
        }
    }

    pub fn sink(&self, commodity: usize) -> usize {
        if commodity == 1 {
            self.t1
        } else {
            self.t2
        }
    }
}

/// Single-commodity flow with fixed edges and equal-flow edge sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FhfInstance {
    pub graph: FlowGraph,
    pub fixed: Vec<u32>,
    pub homologous: Vec<Vec<u32>>,
    pub s: usize,
    pub t: usize,
}

impl FhfInstance {
    /// Sorts the fixed set, every homologous set and the list of sets.
    pub fn new(graph: FlowGraph, mut fixed: Vec<u32>, mut homologous: Vec<Vec<u32>>, s: usize, t: usize) -> Self {
        fixed.sort_unstable();
        for h in homologous.iter_mut() {
            h.sort_unstable();
        }
        homologous.sort();
        FhfInstance {
            graph,
            fixed,
            homologous,
            s,
            t,
        }
    }

    pub fn homologous_edge_count(&self) -> usize {
        self.homologous.iter().map(|h| h.len()).sum()
    }
}

/// FHF whose homologous sets are all pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FphfInstance {
    pub graph: FlowGraph,
    pub fixed: Vec<u32>,
    pub pairs: Vec<[u32; 2]>,
    pub s: usize,
    pub t: usize,
}

impl FphfInstance {
    pub fn new(graph: FlowGraph, mut fixed: Vec<u32>, mut pairs: Vec<[u32; 2]>, s: usize, t: usize) -> Self {
        fixed.sort_unstable();
        for p in pairs.iter_mut() {
            p.sort_unstable();
        }
        pairs.sort_unstable();
        FphfInstance {
            graph,
            fixed,
            pairs,
            s,
            t,
        }
    }

    pub fn as_fhf(&self) -> FhfInstance {
        FhfInstance::new(
            self.graph.clone(),
            self.fixed.clone(),
            self.pairs.iter().map(|p| p.to_vec()).collect(),
            self.s,
            self.t,
        )
    }
}

/// Two-commodity flow with fixed edges and commodity-selective edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SffInstance {
    pub graph: FlowGraph,
    pub fixed: Vec<u32>,
    pub sel1: Vec<u32>,
    pub sel2: Vec<u32>,
    pub terminals: Terminals,
}

impl SffInstance {
    pub fn new(
        graph: FlowGraph,
        mut fixed: Vec<u32>,
        mut sel1: Vec<u32>,
        mut sel2: Vec<u32>,
        terminals: Terminals,
    ) -> Self {
        fixed.sort_unstable();
        sel1.sort_unstable();
        sel2.sort_unstable();
        SffInstance {
            graph,
            fixed,
            sel1,
            sel2,
            terminals,
        }
    }

    /// Per edge: 0 when unrestricted, otherwise the commodity it is selective for.
    pub fn selectivity(&self) -> Vec<u8> {
        let mut sel = vec![0u8; self.graph.num_edges()];
        for &e in &self.sel1 {
            sel[e as usize] = 1;
        }
        for &e in &self.sel2 {
            sel[e as usize] = 2;
        }
        sel
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCffInstance {
    pub graph: FlowGraph,
    pub fixed: Vec<u32>,
    pub terminals: Terminals,
}

impl TwoCffInstance {
    pub fn new(graph: FlowGraph, mut fixed: Vec<u32>, terminals: Terminals) -> Self {
        fixed.sort_unstable();
        TwoCffInstance {
            graph,
            fixed,
            terminals,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCfrInstance {
    pub graph: FlowGraph,
    pub terminals: Terminals,
    pub r1: Int,
    pub r2: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCfInstance {
    pub graph: FlowGraph,
    pub terminals: Terminals,
    pub r: Int,
}

pub fn membership(len: usize, ids: &[u32]) -> Vec<bool> {
    let mut m = vec![false; len];
    for &e in ids {
        m[e as usize] = true;
    }
    m
}

/// Per-edge, per-commodity flow values. Single-commodity flows leave `f2` empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCommodityFlow {
    pub f1: Vec<Rat>,
    pub f2: Option<Vec<Rat>>,
}

impl TwoCommodityFlow {
    pub fn single(f: Vec<Rat>) -> Self {
        TwoCommodityFlow { f1: f, f2: None }
    }

    pub fn pair(f1: Vec<Rat>, f2: Vec<Rat>) -> Self {
        TwoCommodityFlow { f1, f2: Some(f2) }
    }

    pub fn zero(edges: usize, commodities: usize) -> Self {
        let z = vec![Rat::zero(); edges];
        if commodities == 1 {
            Self::single(z)
        } else {
            Self::pair(z.clone(), z)
        }
    }

    pub fn commodities(&self) -> usize {
        if self.f2.is_some() {
            2
        } else {
            1
        }
    }

    pub fn len(&self) -> usize {
        self.f1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f1.is_empty()
    }

    pub fn get(&self, commodity: usize, e: usize) -> &Rat {
        match commodity {
            1 => &self.f1[e],
            _ => &self.f2.as_ref().expect("second commodity")[e],
        }
    }

    pub fn commodity(&self, commodity: usize) -> &[Rat] {
        match commodity {
            1 => &self.f1,
            _ => self.f2.as_deref().expect("second commodity"),
        }
    }

    pub fn commodity_mut(&mut self, commodity: usize) -> &mut Vec<Rat> {
        match commodity {
            1 => &mut self.f1,
            _ => self.f2.as_mut().expect("second commodity"),
        }
    }

    pub fn total(&self, e: usize) -> Rat {
        match &self.f2 {
            Some(f2) => crate::arith::add(&self.f1[e], &f2[e]),
            None => self.f1[e].clone(),
        }
    }

    pub fn check_shape(&self, edges: usize, commodities: usize) -> Result<()> {
        if self.commodities() != commodities {
            return Err(Error::KeyMismatch(format!(
                "expected {commodities} commodities, found {}",
                self.commodities()
            )));
        }
        if self.f1.len() != edges || self.f2.as_ref().is_some_and(|f| f.len() != edges) {
            return Err(Error::KeyMismatch(format!(
                "expected {edges} edge values, found {}",
                self.f1.len()
            )));
        }
        Ok(())
    }

    pub fn check_nonnegative(&self) -> Result<()> {
        for c in 1..=self.commodities() {
            if let Some(e) = self.commodity(c).iter().position(|v| v.is_negative()) {
                return Err(Error::Range(format!("negative flow on edge {e}, commodity {c}")));
            }
        }
        Ok(())
    }
}

pub fn check_vector(x: &[Rat], len: usize) -> Result<()> {
    if x.len() != len {
        return Err(Error::KeyMismatch(format!(
            "expected {len} coordinates, found {}",
            x.len()
        )));
    }
    if let Some(j) = x.iter().position(|v| v.is_negative()) {
        return Err(Error::Range(format!("negative coordinate {j}")));
    }
    Ok(())
}
