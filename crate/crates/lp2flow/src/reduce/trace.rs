use crate::arith::Int;

use super::Stage;

/// Per-stage metadata linking source coordinates to target gadget elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trace {
    LpLen(LpLenTrace),
    LenTwoLen(LenTwoLenTrace),
    TwoLenOneLen(TwoLenOneLenTrace),
    OneLenFhf(OneLenFhfTrace),
    FhfFphf(FhfFphfTrace),
    FphfSff(FphfSffTrace),
    SffTwoCff(SffTwoCffTrace),
    TwoCffTwoCfr(TwoCffTwoCfrTrace),
    TwoCfrTwoCf(TwoCfrTwoCfTrace),
}

impl Trace {
    pub fn stage(&self) -> Stage {
        match self {
            Trace::LpLen(_) => Stage::LpLen,
            Trace::LenTwoLen(_) => Stage::LenTwoLen,
            Trace::TwoLenOneLen(_) => Stage::TwoLenOneLen,
            Trace::OneLenFhf(_) => Stage::OneLenFhf,
            Trace::FhfFphf(_) => Stage::FhfFphf,
            Trace::FphfSff(_) => Stage::FphfSff,
            Trace::SffTwoCff(_) => Stage::SffTwoCff,
            Trace::TwoCffTwoCfr(_) => Stage::TwoCffTwoCfr,
            Trace::TwoCfrTwoCf(_) => Stage::TwoCfrTwoCf,
        }
    }
}

/// Variables of the target are (x, s, alpha): slacks occupy n..n+m, alpha is n+m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpLenTrace {
    pub n: usize,
    pub m: usize,
    /// max(1, X(A, b, c, K)).
    pub x: Int,
    pub r_tilde: Int,
}

/// Bit layout of one source equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitEquation {
    /// N_q: the equation spans bit rows first_row..=first_row + n_bits.
    pub n_bits: u32,
    pub first_row: u32,
    /// Carry l of this equation uses variables first_carry + 4l + (0: c, 1: d, 2: s^c, 3: s^d).
    pub first_carry: u32,
    /// Global index of carry 0; its bound rows are 2g and 2g + 1 past the bit rows.
    pub first_carry_index: u32,
    pub rhs_sign: i8,
    pub rhs_bits: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LenTwoLenTrace {
    pub n_tilde: usize,
    pub m_tilde: usize,
    /// max(1, X(A~, b~)).
    pub x: Int,
    pub r_tilde: Int,
    pub delta: Int,
    pub r_bar: Int,
    /// First carry bound row (number of bit rows).
    pub bound_rows: u32,
    pub equations: Vec<BitEquation>,
}

impl LenTwoLenTrace {
    pub fn num_carries(&self) -> usize {
        self.equations.iter().map(|e| e.n_bits as usize).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoLenOneLenTrace {
    pub n_bar: usize,
    pub m_bar: usize,
    /// twins[k] is the source variable duplicated by variable n_bar + k.
    pub twins: Vec<u32>,
    pub r_hat: Int,
}

/// Gadget of one kept equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowGadget {
    pub row: u32,
    pub flipped: bool,
    pub j_plus: u32,
    pub j_minus: u32,
    pub fixed: Option<u32>,
    pub e_plus: u32,
    pub e_minus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneLenFhfTrace {
    pub n_hat: usize,
    pub m_hat: usize,
    pub r_hat: Int,
    /// max(1, X(A^, b^)).
    pub x: Int,
    pub rows: Vec<RowGadget>,
    /// Edge ids of each variable, in increasing equation order.
    pub var_edges: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FhfFphfTrace {
    pub num_vertices_h: usize,
    /// Per source edge: target id of its first half (the whole edge when not split).
    pub first: Vec<u32>,
    /// Per source edge: target id of its second half.
    pub second: Vec<u32>,
}

impl FhfFphfTrace {
    pub fn num_edges_h(&self) -> usize {
        self.first.len()
    }
}

pub const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FphfSffTrace {
    pub num_vertices_p: usize,
    /// Per source edge: target id of its copy, or NONE for paired edges.
    pub copy: Vec<u32>,
    /// Pair k occupies target ids gadget_base + 9k .. gadget_base + 9k + 8.
    pub gadget_base: u32,
    pub pairs: Vec<[u32; 2]>,
    pub s2: u32,
    pub t2: u32,
}

impl FphfSffTrace {
    pub fn num_edges_p(&self) -> usize {
        self.copy.len()
    }

    pub fn gadget(&self, k: usize) -> u32 {
        self.gadget_base + 9 * k as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SffTwoCffTrace {
    pub num_vertices_s: usize,
    /// Per source edge: first target id (the copy, or e1 of the gadget).
    pub base: Vec<u32>,
    /// Per source edge: 0 if copied, otherwise the commodity it selects.
    pub selective: Vec<u8>,
    pub fixed: Vec<bool>,
    /// Per source edge: first of its two gadget vertices, or NONE.
    pub vertex: Vec<u32>,
}

impl SffTwoCffTrace {
    pub fn num_edges_s(&self) -> usize {
        self.base.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCffTwoCfrTrace {
    pub num_vertices_f: usize,
    pub num_edges_f: usize,
    pub m_f: Int,
    pub fixed: Vec<bool>,
    /// s̄1, t̄1, s̄2, t̄2, z1, z'1, z2, z'2.
    pub new_terminals: [u32; 8],
}

impl TwoCffTwoCfrTrace {
    /// Gadget edge j (1..=7) of source edge k.
    pub fn gadget(&self, k: usize, j: usize) -> usize {
        7 * k + j - 1
    }

    /// Terminal-gadget edge j (0..5) of commodity i.
    pub fn terminal(&self, i: usize, j: usize) -> usize {
        7 * self.num_edges_f + 5 * (i - 1) + j
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCfrTwoCfTrace {
    pub num_vertices_r: usize,
    pub num_edges_r: usize,
    pub r1: Int,
    pub r2: Int,
}
