#![allow(dead_code)]

use lp2flow::arith::{Int, Rat};
use lp2flow::model::{LpInstance, SparseIntMatrix};
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits of a random LP.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_n: usize,
    pub max_m: usize,
    pub max_entry: i64,
    pub max_nnz: usize,
}

pub const SMALL: Shape = Shape {
    max_n: 6,
    max_m: 6,
    max_entry: 9,
    max_nnz: 20,
};

pub const TINY: Shape = Shape {
    max_n: 3,
    max_m: 3,
    max_entry: 3,
    max_nnz: 9,
};

fn nonzero(rng: &mut impl Rng, k: i64) -> i64 {
    loop {
        let v = rng.gen_range(-k..=k);
        if v != 0 {
            return v;
        }
    }
}

/// Random sparse matrix with a nonzero in every row and column.
pub fn random_matrix(rng: &mut impl Rng, m: usize, n: usize, k: i64, max_nnz: usize) -> SparseIntMatrix {
    let cover = m.max(n);
    let mut rows: Vec<usize> = (0..cover).map(|t| t % m).collect();
    let mut cols: Vec<usize> = (0..cover).map(|t| t % n).collect();
    shuffle(rng, &mut rows);
    shuffle(rng, &mut cols);
    let mut used = vec![vec![false; n]; m];
    let mut triples = Vec::new();
    for (&i, &j) in rows.iter().zip(&cols) {
        if !used[i][j] {
            used[i][j] = true;
            triples.push((i as u32, j as u32, Int::from(nonzero(rng, k))));
        }
    }
    let cap = max_nnz.clamp(cover, m * n);
    let target = rng.gen_range(triples.len()..=cap.max(triples.len()));
    while triples.len() < target {
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..n));
        if !used[i][j] {
            used[i][j] = true;
            triples.push((i as u32, j as u32, Int::from(nonzero(rng, k))));
        }
    }
    SparseIntMatrix::from_triples(m, n, triples).unwrap()
}

fn shuffle<T>(rng: &mut impl Rng, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
}

pub fn random_lp(rng: &mut impl Rng, shape: Shape, r: i64) -> LpInstance {
    let n = rng.gen_range(1..=shape.max_n);
    let m = rng.gen_range(1..=shape.max_m);
    let k = shape.max_entry;
    let a = random_matrix(rng, m, n, k, shape.max_nnz);
    LpInstance {
        a,
        b: (0..m).map(|_| Int::from(rng.gen_range(-k..=k))).collect(),
        c: (0..n).map(|_| Int::from(rng.gen_range(-k..=k))).collect(),
        k: Int::from(rng.gen_range(-k..=k)),
        r: Int::from(r),
    }
}

/// LP that is feasible by construction, with the point used to build it.
pub fn feasible_lp(rng: &mut impl Rng, shape: Shape) -> (LpInstance, Vec<Rat>) {
    let n = rng.gen_range(1..=shape.max_n);
    let m = rng.gen_range(1..=shape.max_m);
    let k = shape.max_entry;
    let a = random_matrix(rng, m, n, k, shape.max_nnz);
    let x: Vec<Rat> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.3) {
                Rat::zero()
            } else {
                Rat::new(Int::from(rng.gen_range(0..=6)), Int::from(rng.gen_range(1..=3)))
            }
        })
        .collect();
    let ax = a.mul_vec(&x);
    let b = ax
        .iter()
        .map(|v| v.ceil().to_integer() + Int::from(rng.gen_range(0..=2)))
        .collect();
    let c: Vec<Int> = (0..n).map(|_| Int::from(rng.gen_range(-k..=k))).collect();
    let cx: Rat = c.iter().zip(&x).map(|(c, v)| Rat::from_integer(c.clone()) * v).sum();
    let norm: Rat = x.iter().sum();
    let r = norm.ceil().to_integer().max(Int::from(1));
    let lp = LpInstance {
        a,
        b,
        c,
        k: cx.floor().to_integer(),
        r,
    };
    (lp, x)
}

/// Ceil of a / b for positive b.
pub fn ceil_div(a: &Int, b: &Int) -> Int {
    a.div_ceil(b)
}
