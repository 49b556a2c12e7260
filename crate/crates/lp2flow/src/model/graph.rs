use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::arith::Int;

/// Directed multigraph with stable edge ids `0..num_edges()` and integer
/// capacities. Distinct capacity values are interned, since every gadget
/// repeats the few capacities of its source element.
#[derive(Clone, Debug, Default)]
pub struct FlowGraph {
    num_vertices: usize,
    tail: Vec<u32>,
    head: Vec<u32>,
    cap: Vec<u32>,
    pool: Vec<Int>,
    index: HashMap<Int, u32>,
}

impl PartialEq for FlowGraph {
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices == other.num_vertices
            && self.tail == other.tail
            && self.head == other.head
            && (0..self.num_edges()).all(|e| self.capacity(e) == other.capacity(e))
    }
}

impl Eq for FlowGraph {}

impl FlowGraph {
    pub fn new(num_vertices: usize) -> Self {
        FlowGraph {
            num_vertices,
            ..Default::default()
        }
    }

    pub fn with_capacity(num_vertices: usize, edges: usize) -> Self {
        FlowGraph {
            num_vertices,
            tail: Vec::with_capacity(edges),
            head: Vec::with_capacity(edges),
            cap: Vec::with_capacity(edges),
            ..Default::default()
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.tail.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.num_vertices += 1;
        self.num_vertices - 1
    }

    /// Adds `k` vertices and returns the id of the first one.
    pub fn add_vertices(&mut self, k: usize) -> usize {
        self.num_vertices += k;
        self.num_vertices - k
    }

    fn intern(&mut self, cap: &Int) -> u32 {
        if let Some(&i) = self.index.get(cap) {
            return i;
        }
        let i = self.pool.len() as u32;
        self.pool.push(cap.clone());
        self.index.insert(cap.clone(), i);
        i
    }

    pub fn add_edge(&mut self, tail: usize, head: usize, cap: &Int) -> usize {
        debug_assert!(tail < self.num_vertices && head < self.num_vertices);
        let c = self.intern(cap);
        self.tail.push(tail as u32);
        self.head.push(head as u32);
        self.cap.push(c);
        self.tail.len() - 1
    }

    pub fn tail(&self, e: usize) -> usize {
        self.tail[e] as usize
    }

    pub fn head(&self, e: usize) -> usize {
        self.head[e] as usize
    }

    pub fn capacity(&self, e: usize) -> &Int {
        &self.pool[self.cap[e] as usize]
    }

    pub fn edge(&self, e: usize) -> (usize, usize, &Int) {
        (self.tail(e), self.head(e), self.capacity(e))
    }

    pub fn max_capacity(&self) -> Int {
        let mut used = vec![false; self.pool.len()];
        for c in &self.cap {
            used[*c as usize] = true;
        }
        self.pool
            .iter()
            .zip(used)
            .filter(|(_, u)| *u)
            .map(|(v, _)| v.clone())
            .max()
            .unwrap_or_else(Int::zero)
    }

    pub fn total_capacity(&self) -> Int {
        let mut counts = vec![0u64; self.pool.len()];
        for c in &self.cap {
            counts[*c as usize] += 1;
        }
        self.pool
            .iter()
            .zip(counts)
            .fold(Int::zero(), |acc, (v, k)| acc + v * Int::from(k))
    }

    pub fn has_nonpositive_capacity(&self) -> Option<usize> {
        (0..self.num_edges()).find(|&e| !self.capacity(e).is_positive())
    }

    /// Edges leaving each vertex, in id order.
    pub fn out_edges(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.num_vertices];
        for e in 0..self.num_edges() {
            out[self.tail[e] as usize].push(e as u32);
        }
        out
    }

    pub fn in_edges(&self) -> Vec<Vec<u32>> {
        let mut inc = vec![Vec::new(); self.num_vertices];
        for e in 0..self.num_edges() {
            inc[self.head[e] as usize].push(e as u32);
        }
        inc
    }
}
