//! Best-first enumeration of product coefficients.
//!
//! The coefficients of a tensor product are indexed by a lattice of rank
//! tuples. Each operand is nonincreasing, so a node's value dominates every
//! node above it, and popping from a max-heap seeded at `(1, ..., 1)` yields
//! the products in nonincreasing order. Nodes are deduplicated by index
//! tuple; ties are broken towards the lexicographically smaller tuple.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use super::SchmidtSpectrum;

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub ln_value: f64,
    pub index: Vec<u32>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ln_value
            .total_cmp(&other.ln_value)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Lazily materialised log-coefficients of one operand.
#[derive(Debug)]
struct Operand {
    spectrum: SchmidtSpectrum,
    direct: bool,
    cache: Vec<f64>,
}

impl Operand {
    fn new(spectrum: SchmidtSpectrum) -> Self {
        let direct = spectrum.has_direct_access();
        Operand {
            spectrum,
            direct,
            cache: Vec::new(),
        }
    }

    /// `ln` of the operand's `k`-th largest coefficient (1-based).
    fn ln_value(&mut self, k: usize) -> f64 {
        if self.direct {
            return self.spectrum.ln_rank_coefficient(k);
        }
        if k > self.cache.len() {
            let want = (2 * k).max(64);
            self.cache = self
                .spectrum
                .head(want)
                .into_iter()
                .map(|v| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY })
                .collect();
        }
        self.cache.get(k - 1).copied().unwrap_or(f64::NEG_INFINITY)
    }
}

/// Cursor over the coefficients of `factor_1 ⊗ ... ⊗ factor_m` in
/// nonincreasing order. Cursors are per-caller state.
#[derive(Debug)]
pub(crate) struct ProductEnumerator {
    operands: Vec<Operand>,
    heap: BinaryHeap<Node>,
    visited: HashSet<Vec<u32>>,
}

impl ProductEnumerator {
    pub fn new(factors: Vec<SchmidtSpectrum>) -> Self {
        let mut operands: Vec<Operand> = factors.into_iter().map(Operand::new).collect();
        let start = vec![1u32; operands.len()];
        let ln_value = operands.iter_mut().map(|o| o.ln_value(1)).sum::<f64>();
        let mut heap = BinaryHeap::new();
        let mut visited = HashSet::new();
        visited.insert(start.clone());
        if ln_value > f64::NEG_INFINITY {
            heap.push(Node {
                ln_value,
                index: start,
            });
        }
        ProductEnumerator {
            operands,
            heap,
            visited,
        }
    }

    fn ln_at(&mut self, index: &[u32]) -> f64 {
        let mut acc = 0.0;
        for (op, &i) in self.operands.iter_mut().zip(index) {
            let v = op.ln_value(i as usize);
            if v == f64::NEG_INFINITY {
                return v;
            }
            acc += v;
        }
        acc
    }

    /// Pops the next largest product.
    pub fn next_node(&mut self) -> Option<Node> {
        let node = self.heap.pop()?;
        for c in 0..node.index.len() {
            let mut succ = node.index.clone();
            succ[c] += 1;
            if self.visited.contains(&succ) {
                continue;
            }
            let ln_value = self.ln_at(&succ);
            self.visited.insert(succ.clone());
            if ln_value > f64::NEG_INFINITY {
                self.heap.push(Node {
                    ln_value,
                    index: succ,
                });
            }
        }
        Some(node)
    }

    /// Nodes pushed but not yet popped. Every unpopped lattice point with a
    /// positive value lies above one of them.
    pub fn frontier(&self) -> impl Iterator<Item = &Node> {
        self.heap.iter()
    }
}

impl Iterator for ProductEnumerator {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        self.next_node().map(|n| n.ln_value.exp())
    }
}
