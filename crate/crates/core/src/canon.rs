//! Canonical codes for small digraphs (orbit maximisation over
//! degree-respecting relabelings).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{bits, Digraph};
use crate::error::{Error, Result};

/// Largest order accepted by [`canonical_form`].
pub const MAX_CANON_ORDER: usize = 7;

/// Isomorphism-class key: equal codes iff isomorphic (orders up to
/// [`MAX_CANON_ORDER`]). Ordered by `(n, code)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalCode {
    pub n: u8,
    /// Adjacency matrix of the canonical labeling, bit `u * n + v` for arc `u -> v`.
    pub code: u64,
}

impl CanonicalCode {
    /// The digraph in canonical labeling.
    pub fn to_digraph(self) -> Digraph {
        let n = self.n as usize;
        let rows: Vec<u32> = (0..n)
            .map(|u| ((self.code >> (u * n)) & ((1u64 << n) - 1)) as u32)
            .collect();
        Digraph::from_out_rows(n, &rows)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:x}", self.n, self.code)
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Per-vertex invariant used to fix the block structure of relabelings.
pub(crate) fn vertex_signature(d: &Digraph, v: usize) -> (u32, u32, u32) {
    let digons = (d.out_row(v) & d.in_row(v)).count_ones();
    (d.out_row(v).count_ones(), d.in_row(v).count_ones(), digons)
}

/// True when signatures are non-decreasing along the labels. Every
/// isomorphism class has at least one such labeling.
pub(crate) fn signatures_sorted(d: &Digraph) -> bool {
    (1..d.n()).all(|v| vertex_signature(d, v - 1) <= vertex_signature(d, v))
}

fn code_under(d: &Digraph, perm: &[usize]) -> u64 {
    let n = d.n();
    let mut code = 0u64;
    for u in 0..n {
        let pu = perm[u] * n;
        for v in bits(d.out_row(u)) {
            code |= 1u64 << (pu + perm[v]);
        }
    }
    code
}

/// Canonical code: the maximum adjacency code over all relabelings that
/// place vertices in non-decreasing signature order.
pub fn canonical_form(d: &Digraph) -> Result<CanonicalCode> {
    let n = d.n();
    if n > MAX_CANON_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_CANON_ORDER,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<_> = (0..n).map(|v| vertex_signature(d, v)).collect();
    order.sort_by_key(|&v| sig[v]);
    // position ranges of equal-signature blocks
    let mut block_of_pos = vec![0usize; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (pos, &v) in order.iter().enumerate() {
        if pos == 0 || sig[order[pos - 1]] != sig[v] {
            blocks.push(Vec::new());
        }
        blocks.last_mut().unwrap().push(v);
        block_of_pos[pos] = blocks.len() - 1;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = 0u32;
    let mut best = 0u64;
    assign(
        d,
        0,
        &block_of_pos,
        &blocks,
        &mut perm,
        &mut used,
        &mut best,
    );
    Ok(CanonicalCode {
        n: n as u8,
        code: best,
    })
}

fn assign(
    d: &Digraph,
    pos: usize,
    block_of_pos: &[usize],
    blocks: &[Vec<usize>],
    perm: &mut [usize],
    used: &mut u32,
    best: &mut u64,
) {
    if pos == d.n() {
        let c = code_under(d, perm);
        if c > *best {
            *best = c;
        }
        return;
    }
    for &v in &blocks[block_of_pos[pos]] {
        if *used >> v & 1 == 0 {
            *used |= 1 << v;
            perm[v] = pos;
            assign(d, pos + 1, block_of_pos, blocks, perm, used, best);
            *used &= !(1 << v);
        }
    }
}

/// Isomorphism test through canonical codes.
pub fn isomorphic(a: &Digraph, b: &Digraph) -> Result<bool> {
    Ok(a.n() == b.n() && canonical_form(a)? == canonical_form(b)?)
}
