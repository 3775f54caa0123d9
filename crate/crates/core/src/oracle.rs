//! Brute-force packing oracle, independent of the solver's search.
//!
//! Every minimal (S, r)-tree is listed as a parent function: for each vertex
//! set `X ⊇ S` every choice of an in-neighbour inside `X` for each non-root
//! vertex is tried, and the choice is kept when it is acyclic and every
//! non-terminal has a child. A packing of size `l` is then a set of `l`
//! pairwise compatible trees, found by plain nested search.

use crate::digraph::{bits, Digraph};
use crate::error::{Error, Result};
use crate::packing::{Mode, SteinerInstance};

/// Largest order accepted by [`packing_oracle`].
pub const ORACLE_MAX_ORDER: usize = 6;
/// Largest packing size accepted by [`packing_oracle`].
pub const ORACLE_MAX_TREES: usize = 5;

#[derive(Clone, Copy)]
struct Candidate {
    arcs: u64,
    inner: u32,
}

fn arc_bit(n: usize, u: usize, v: usize) -> u64 {
    1u64 << (u * n + v)
}

fn minimal_trees(d: &Digraph, inst: &SteinerInstance) -> Vec<Candidate> {
    let n = d.n();
    let r = inst.root();
    let terms = inst.mask();
    let others = ((1u32 << n) - 1) & !terms;
    let mut out = Vec::new();
    // enumerate subsets of the non-terminals
    let mut extra = 0u32;
    loop {
        let x = terms | extra;
        let members: Vec<usize> = bits(x & !(1 << r)).collect();
        let mut parent = vec![usize::MAX; n];
        choose_parents(d, r, x, terms, &members, 0, &mut parent, &mut out);
        if extra == others {
            break;
        }
        extra = (extra.wrapping_sub(others)) & others;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn choose_parents(
    d: &Digraph,
    r: usize,
    x: u32,
    terms: u32,
    members: &[usize],
    i: usize,
    parent: &mut [usize],
    out: &mut Vec<Candidate>,
) {
    if i == members.len() {
        let n = d.n();
        // acyclic: walking up from every member reaches r
        for &v in members {
            let mut w = v;
            let mut steps = 0;
            while w != r {
                w = parent[w];
                steps += 1;
                if steps > n {
                    return;
                }
            }
        }
        let mut has_child = 0u32;
        let mut arcs = 0u64;
        for &v in members {
            has_child |= 1 << parent[v];
            arcs |= arc_bit(n, parent[v], v);
        }
        let inner = x & !terms;
        if inner & !has_child != 0 {
            return;
        }
        out.push(Candidate { arcs, inner });
        return;
    }
    let v = members[i];
    for p in bits(d.in_row(v) & x) {
        parent[v] = p;
        choose_parents(d, r, x, terms, members, i + 1, parent, out);
    }
}

fn compatible(a: &Candidate, b: &Candidate, mode: Mode) -> bool {
    a.arcs & b.arcs == 0 && (mode == Mode::Arc || a.inner & b.inner == 0)
}

fn extend(cands: &[Candidate], pool: &[usize], need: usize, mode: Mode) -> bool {
    if need == 0 {
        return true;
    }
    for (i, &a) in pool.iter().enumerate() {
        let rest: Vec<usize> = pool[i + 1..]
            .iter()
            .copied()
            .filter(|&b| compatible(&cands[a], &cands[b], mode))
            .collect();
        if rest.len() + 1 >= need && extend(cands, &rest, need - 1, mode) {
            return true;
        }
    }
    false
}

/// True iff `l` pairwise disjoint (S, r)-trees exist, by exhaustive
/// enumeration. Guarded to `n <= 6`, `l <= 5`.
pub fn packing_oracle(d: &Digraph, inst: &SteinerInstance, mode: Mode, l: usize) -> Result<bool> {
    if d.n() > ORACLE_MAX_ORDER {
        return Err(Error::OrderTooLarge {
            n: d.n(),
            max: ORACLE_MAX_ORDER,
        });
    }
    if l > ORACLE_MAX_TREES {
        return Err(Error::OutOfRange(format!(
            "oracle supports at most {ORACLE_MAX_TREES} trees, asked for {l}"
        )));
    }
    if inst.terminals().iter().any(|&v| v >= d.n()) {
        return Err(Error::InvalidInstance(
            "terminal outside the digraph".into(),
        ));
    }
    if l == 0 {
        return Ok(true);
    }
    let cands = minimal_trees(d, inst);
    let pool: Vec<usize> = (0..cands.len()).collect();
    Ok(extend(&cands, &pool, l, mode))
}
