//! Generalized connectivities κ_k and λ_k and minimality certificates.
//!
//! Instances `(S, r)` are visited with `S` in lexicographic order of its sorted
//! vertex list and `r` ascending inside `S`. The argmin is the first instance
//! attaining the minimum in that order.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, MAX_CANON_ORDER};
use crate::digraph::{Arc, Digraph};
use crate::error::{Error, Result};
use crate::packing::{
    max_packing_capped, packing_value_capped, Mode, SteinerInstance, TreePacking,
};

/// Default order limit for [`connectivity`]; [`connectivity_forced`] lifts it.
pub const DEFAULT_MAX_ORDER: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub k: usize,
    pub mode: Mode,
    pub value: usize,
    pub argmin: SteinerInstance,
    pub witness: TreePacking,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub k: usize,
    pub l: usize,
    pub mode: Mode,
    pub holds: bool,
    pub base_value: usize,
    /// Value of `D - e` for every arc `e`, in arc order.
    pub per_arc: Vec<(Arc, usize)>,
}

fn check_k(d: &Digraph, k: usize) -> Result<()> {
    if k < 2 || k > d.n() {
        return Err(Error::OutOfRange(format!(
            "k = {k} outside 2..={} for a digraph of order {}",
            d.n(),
            d.n()
        )));
    }
    Ok(())
}

fn check_order(d: &Digraph) -> Result<()> {
    if d.n() > DEFAULT_MAX_ORDER {
        return Err(Error::OrderTooLarge {
            n: d.n(),
            max: DEFAULT_MAX_ORDER,
        });
    }
    Ok(())
}

/// All `(S, r)` with `|S| = k` in the documented order.
pub fn instances(n: usize, k: usize) -> impl Iterator<Item = SteinerInstance> {
    (0..n).combinations(k).flat_map(|s| {
        s.clone()
            .into_iter()
            .map(move |r| SteinerInstance::new(&s, r).expect("valid combination"))
    })
}

/// κ_k(D) with argmin and witness.
pub fn kappa_k(d: &Digraph, k: usize) -> Result<ConnectivityReport> {
    connectivity(d, k, Mode::Vertex)
}

/// λ_k(D) with argmin and witness.
pub fn lambda_k(d: &Digraph, k: usize) -> Result<ConnectivityReport> {
    connectivity(d, k, Mode::Arc)
}

/// κ_k or λ_k by `mode`; orders above [`DEFAULT_MAX_ORDER`] are rejected.
pub fn connectivity(d: &Digraph, k: usize, mode: Mode) -> Result<ConnectivityReport> {
    check_order(d)?;
    connectivity_forced(d, k, mode)
}

/// As [`connectivity`] without the order guard.
pub fn connectivity_forced(d: &Digraph, k: usize, mode: Mode) -> Result<ConnectivityReport> {
    check_k(d, k)?;
    let mut best: Option<(usize, TreePacking)> = None;
    for inst in instances(d.n(), k) {
        let cap = best.as_ref().map_or(usize::MAX, |b| b.0);
        let (v, w) = max_packing_capped(d, &inst, mode, cap)?;
        if best.is_none() || v < cap {
            let done = v == 0;
            best = Some((v, w));
            if done {
                break;
            }
        }
    }
    let (value, witness) = best.expect("at least one instance");
    Ok(ConnectivityReport {
        k,
        mode,
        value,
        argmin: witness.instance.clone(),
        witness,
    })
}

/// Value only: `min(value, cap)`, no witness.
pub fn connectivity_value_capped(d: &Digraph, k: usize, mode: Mode, cap: usize) -> Result<usize> {
    check_k(d, k)?;
    if !d.is_strong() {
        return Ok(0);
    }
    let mut m = cap.min(d.min_out_degree()).min(d.min_in_degree());
    for inst in instances(d.n(), k) {
        if m == 0 {
            break;
        }
        m = m.min(packing_value_capped(d, &inst, mode, m));
    }
    Ok(m)
}

/// κ_k or λ_k value only.
pub fn connectivity_value(d: &Digraph, k: usize, mode: Mode) -> Result<usize> {
    connectivity_value_capped(d, k, mode, usize::MAX)
}

/// Minimality in exact form: value `l` and every `D - e` has value `l - 1`.
pub fn is_min_gen(d: &Digraph, k: usize, l: usize, mode: Mode) -> Result<MinimalityCertificate> {
    check_k(d, k)?;
    if l == 0 || l >= d.n() {
        return Err(Error::OutOfRange(format!(
            "l = {l} outside 1..={}",
            d.n().saturating_sub(1)
        )));
    }
    let base = connectivity_value(d, k, mode)?;
    let mut memo: HashMap<_, usize> = HashMap::new();
    let mut per_arc = Vec::with_capacity(d.arc_count());
    for e in d.arcs() {
        let de = d.without_arc(e)?;
        // deleting an arc never raises the value, so capping at `base` is exact
        let v = if d.n() <= MAX_CANON_ORDER {
            let code = canonical_form(&de)?;
            match memo.get(&code) {
                Some(&v) => v,
                None => {
                    let v = connectivity_value_capped(&de, k, mode, base)?;
                    memo.insert(code, v);
                    v
                }
            }
        } else {
            connectivity_value_capped(&de, k, mode, base)?
        };
        per_arc.push((e, v));
    }
    let holds = base == l && per_arc.iter().all(|&(_, v)| v + 1 == l);
    Ok(MinimalityCertificate {
        k,
        l,
        mode,
        holds,
        base_value: base,
        per_arc,
    })
}
