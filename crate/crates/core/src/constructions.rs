//! Explicit constructions: the cycle-deletion families and their tree
//! packings, Hamiltonian decompositions of the complete digraph, the layered
//! cycle digraphs and the join digraphs `H1`, `H2`.
//!
//! Along a deleted cycle the successor of a vertex wraps around, so in a
//! part `(a, b, c)` the successor of `c` is `a`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::digraph::{Arc, Digraph};
use crate::error::{Error, Result};
use crate::packing::{verify_packing, Mode, OutTree, SteinerInstance, TreePacking};

/// Vertex-disjoint deleted cycles, plus at most one uncovered vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclePartition {
    n: usize,
    parts: Vec<Vec<usize>>,
    uncovered: Option<usize>,
}

/// Which of the two deletion families a partition describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeletionFamily {
    /// The cycles cover every vertex.
    Covering,
    /// The cycles cover all vertices but one.
    NearCovering,
}

impl CyclePartition {
    /// Validates and normalizes: each part is rotated to start at its least
    /// vertex and parts are sorted by that vertex.
    pub fn new(n: usize, parts: Vec<Vec<usize>>, uncovered: Option<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no cycles".into()));
        }
        let mut seen = vec![false; n];
        let mut mark = |v: usize| -> Result<()> {
            if v >= n {
                return Err(Error::InvalidPartition(format!(
                    "vertex {v} out of range 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPartition(format!("vertex {v} used twice")));
            }
            Ok(())
        };
        for p in &parts {
            if p.len() < 2 {
                return Err(Error::InvalidPartition(format!(
                    "part {p:?} shorter than 2"
                )));
            }
            for &v in p {
                mark(v)?;
            }
        }
        if let Some(w) = uncovered {
            mark(w)?;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("vertex {v} not covered")));
        }
        let mut parts: Vec<Vec<usize>> = parts
            .into_iter()
            .map(|mut p| {
                let i = (0..p.len()).min_by_key(|&i| p[i]).unwrap();
                p.rotate_left(i);
                p
            })
            .collect();
        parts.sort();
        Ok(CyclePartition {
            n,
            parts,
            uncovered,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn uncovered(&self) -> Option<usize> {
        self.uncovered
    }

    pub fn family(&self) -> DeletionFamily {
        match self.uncovered {
            None => DeletionFamily::Covering,
            Some(_) => DeletionFamily::NearCovering,
        }
    }

    fn locate(&self, v: usize) -> Option<(usize, usize)> {
        self.parts
            .iter()
            .enumerate()
            .find_map(|(i, p)| p.iter().position(|&x| x == v).map(|j| (i, j)))
    }

    /// Successor along the deleted cycle through `v`.
    pub fn succ(&self, v: usize) -> Option<usize> {
        self.locate(v).map(|(i, j)| {
            let p = &self.parts[i];
            p[(j + 1) % p.len()]
        })
    }

    /// Predecessor along the deleted cycle through `v`.
    pub fn pred(&self, v: usize) -> Option<usize> {
        self.locate(v).map(|(i, j)| {
            let p = &self.parts[i];
            p[(j + p.len() - 1) % p.len()]
        })
    }

    /// Length of the deleted cycle through `v`.
    pub fn cycle_len(&self, v: usize) -> Option<usize> {
        self.locate(v).map(|(i, _)| self.parts[i].len())
    }

    /// The deleted arc set `M`, sorted.
    pub fn deleted_arcs(&self) -> Vec<Arc> {
        let mut m: Vec<Arc> = (0..self.n)
            .filter_map(|v| self.succ(v).map(|s| (v, s)))
            .collect();
        m.sort_unstable();
        m
    }

    /// Text form `0,1,2/3,4` with `+w` for an uncovered vertex.
    pub fn to_spec_string(&self) -> String {
        let mut s = self
            .parts
            .iter()
            .map(|p| {
                p.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("/");
        if let Some(w) = self.uncovered {
            s.push_str(&format!("+{w}"));
        }
        s
    }

    /// Every partition of order `n`: all cycle covers of `0..n` and, for each
    /// vertex `w`, all cycle covers of the remaining vertices.
    pub fn all(n: usize) -> Vec<CyclePartition> {
        let mut out = Vec::new();
        let everything: Vec<usize> = (0..n).collect();
        for parts in cycle_covers(&everything) {
            out.push(CyclePartition::new(n, parts, None).expect("cover"));
        }
        for w in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&v| v != w).collect();
            for parts in cycle_covers(&rest) {
                out.push(CyclePartition::new(n, parts, Some(w)).expect("cover"));
            }
        }
        out
    }
}

/// All ways to cover `vs` by directed cycles of length at least 2, each
/// listed once (digons have a single orientation).
fn cycle_covers(vs: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if vs.is_empty() {
        return vec![vec![]];
    }
    let a = vs[0];
    let rest = &vs[1..];
    let mut out = Vec::new();
    // choose the ordered sequence following `a` on its cycle
    fn arrangements(
        pool: &[usize],
        cur: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for i in 0..pool.len() {
            if !used[i] {
                used[i] = true;
                cur.push(pool[i]);
                arrangements(pool, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut seqs = Vec::new();
    arrangements(
        rest,
        &mut Vec::new(),
        &mut vec![false; rest.len()],
        &mut seqs,
    );
    for seq in seqs {
        // a digon (a, b) is the same as (b, a); keep only sequences read from a
        let mut cycle = vec![a];
        cycle.extend(&seq);
        let left: Vec<usize> = rest.iter().copied().filter(|v| !seq.contains(v)).collect();
        for mut cover in cycle_covers(&left) {
            cover.insert(0, cycle.clone());
            out.push(cover);
        }
    }
    out
}

/// `↔K_n - M` for the deleted cycles of `cp`.
pub fn build_deletion_family(cp: &CyclePartition) -> Result<Digraph> {
    Digraph::complete(cp.n())?.delete_arcs(&cp.deleted_arcs())
}

/// Recovers the partition when `↔K_n - D` is a disjoint union of cycles
/// covering all vertices or all but one.
pub fn recognize_deletion_family(d: &Digraph) -> Option<CyclePartition> {
    let n = d.n();
    let mut succ = vec![None; n];
    let mut pred = vec![None; n];
    for u in 0..n {
        for v in 0..n {
            if u != v && !d.has_arc(u, v) {
                if succ[u].is_some() || pred[v].is_some() {
                    return None;
                }
                succ[u] = Some(v);
                pred[v] = Some(u);
            }
        }
    }
    let mut uncovered = None;
    for v in 0..n {
        match (succ[v], pred[v]) {
            (None, None) => {
                if uncovered.replace(v).is_some() {
                    return None;
                }
            }
            (Some(_), Some(_)) => {}
            _ => return None,
        }
    }
    let mut parts = Vec::new();
    let mut done = vec![false; n];
    for v in 0..n {
        if done[v] || succ[v].is_none() {
            continue;
        }
        let mut part = Vec::new();
        let mut x = v;
        while !done[x] {
            done[x] = true;
            part.push(x);
            x = succ[x]?;
        }
        parts.push(part);
    }
    CyclePartition::new(n, parts, uncovered).ok()
}

fn check_member(d: &Digraph, cp: &CyclePartition) -> Result<()> {
    if build_deletion_family(cp)? != *d {
        return Err(Error::PartitionMismatch);
    }
    Ok(())
}

fn arc_packing(r: usize, trees: Vec<Vec<Arc>>, mode: Mode, terms: &[usize]) -> Result<TreePacking> {
    Ok(TreePacking {
        instance: SteinerInstance::new(terms, r)?,
        mode,
        trees: trees.into_iter().map(|a| OutTree::new(r, a)).collect(),
    })
}

fn branchings(cp: &CyclePartition, r: usize) -> Vec<Vec<Arc>> {
    let n = cp.n();
    let mut trees = Vec::with_capacity(n.saturating_sub(2));
    match cp.uncovered() {
        Some(w) if w == r => {
            let u1 = cp.parts()[0][0];
            let u2 = cp.succ(u1).unwrap();
            let mut t = vec![(w, u1), (w, u2)];
            t.extend(
                (0..n)
                    .filter(|&v| ![u1, u2, w].contains(&v))
                    .map(|v| (u1, v)),
            );
            trees.push(t);
            for x in (0..n).filter(|&x| ![u1, u2, w].contains(&x)) {
                let sx = cp.succ(x).unwrap();
                let mut t = vec![(w, x), (x, u2), (u2, sx)];
                t.extend(
                    (0..n)
                        .filter(|&v| ![u2, x, sx, w].contains(&v))
                        .map(|v| (x, v)),
                );
                trees.push(t);
            }
        }
        _ => {
            let u1 = r;
            let u2 = cp.succ(r).unwrap();
            for x in (0..n).filter(|&x| x != u1 && x != u2) {
                match cp.succ(x) {
                    Some(sx) if sx != u1 => {
                        let mut t = vec![(u1, x), (x, u2), (u2, sx)];
                        t.extend(
                            (0..n)
                                .filter(|&v| ![u1, u2, x, sx].contains(&v))
                                .map(|v| (x, v)),
                        );
                        trees.push(t);
                    }
                    _ => {
                        let mut t = vec![(u1, x)];
                        t.extend((0..n).filter(|&v| v != u1 && v != x).map(|v| (x, v)));
                        trees.push(t);
                    }
                }
            }
        }
    }
    trees
}

/// `n - 2` arc-disjoint out-branchings rooted at `r`.
pub fn lemma5_branchings(d: &Digraph, cp: &CyclePartition, r: usize) -> Result<TreePacking> {
    check_member(d, cp)?;
    if r >= d.n() {
        return Err(Error::InvalidInstance(format!("root {r} out of range")));
    }
    let all: Vec<usize> = (0..d.n()).collect();
    arc_packing(r, branchings(cp, r), Mode::Arc, &all)
}

/// Relabels a sub-digraph on `keep` back to original labels.
fn lift(trees: Vec<Vec<Arc>>, keep: &[usize]) -> Vec<Vec<Arc>> {
    trees
        .into_iter()
        .map(|t| t.into_iter().map(|(u, v)| (keep[u], keep[v])).collect())
        .collect()
}

/// Branchings of `sub` (labels indexing `keep`) rooted at original `r`,
/// lifted to original labels, together with the recognized partition.
fn sub_branchings(
    sub: &Digraph,
    keep: &[usize],
    r: usize,
) -> Result<(Vec<Vec<Arc>>, CyclePartition)> {
    let cp = recognize_deletion_family(sub)
        .ok_or_else(|| Error::Impossible("reduced digraph is not in a deletion family".into()))?;
    let r2 = keep.iter().position(|&v| v == r).unwrap();
    Ok((lift(branchings(&cp, r2), keep), cp))
}

/// `n - 2` internally disjoint (S, r)-trees for `|S| = n - 1`.
///
/// Fails with [`Error::Impossible`] when the omitted vertex lies on a deleted
/// digon of a covering partition and the root is its partner: then the root's
/// out-arcs all end in `S`, and fewer than `n - 2` such trees exist.
pub fn lemma6_trees(
    d: &Digraph,
    cp: &CyclePartition,
    s: &[usize],
    r: usize,
) -> Result<TreePacking> {
    check_member(d, cp)?;
    let n = d.n();
    let inst = SteinerInstance::new(s, r)?;
    inst.check_against(d)?;
    if inst.k() + 1 != n {
        return Err(Error::InvalidInstance(format!(
            "terminal set must have {} vertices, has {}",
            n - 1,
            inst.k()
        )));
    }
    let keep = inst.terminals().to_vec();
    let z = (0..n).find(|v| !keep.contains(v)).unwrap();
    let others = |skip: &[usize]| -> Vec<usize> {
        keep.iter().copied().filter(|v| !skip.contains(v)).collect()
    };
    let (sub, map) = d.induced(&keep)?;
    let idx = |v: usize| map[v].unwrap();

    let mut trees;
    let star: Vec<Arc>;
    if cp.uncovered() == Some(z) {
        trees = sub_branchings(&sub, &keep, r)?.0;
        star = std::iter::once((r, z))
            .chain(others(&[r]).into_iter().map(|v| (z, v)))
            .collect();
    } else if cp.cycle_len(z).unwrap() >= 3 {
        let p = cp.pred(z).unwrap();
        let q = cp.succ(z).unwrap();
        let reduced = sub.without_arc((idx(p), idx(q)))?;
        trees = sub_branchings(&reduced, &keep, r)?.0;
        star = if r == p {
            [(p, q), (q, z)]
                .into_iter()
                .chain(others(&[p, q]).into_iter().map(|v| (z, v)))
                .collect()
        } else if r == q {
            std::iter::once((q, z))
                .chain(others(&[q]).into_iter().map(|v| (z, v)))
                .collect()
        } else {
            [(r, z), (p, q)]
                .into_iter()
                .chain(others(&[r, q]).into_iter().map(|v| (z, v)))
                .collect()
        };
    } else {
        let p = cp.succ(z).unwrap();
        match cp.uncovered() {
            Some(w) => {
                let reduced = sub.delete_arcs(&[(idx(p), idx(w)), (idx(w), idx(p))])?;
                trees = sub_branchings(&reduced, &keep, r)?.0;
                star = if r == w {
                    [(w, p), (w, z)]
                        .into_iter()
                        .chain(others(&[p, w]).into_iter().map(|v| (z, v)))
                        .collect()
                } else if r == p {
                    [(p, w), (w, z)]
                        .into_iter()
                        .chain(others(&[p, w]).into_iter().map(|v| (z, v)))
                        .collect()
                } else {
                    [(r, z), (w, p)]
                        .into_iter()
                        .chain(others(&[r, p]).into_iter().map(|v| (z, v)))
                        .collect()
                };
            }
            None => {
                if r == p {
                    return Err(Error::Impossible(format!(
                        "root {r} shares a deleted digon with the omitted vertex {z}"
                    )));
                }
                let (t, subcp) = sub_branchings(&sub, &keep, r)?;
                trees = t;
                let u2 = keep[subcp.succ(idx(r)).unwrap()];
                star = [(r, z), (u2, p)]
                    .into_iter()
                    .chain(others(&[r, p]).into_iter().map(|v| (z, v)))
                    .collect();
            }
        }
    }
    trees.push(star);
    arc_packing(r, trees, Mode::Vertex, &keep)
}

/// `n - 2` internally disjoint (S, r)-trees for `S = {r, v}`.
pub fn lemma7_trees(
    d: &Digraph,
    cp: &CyclePartition,
    s: &[usize],
    r: usize,
) -> Result<TreePacking> {
    check_member(d, cp)?;
    let inst = SteinerInstance::new(s, r)?;
    inst.check_against(d)?;
    if inst.k() != 2 {
        return Err(Error::InvalidInstance(format!(
            "terminal set must have 2 vertices, has {}",
            inst.k()
        )));
    }
    let n = d.n();
    let v = inst.terminals().iter().copied().find(|&x| x != r).unwrap();
    let mut trees = Vec::new();
    if cp.succ(r) == Some(v) {
        for u in (0..n).filter(|&u| u != r && u != v) {
            trees.push(vec![(r, u), (u, v)]);
        }
    } else {
        trees.push(vec![(r, v)]);
        let a = cp.succ(r);
        let b = cp.pred(v);
        for u in (0..n).filter(|&u| u != r && u != v && Some(u) != a && Some(u) != b) {
            trees.push(vec![(r, u), (u, v)]);
        }
        match (a, b) {
            (Some(a), Some(b)) if a != b => trees.push(vec![(r, b), (b, a), (a, v)]),
            _ => {}
        }
    }
    arc_packing(r, trees, Mode::Vertex, inst.terminals())
}

/// Hamiltonian dicycles partitioning the arcs of `↔K_n`; each cycle is a
/// vertex sequence starting at 0.
pub fn tillson_decomposition(n: usize) -> Result<Vec<Vec<usize>>> {
    match n {
        0 | 1 => Err(Error::OutOfRange(format!("order {n} has no Hamiltonian dicycle"))),
        4 | 6 => Err(Error::Impossible(format!(
            "the complete digraph of order {n} has no Hamiltonian decomposition (exists only for n other than 4 and 6)"
        ))),
        2 => Ok(vec![vec![0, 1]]),
        _ if n % 2 == 1 => Ok(walecki_doubled(n)),
        _ if n <= MAX_TILLSON_SEARCH => search_decomposition(n)
            .ok_or_else(|| Error::Impossible(format!("no decomposition found for order {n}"))),
        _ => Err(Error::OrderTooLarge {
            n,
            max: MAX_TILLSON_SEARCH,
        }),
    }
}

/// Largest even order handled by the decomposition search.
pub const MAX_TILLSON_SEARCH: usize = 10;

fn rotate_to_zero(mut c: Vec<usize>) -> Vec<usize> {
    let i = c.iter().position(|&v| v == 0).unwrap();
    c.rotate_left(i);
    c
}

fn walecki_doubled(n: usize) -> Vec<Vec<usize>> {
    let m = (n - 1) / 2;
    let inf = n - 1;
    let modn = 2 * m;
    let mut out = Vec::new();
    for i in 0..m {
        let mut c = vec![inf, i];
        for j in 1..=m {
            c.push((i + j) % modn);
            if c.len() < n {
                c.push((i + modn - j) % modn);
            }
        }
        c.truncate(n);
        let rev: Vec<usize> = c.iter().rev().copied().collect();
        out.push(rotate_to_zero(c));
        out.push(rotate_to_zero(rev));
    }
    out
}

fn search_decomposition(n: usize) -> Option<Vec<Vec<usize>>> {
    let mut rows = [0u32; 16];
    for (u, row) in rows.iter_mut().enumerate().take(n) {
        *row = ((1u32 << n) - 1) & !(1 << u);
    }
    let first: Vec<usize> = (0..n).collect();
    for i in 0..n {
        rows[i] &= !(1 << ((i + 1) % n));
    }
    let mut cycles = vec![first];
    if decompose_rest(n, &mut rows, &mut cycles) {
        Some(cycles)
    } else {
        None
    }
}

fn decompose_rest(n: usize, rows: &mut [u32; 16], cycles: &mut Vec<Vec<usize>>) -> bool {
    if rows[0] == 0 {
        return true;
    }
    // cycles are unordered: the next one uses 0's least remaining out-arc
    let x = rows[0].trailing_zeros() as usize;
    let mut path = vec![0, x];
    rows[0] &= !(1 << x);
    let ok = extend_cycle(n, rows, &mut path, 1 | 1 << x, cycles);
    rows[0] |= 1 << x;
    ok
}

fn extend_cycle(
    n: usize,
    rows: &mut [u32; 16],
    path: &mut Vec<usize>,
    on: u32,
    cycles: &mut Vec<Vec<usize>>,
) -> bool {
    let c = *path.last().unwrap();
    if path.len() == n {
        if rows[c] & 1 == 0 {
            return false;
        }
        rows[c] &= !1;
        cycles.push(path.clone());
        if decompose_rest(n, rows, cycles) {
            return true;
        }
        cycles.pop();
        rows[c] |= 1;
        return false;
    }
    let mut cand = rows[c] & !on;
    while cand != 0 {
        let y = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        rows[c] &= !(1 << y);
        path.push(y);
        if extend_cycle(n, rows, path, on | 1 << y, cycles) {
            return true;
        }
        path.pop();
        rows[c] |= 1 << y;
    }
    false
}

/// Union of the arcs of the given vertex cycles on `0..n`.
pub fn cycles_digraph(n: usize, cycles: &[Vec<usize>]) -> Result<Digraph> {
    let arcs: Vec<Arc> = cycles
        .iter()
        .flat_map(|c| (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()])))
        .collect();
    Digraph::new(n, &arcs)
}

/// The union `D_l` of `l` arc-disjoint Hamiltonian dicycles of `↔K_n`.
/// Orders 4 and 6 use fixed cycle lists and the complete digraph at the top.
pub fn layered_cycle_digraph(n: usize, l: usize) -> Result<Digraph> {
    if n < 2 || l == 0 || l >= n {
        return Err(Error::OutOfRange(format!(
            "l = {l} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    let cycles = match n {
        4 => vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0]],
        6 => vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![5, 4, 3, 2, 1, 0],
            vec![0, 2, 4, 1, 5, 3],
            vec![3, 5, 1, 4, 2, 0],
        ],
        _ => tillson_decomposition(n)?,
    };
    if l > cycles.len() {
        return Digraph::complete(n);
    }
    cycles_digraph(n, &cycles[..l])
}

/// `n` and `l` for the join digraphs; `W = 0..l`, `U = l..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JoinSpec {
    pub n: usize,
    pub l: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JoinVariant {
    H1,
    H2,
}

impl JoinSpec {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        if l == 0 || l >= n {
            return Err(Error::OutOfRange(format!(
                "l = {l} outside 1..={}",
                n.saturating_sub(1)
            )));
        }
        Ok(JoinSpec { n, l })
    }

    /// Largest `k` for which the packing construction applies.
    pub fn max_k(&self, variant: JoinVariant) -> usize {
        match variant {
            JoinVariant::H1 => self.n.saturating_sub(self.l),
            JoinVariant::H2 => self.n.saturating_sub(2 * self.l),
        }
    }

    pub fn build(&self, variant: JoinVariant) -> Result<Digraph> {
        match variant {
            JoinVariant::H1 => build_h1(self),
            JoinVariant::H2 => build_h2(self),
        }
    }
}

/// Symmetric join of `K_l` on `W` with an independent set `U`.
pub fn build_h1(spec: &JoinSpec) -> Result<Digraph> {
    let mut d = build_h2(spec)?;
    for u in 0..spec.l {
        for v in 0..spec.l {
            if u != v {
                d.insert(u, v);
            }
        }
    }
    Ok(d)
}

/// Complete bipartite digraph between `W` and `U`.
pub fn build_h2(spec: &JoinSpec) -> Result<Digraph> {
    let JoinSpec { n, l } = *spec;
    let mut arcs = Vec::with_capacity(2 * l * (n - l));
    for w in 0..l {
        for u in l..n {
            arcs.push((w, u));
            arcs.push((u, w));
        }
    }
    Digraph::new(n, &arcs)
}

/// Orients an undirected tree away from `r`.
fn orient(edges: &[(usize, usize)], r: usize, n: usize) -> Vec<Arc> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    seen[r] = true;
    let mut q = VecDeque::from([r]);
    let mut arcs = Vec::new();
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                arcs.push((x, y));
                q.push_back(y);
            }
        }
    }
    arcs
}

/// `l` internally disjoint (S, r)-trees in `H1` or `H2`.
pub fn prop13_trees(
    h: &Digraph,
    spec: &JoinSpec,
    inst: &SteinerInstance,
    variant: JoinVariant,
) -> Result<TreePacking> {
    if *h != spec.build(variant)? {
        return Err(Error::InvalidInstance(
            "digraph does not match the join spec".into(),
        ));
    }
    inst.check_against(h)?;
    let k = inst.k();
    if k > spec.max_k(variant) {
        return Err(Error::OutOfRange(format!(
            "k = {k} exceeds {} for {variant:?} with n = {}, l = {}",
            spec.max_k(variant),
            spec.n,
            spec.l
        )));
    }
    let JoinSpec { n, l } = *spec;
    let terms = inst.terminals();
    // w[0..s] and u[0..k-s] are the terminals, then the rest ascending
    let order = |range: std::ops::Range<usize>| -> Vec<usize> {
        let (mut a, b): (Vec<usize>, Vec<usize>) = range.partition(|v| terms.contains(v));
        a.extend(b);
        a
    };
    let w = order(0..l);
    let u = order(l..n);
    let s = terms.iter().filter(|&&v| v < l).count();
    let ks = k - s;
    let mut trees = Vec::with_capacity(l);
    for i in 0..l {
        let mut edges: Vec<(usize, usize)> = u[..ks].iter().map(|&x| (w[i], x)).collect();
        if i < s {
            let hub = u[ks + i];
            edges.extend(w[..s].iter().map(|&x| (hub, x)));
        } else {
            match variant {
                JoinVariant::H1 => edges.extend(w[..s].iter().map(|&x| (w[i], x))),
                JoinVariant::H2 => {
                    let hub = u[k + i - s];
                    edges.push((w[i], hub));
                    edges.extend(w[..s].iter().map(|&x| (hub, x)));
                }
            }
        }
        let tree = OutTree::new(inst.root(), orient(&edges, inst.root(), n));
        trees.push(tree.trimmed(terms).arcs);
    }
    let p = arc_packing(inst.root(), trees, Mode::Vertex, terms)?;
    debug_assert_eq!(verify_packing(h, &p), Ok(()));
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::max_packing;

    fn cp(n: usize, parts: &[&[usize]], w: Option<usize>) -> CyclePartition {
        CyclePartition::new(n, parts.iter().map(|p| p.to_vec()).collect(), w).unwrap()
    }

    fn derangements(n: u64) -> u64 {
        match n {
            0 => 1,
            1 => 0,
            _ => (n - 1) * (derangements(n - 1) + derangements(n - 2)),
        }
    }

    #[test]
    fn partitions_counted_by_derangements() {
        for n in 2..=7 {
            let all = CyclePartition::all(n);
            let expect = derangements(n as u64) + n as u64 * derangements(n as u64 - 1);
            assert_eq!(all.len() as u64, expect, "n = {n}");
            let distinct: std::collections::HashSet<_> =
                all.iter().map(|c| c.deleted_arcs()).collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn deletion_family_examples() {
        let d = build_deletion_family(&cp(5, &[&[0, 1, 2], &[3, 4]], None)).unwrap();
        assert_eq!(d.arc_count(), 15);
        let d = build_deletion_family(&cp(5, &[&[0, 1], &[2, 3]], Some(4))).unwrap();
        assert_eq!(d.arc_count(), 16);
        assert!(CyclePartition::new(4, vec![vec![0, 1, 2]], None).is_err());
        assert!(CyclePartition::new(4, vec![vec![0, 1, 2], vec![2, 3]], None).is_err());
        assert!(CyclePartition::new(3, vec![vec![0], vec![1, 2]], None).is_err());
    }

    #[test]
    fn recognizer_roundtrip_and_rejections() {
        for n in 2..=6 {
            for c in CyclePartition::all(n) {
                let d = build_deletion_family(&c).unwrap();
                assert_eq!(recognize_deletion_family(&d), Some(c));
            }
        }
        assert_eq!(
            recognize_deletion_family(&Digraph::complete(5).unwrap()),
            None
        );
        let path = Digraph::complete(5)
            .unwrap()
            .delete_arcs(&[(0, 1), (1, 2)])
            .unwrap();
        assert_eq!(recognize_deletion_family(&path), None);
    }

    #[test]
    fn induced_subdigraph_stays_in_family() {
        let c = cp(5, &[&[0, 1, 2], &[3, 4]], None);
        let d = build_deletion_family(&c).unwrap();
        let (sub, _) = d.induced(&[0, 2, 3, 4]).unwrap();
        // removing 1 from the triangle leaves 0 -> 2 present and 2 -> 0 deleted
        let sub = sub.without_arc((0, 1)).unwrap();
        assert_eq!(
            recognize_deletion_family(&sub).unwrap().family(),
            DeletionFamily::Covering
        );
    }

    #[test]
    fn branchings_examples() {
        let c = cp(5, &[&[0, 1, 2], &[3, 4]], None);
        let d = build_deletion_family(&c).unwrap();
        let p = lemma5_branchings(&d, &c, 0).unwrap();
        let expect: Vec<Vec<Arc>> = vec![
            vec![(0, 2), (2, 1), (2, 3), (2, 4)],
            vec![(0, 3), (1, 4), (3, 1), (3, 2)],
            vec![(0, 4), (1, 3), (4, 1), (4, 2)],
        ];
        assert_eq!(
            p.trees.iter().map(|t| t.arcs.clone()).collect::<Vec<_>>(),
            expect
        );

        let c = cp(6, &[&[0, 1], &[2, 3], &[4, 5]], None);
        let d = build_deletion_family(&c).unwrap();
        let p = lemma5_branchings(&d, &c, 0).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(verify_packing(&d, &p), Ok(()));
        let inst = SteinerInstance::spanning(6, 0).unwrap();
        assert!(max_packing(&d, &inst, Mode::Arc).unwrap().0 >= 4);

        let c = cp(5, &[&[0, 1], &[2, 3]], Some(4));
        let d = build_deletion_family(&c).unwrap();
        let p = lemma5_branchings(&d, &c, 4).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(verify_packing(&d, &p), Ok(()));
    }

    #[test]
    fn mismatched_partition_rejected() {
        let c = cp(5, &[&[0, 1, 2], &[3, 4]], None);
        let other = cp(5, &[&[0, 2, 1], &[3, 4]], None);
        let d = build_deletion_family(&c).unwrap();
        assert_eq!(
            lemma5_branchings(&d, &other, 0),
            Err(Error::PartitionMismatch)
        );
    }

    #[test]
    fn large_terminal_set_examples() {
        let cases: [(CyclePartition, usize, usize); 3] = [
            (cp(5, &[&[0, 1, 2], &[3, 4]], None), 1, 0),
            (cp(5, &[&[0, 1], &[2, 3, 4]], None), 1, 2),
            (cp(5, &[&[0, 1], &[2, 3]], Some(4)), 4, 0),
        ];
        for (c, z, r) in cases {
            let d = build_deletion_family(&c).unwrap();
            let s: Vec<usize> = (0..5).filter(|&v| v != z).collect();
            let p = lemma6_trees(&d, &c, &s, r).unwrap();
            assert_eq!(p.len(), 3);
            assert_eq!(verify_packing(&d, &p), Ok(()));
        }
    }

    #[test]
    fn digon_partner_root_is_impossible() {
        let c = cp(5, &[&[0, 1], &[2, 3, 4]], None);
        let d = build_deletion_family(&c).unwrap();
        let s = [0, 2, 3, 4];
        assert!(matches!(
            lemma6_trees(&d, &c, &s, 0),
            Err(Error::Impossible(_))
        ));
        let inst = SteinerInstance::new(&s, 0).unwrap();
        assert_eq!(max_packing(&d, &inst, Mode::Vertex).unwrap().0, 2);
    }

    #[test]
    fn two_terminal_examples() {
        let c = cp(5, &[&[0, 1, 2], &[3, 4]], None);
        let d = build_deletion_family(&c).unwrap();
        let p = lemma7_trees(&d, &c, &[0, 3], 0).unwrap();
        assert!(p.trees.iter().any(|t| t.arcs == vec![(0, 3)]));
        assert_eq!(p.len(), 3);
        assert_eq!(verify_packing(&d, &p), Ok(()));
        let p = lemma7_trees(&d, &c, &[0, 1], 0).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.trees.iter().all(|t| t.arcs.len() == 2));
        assert_eq!(verify_packing(&d, &p), Ok(()));
        assert!(lemma7_trees(&d, &c, &[0, 1, 2], 0).is_err());
    }

    #[test]
    fn two_terminal_detour_when_both_neighbours_blocked() {
        // r = 0 cannot use 0 -> 1, v = 3 cannot be entered from 2
        let c = cp(6, &[&[0, 1], &[2, 3], &[4, 5]], None);
        let d = build_deletion_family(&c).unwrap();
        let p = lemma7_trees(&d, &c, &[0, 3], 0).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p
            .trees
            .iter()
            .any(|t| t.arcs == vec![(0, 2), (1, 3), (2, 1)]));
        assert_eq!(verify_packing(&d, &p), Ok(()));
    }

    fn check_decomposition(n: usize, cycles: &[Vec<usize>]) {
        assert_eq!(cycles.len(), n - 1);
        let mut seen = std::collections::HashSet::new();
        for c in cycles {
            assert_eq!(c.len(), n);
            let mut vs = c.clone();
            vs.sort_unstable();
            assert_eq!(vs, (0..n).collect::<Vec<_>>());
            for i in 0..n {
                assert!(seen.insert((c[i], c[(i + 1) % n])));
            }
        }
        assert_eq!(seen.len(), n * (n - 1));
    }

    #[test]
    fn tillson_small_orders() {
        for n in [2, 3, 5, 7, 8, 9] {
            check_decomposition(n, &tillson_decomposition(n).unwrap());
        }
        for n in [4, 6] {
            assert!(matches!(
                tillson_decomposition(n),
                Err(Error::Impossible(_))
            ));
        }
    }

    #[test]
    fn layered_examples() {
        let d = layered_cycle_digraph(6, 2).unwrap();
        assert_eq!(d.arc_count(), 12);
        assert!(d.is_symmetric());
        assert_eq!(
            layered_cycle_digraph(5, 4).unwrap(),
            Digraph::complete(5).unwrap()
        );
        assert_eq!(layered_cycle_digraph(4, 2).unwrap().arc_count(), 8);
        assert_eq!(
            layered_cycle_digraph(4, 3).unwrap(),
            Digraph::complete(4).unwrap()
        );
        assert_eq!(
            layered_cycle_digraph(6, 5).unwrap(),
            Digraph::complete(6).unwrap()
        );
        for n in 2..=8 {
            for l in 1..n {
                let d = layered_cycle_digraph(n, l).unwrap();
                for v in 0..n {
                    assert_eq!(
                        (d.out_degree(v), d.in_degree(v)),
                        (l, l),
                        "n = {n}, l = {l}"
                    );
                }
            }
        }
        assert!(layered_cycle_digraph(5, 5).is_err());
        assert!(layered_cycle_digraph(5, 0).is_err());
    }

    #[test]
    fn join_sizes() {
        let s = JoinSpec::new(6, 2).unwrap();
        assert_eq!(build_h1(&s).unwrap().arc_count(), 18);
        let s = JoinSpec::new(8, 2).unwrap();
        let h2 = build_h2(&s).unwrap();
        assert_eq!(h2.arc_count(), 24);
        assert!(h2.is_symmetric());
        assert!(JoinSpec::new(5, 0).is_err());
        assert!(JoinSpec::new(5, 5).is_err());
    }

    #[test]
    fn join_tree_examples() {
        let s = JoinSpec::new(6, 2).unwrap();
        let h1 = build_h1(&s).unwrap();
        let inst = SteinerInstance::new(&[0, 2, 3], 0).unwrap();
        let p = prop13_trees(&h1, &s, &inst, JoinVariant::H1).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(verify_packing(&h1, &p), Ok(()));

        let s = JoinSpec::new(8, 2).unwrap();
        let h2 = build_h2(&s).unwrap();
        let inst = SteinerInstance::new(&[0, 2, 3], 2).unwrap();
        let p = prop13_trees(&h2, &s, &inst, JoinVariant::H2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(verify_packing(&h2, &p), Ok(()));

        let too_big = SteinerInstance::new(&[0, 2, 3, 4, 5], 2).unwrap();
        assert!(prop13_trees(&h2, &s, &too_big, JoinVariant::H2).is_err());
        assert!(prop13_trees(&h1, &s, &inst, JoinVariant::H1).is_err());
    }
}
