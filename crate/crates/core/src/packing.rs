//! (S, r)-trees, packing verification and the exact packing solver.
//!
//! The solver builds trees one at a time. Trees of a packing are ordered by
//! the head of their smallest root arc, so the `i`-th tree starts with an arc
//! `r -> x` whose head exceeds the previous tree's and never uses a smaller
//! root arc. Inside a tree, the lowest uncovered terminal is attached by a
//! path whose interior avoids the partial tree; each minimal (S, r)-tree is
//! produced exactly once this way. Only minimal trees (every leaf a terminal)
//! are generated: trimming a non-terminal leaf keeps a tree an (S, r)-tree and
//! can only shrink its arc and vertex sets, so some optimal packing consists
//! of minimal trees.
//!
//! Pruning uses the residual degree bound (available root out-arcs and
//! terminal in-arcs) and residual reachability of every terminal.
//!
//! The reported witness is the first packing of maximum size met in this
//! depth-first order (root-arc heads ascending, path predecessors ascending),
//! which makes results deterministic.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{bits, full_mask, reach, Arc, Digraph, MAX_VERTICES};
use crate::error::{Error, Result};

/// Disjointness requirement of a packing: `Vertex` asks for internally
/// disjoint trees (κ), `Arc` for arc-disjoint trees (λ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Vertex,
    Arc,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::Vertex, Mode::Arc];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Vertex => "vertex",
            Mode::Arc => "arc",
        }
    }

    /// `kappa` or `lambda`.
    pub fn symbol(self) -> &'static str {
        match self {
            Mode::Vertex => "kappa",
            Mode::Arc => "lambda",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" | "kappa" | "internal" => Ok(Mode::Vertex),
            "arc" | "lambda" => Ok(Mode::Arc),
            other => Err(Error::OutOfRange(format!("unknown mode {other:?}"))),
        }
    }
}

/// Terminal set `S` (sorted, `|S| >= 2`) with a root `r` in `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SteinerInstance {
    terminals: Vec<usize>,
    root: usize,
}

impl SteinerInstance {
    pub fn new(terminals: &[usize], root: usize) -> Result<Self> {
        let set: BTreeSet<usize> = terminals.iter().copied().collect();
        if set.len() != terminals.len() {
            return Err(Error::InvalidInstance("repeated terminal".into()));
        }
        if set.len() < 2 {
            return Err(Error::InvalidInstance("need at least two terminals".into()));
        }
        if !set.contains(&root) {
            return Err(Error::InvalidInstance(format!("root {root} not in S")));
        }
        if set.iter().any(|&v| v >= MAX_VERTICES) {
            return Err(Error::InvalidInstance("terminal out of range".into()));
        }
        Ok(SteinerInstance {
            terminals: set.into_iter().collect(),
            root,
        })
    }

    /// `S = V(D)` rooted at `root`.
    pub fn spanning(n: usize, root: usize) -> Result<Self> {
        Self::new(&(0..n).collect::<Vec<_>>(), root)
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    pub(crate) fn mask(&self) -> u32 {
        self.terminals.iter().fold(0, |m, &v| m | 1 << v)
    }

    /// Rejects terminals outside the digraph.
    pub fn check_against(&self, d: &Digraph) -> Result<()> {
        match self.terminals.last() {
            Some(&v) if v >= d.n() => Err(Error::InvalidInstance(format!(
                "terminal {v} outside 0..{}",
                d.n()
            ))),
            _ => Ok(()),
        }
    }

    /// Image under a vertex permutation (old -> new).
    pub fn permute(&self, perm: &[usize]) -> Self {
        let ts: Vec<usize> = self.terminals.iter().map(|&v| perm[v]).collect();
        Self::new(&ts, perm[self.root]).expect("permutation preserves validity")
    }
}

/// An out-tree given by its root and arc set (kept sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutTree {
    pub root: usize,
    pub arcs: Vec<Arc>,
}

impl OutTree {
    pub fn new(root: usize, mut arcs: Vec<Arc>) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        OutTree { root, arcs }
    }

    /// Root plus every arc endpoint, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: BTreeSet<usize> = self.arcs.iter().flat_map(|&(u, v)| [u, v]).collect();
        vs.insert(self.root);
        vs.into_iter().collect()
    }

    /// Drops non-terminal leaves until every leaf lies in `terminals`.
    pub fn trimmed(&self, terminals: &[usize]) -> OutTree {
        let mut arcs = self.arcs.clone();
        loop {
            let before = arcs.len();
            let tails: BTreeSet<usize> = arcs.iter().map(|a| a.0).collect();
            arcs.retain(|&(_, v)| tails.contains(&v) || terminals.contains(&v));
            if arcs.len() == before {
                return OutTree {
                    root: self.root,
                    arcs,
                };
            }
        }
    }
}

/// A collection of (S, r)-trees under one disjointness mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreePacking {
    pub instance: SteinerInstance,
    pub mode: Mode,
    pub trees: Vec<OutTree>,
}

impl TreePacking {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

/// First reason a packing fails its invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ArcNotInDigraph {
        tree: usize,
        arc: Arc,
    },
    WrongRoot {
        tree: usize,
        root: usize,
    },
    NotOutTree {
        tree: usize,
    },
    MissingTerminal {
        tree: usize,
        vertex: usize,
    },
    SharedArc {
        first: usize,
        second: usize,
        arc: Arc,
    },
    SharedVertex {
        first: usize,
        second: usize,
        vertex: usize,
    },
    BadInstance(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ArcNotInDigraph { tree, arc } => {
                write!(f, "tree {tree}: arc {}->{} not in digraph", arc.0, arc.1)
            }
            Violation::WrongRoot { tree, root } => write!(f, "tree {tree}: rooted at {root}"),
            Violation::NotOutTree { tree } => write!(f, "tree {tree}: not an out-tree"),
            Violation::MissingTerminal { tree, vertex } => {
                write!(f, "tree {tree}: terminal {vertex} missing")
            }
            Violation::SharedArc { first, second, arc } => write!(
                f,
                "trees {first} and {second} share arc {}->{}",
                arc.0, arc.1
            ),
            Violation::SharedVertex {
                first,
                second,
                vertex,
            } => write!(
                f,
                "trees {first} and {second} share internal vertex {vertex}"
            ),
            Violation::BadInstance(m) => write!(f, "bad instance: {m}"),
        }
    }
}

/// True iff `arcs` (all present in `d`) form an out-tree rooted at `root`:
/// root has in-degree 0, every other touched vertex in-degree 1, and all are
/// reachable from the root. The empty arc set is the trivial tree `{root}`.
pub fn is_out_tree(d: &Digraph, arcs: &[Arc], root: usize) -> bool {
    let n = d.n();
    if root >= n || arcs.iter().any(|&(u, v)| !d.has_arc(u, v)) {
        return false;
    }
    let mut indeg = [0u8; MAX_VERTICES];
    let mut rows = [0u32; MAX_VERTICES];
    let mut touched = 1u32 << root;
    for &(u, v) in arcs {
        if rows[u] >> v & 1 == 1 {
            return false;
        }
        rows[u] |= 1 << v;
        indeg[v] += 1;
        touched |= 1 << u | 1 << v;
    }
    if indeg[root] != 0 {
        return false;
    }
    if bits(touched).any(|v| v != root && indeg[v] != 1) {
        return false;
    }
    reach(&rows, root, full_mask(n)) == touched
}

/// Checks every [`TreePacking`] invariant against `d`.
pub fn verify_packing(d: &Digraph, p: &TreePacking) -> std::result::Result<(), Violation> {
    if let Err(e) = p.instance.check_against(d) {
        return Err(Violation::BadInstance(e.to_string()));
    }
    let root = p.instance.root();
    let terms = p.instance.terminals();
    for (i, t) in p.trees.iter().enumerate() {
        if let Some(&arc) = t.arcs.iter().find(|&&(u, v)| !d.has_arc(u, v)) {
            return Err(Violation::ArcNotInDigraph { tree: i, arc });
        }
        if t.root != root {
            return Err(Violation::WrongRoot {
                tree: i,
                root: t.root,
            });
        }
        if !is_out_tree(d, &t.arcs, root) {
            return Err(Violation::NotOutTree { tree: i });
        }
        let vs = t.vertices();
        if let Some(&v) = terms.iter().find(|v| !vs.contains(v)) {
            return Err(Violation::MissingTerminal { tree: i, vertex: v });
        }
    }
    for i in 0..p.trees.len() {
        for j in i + 1..p.trees.len() {
            if let Some(&arc) = p.trees[i]
                .arcs
                .iter()
                .find(|a| p.trees[j].arcs.binary_search(a).is_ok())
            {
                return Err(Violation::SharedArc {
                    first: i,
                    second: j,
                    arc,
                });
            }
            if p.mode == Mode::Vertex {
                let vj = p.trees[j].vertices();
                if let Some(&v) = p.trees[i]
                    .vertices()
                    .iter()
                    .find(|v| !terms.contains(v) && vj.contains(v))
                {
                    return Err(Violation::SharedVertex {
                        first: i,
                        second: j,
                        vertex: v,
                    });
                }
            }
        }
    }
    Ok(())
}

/// A-priori bound `min(d+(r), min over v in S - r of d-(v))`.
pub fn degree_bound(d: &Digraph, inst: &SteinerInstance) -> usize {
    let r = inst.root();
    inst.terminals()
        .iter()
        .filter(|&&v| v != r)
        .map(|&v| d.in_degree(v))
        .fold(d.out_degree(r), usize::min)
}

/// Maximum packing: `κ_{S,r}(D)` for [`Mode::Vertex`], `λ_{S,r}(D)` for
/// [`Mode::Arc`], with a witness of that size.
pub fn max_packing(
    d: &Digraph,
    inst: &SteinerInstance,
    mode: Mode,
) -> Result<(usize, TreePacking)> {
    max_packing_capped(d, inst, mode, usize::MAX)
}

/// As [`max_packing`] but stops once `cap` trees are found; the returned value
/// is `min(value, cap)`. When the value is below `cap` the result equals the
/// uncapped one, witness included.
pub fn max_packing_capped(
    d: &Digraph,
    inst: &SteinerInstance,
    mode: Mode,
    cap: usize,
) -> Result<(usize, TreePacking)> {
    inst.check_against(d)?;
    let mut solver = Solver::new(d, inst, mode, cap);
    solver.run(d);
    let trees = solver
        .best_trees
        .into_iter()
        .map(|arcs| OutTree::new(inst.root(), arcs))
        .collect();
    Ok((
        solver.best,
        TreePacking {
            instance: inst.clone(),
            mode,
            trees,
        },
    ))
}

/// Value only; `min(value, cap)`.
pub(crate) fn packing_value_capped(
    d: &Digraph,
    inst: &SteinerInstance,
    mode: Mode,
    cap: usize,
) -> usize {
    let mut solver = Solver::new(d, inst, mode, cap);
    solver.run(d);
    solver.best
}

#[derive(Clone, Copy)]
struct Residual {
    out: [u32; MAX_VERTICES],
    inn: [u32; MAX_VERTICES],
}

impl Residual {
    fn remove_arc(&mut self, u: usize, v: usize) {
        self.out[u] &= !(1 << v);
        self.inn[v] &= !(1 << u);
    }

    fn remove_vertex(&mut self, v: usize) {
        for w in bits(self.out[v]) {
            self.inn[w] &= !(1 << v);
        }
        for w in bits(self.inn[v]) {
            self.out[w] &= !(1 << v);
        }
        self.out[v] = 0;
        self.inn[v] = 0;
    }
}

struct Solver {
    n: usize,
    root: usize,
    terms: u32,
    mode: Mode,
    cap: usize,
    best: usize,
    best_trees: Vec<Vec<Arc>>,
    stack: Vec<Vec<Arc>>,
    current: Vec<Arc>,
    done: bool,
}

impl Solver {
    fn new(d: &Digraph, inst: &SteinerInstance, mode: Mode, cap: usize) -> Self {
        Solver {
            n: d.n(),
            root: inst.root(),
            terms: inst.mask(),
            mode,
            cap: cap.min(degree_bound(d, inst)),
            best: 0,
            best_trees: Vec::new(),
            stack: Vec::new(),
            current: Vec::new(),
            done: false,
        }
    }

    fn run(&mut self, d: &Digraph) {
        if self.cap == 0 {
            return;
        }
        let mut res = Residual {
            out: [0; MAX_VERTICES],
            inn: [0; MAX_VERTICES],
        };
        for v in 0..self.n {
            res.out[v] = d.out_row(v);
            res.inn[v] = d.in_row(v);
        }
        // arcs into the root are never used
        for w in bits(res.inn[self.root]) {
            res.out[w] &= !(1 << self.root);
        }
        res.inn[self.root] = 0;
        self.pack(&res);
    }

    /// Upper bound on further trees from residual `res`, given `pending`
    /// terminals that still need one in-arc for the tree under construction.
    fn future_bound(&self, res: &Residual, pending: u32) -> usize {
        let mut ub = res.out[self.root].count_ones() as usize;
        for t in bits(self.terms & !(1 << self.root)) {
            let avail = res.inn[t].count_ones() as usize;
            let need = (pending >> t & 1) as usize;
            ub = ub.min(avail.saturating_sub(need));
            if ub == 0 {
                return 0;
            }
        }
        ub
    }

    fn terminals_reachable(&self, res: &Residual) -> bool {
        let seen = reach(&res.out, self.root, full_mask(self.n));
        seen & self.terms == self.terms
    }

    fn pack(&mut self, res: &Residual) {
        let placed = self.stack.len();
        if placed > self.best {
            self.best = placed;
            self.best_trees = self.stack.clone();
            if self.best >= self.cap {
                self.done = true;
                return;
            }
        }
        if placed + self.future_bound(res, 0) <= self.best || !self.terminals_reachable(res) {
            return;
        }
        let r = self.root;
        let mut next = *res;
        for x in bits(res.out[r]) {
            // r -> x is this tree's smallest root arc; smaller ones are dead
            next.remove_arc(r, x);
            self.current.push((r, x));
            self.grow(&next, 1 << r | 1 << x, x);
            self.current.pop();
            if self.done || placed + self.future_bound(&next, 0) <= self.best {
                return;
            }
        }
    }

    fn grow(&mut self, res: &Residual, tv: u32, first: usize) {
        let uncovered = self.terms & !tv;
        if uncovered == 0 {
            self.finish_tree(res, first);
            return;
        }
        if self.stack.len() + 1 + self.future_bound(res, uncovered) <= self.best {
            return;
        }
        let t = uncovered.trailing_zeros() as usize;
        let mut path = vec![t];
        self.attach(res, tv, first, &mut path, 1 << t);
    }

    /// Extends a backward path from the lowest uncovered terminal until it
    /// meets the partial tree; path interiors avoid the tree.
    fn attach(
        &mut self,
        res: &Residual,
        tv: u32,
        first: usize,
        path: &mut Vec<usize>,
        on_path: u32,
    ) {
        let c = *path.last().unwrap();
        for y in bits(res.inn[c]) {
            if self.done {
                return;
            }
            if tv >> y & 1 == 1 {
                let mut next = *res;
                let before = self.current.len();
                let mut tail = y;
                for &h in path.iter().rev() {
                    self.current.push((tail, h));
                    next.remove_arc(tail, h);
                    tail = h;
                }
                self.grow(&next, tv | on_path, first);
                self.current.truncate(before);
            } else if on_path >> y & 1 == 0 {
                path.push(y);
                self.attach(res, tv, first, path, on_path | 1 << y);
                path.pop();
            }
        }
    }

    fn finish_tree(&mut self, res: &Residual, first: usize) {
        // a non-terminal first vertex left as a leaf would make the tree non-minimal
        if self.terms >> first & 1 == 0 && !self.current.iter().any(|a| a.0 == first) {
            return;
        }
        let mut next = *res;
        if self.mode == Mode::Vertex {
            for &(_, v) in &self.current {
                if self.terms >> v & 1 == 0 {
                    next.remove_vertex(v);
                }
            }
        }
        let tree = std::mem::take(&mut self.current);
        self.stack.push(tree);
        self.pack(&next);
        self.current = self.stack.pop().unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::packing_oracle;
    use proptest::prelude::*;

    fn d51() -> Digraph {
        Digraph::complete(5)
            .unwrap()
            .delete_arcs(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 3)])
            .unwrap()
    }

    fn d51_branchings() -> TreePacking {
        TreePacking {
            instance: SteinerInstance::spanning(5, 0).unwrap(),
            mode: Mode::Arc,
            trees: vec![
                OutTree::new(0, vec![(0, 2), (2, 1), (2, 3), (2, 4)]),
                OutTree::new(0, vec![(0, 3), (3, 1), (1, 4), (3, 2)]),
                OutTree::new(0, vec![(0, 4), (4, 1), (1, 3), (4, 2)]),
            ],
        }
    }

    fn dicycle(n: usize) -> Digraph {
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::new(n, &arcs).unwrap()
    }

    #[test]
    fn out_tree_examples() {
        let k4 = Digraph::complete(4).unwrap();
        assert!(is_out_tree(&k4, &[(0, 1), (0, 2), (0, 3)], 0));
        assert!(!is_out_tree(&k4, &[(0, 1), (2, 1)], 0));
        assert!(!is_out_tree(&k4, &[(1, 2), (2, 1)], 0));
        assert!(is_out_tree(&d51(), &[(0, 2), (2, 1), (2, 3), (2, 4)], 0));
        // arc 0->1 is deleted in d51
        assert!(!is_out_tree(&d51(), &[(0, 1)], 0));
        assert!(is_out_tree(&k4, &[], 2));
    }

    #[test]
    fn verify_examples() {
        let d = d51();
        let p = d51_branchings();
        assert_eq!(verify_packing(&d, &p), Ok(()));

        let mut shared = p.clone();
        shared.trees[1] = OutTree::new(0, vec![(0, 3), (3, 1), (1, 4), (2, 4)]);
        shared.trees[0] = OutTree::new(0, vec![(0, 2), (2, 1), (2, 3), (2, 4)]);
        assert!(matches!(
            verify_packing(&d, &shared),
            Err(Violation::SharedArc { arc: (2, 4), .. }) | Err(Violation::NotOutTree { .. })
        ));

        let k4 = Digraph::complete(4).unwrap();
        let inst = SteinerInstance::new(&[0, 1], 0).unwrap();
        let meet = TreePacking {
            instance: inst,
            mode: Mode::Vertex,
            trees: vec![
                OutTree::new(0, vec![(0, 2), (2, 1)]),
                OutTree::new(0, vec![(0, 3), (3, 2), (2, 1)]),
            ],
        };
        assert!(matches!(
            verify_packing(&k4, &meet),
            Err(Violation::SharedArc { .. })
        ));
        let meet = TreePacking {
            trees: vec![
                OutTree::new(0, vec![(0, 2), (2, 1)]),
                OutTree::new(0, vec![(0, 3), (3, 2), (2, 0)]),
            ],
            ..meet
        };
        assert!(verify_packing(&k4, &meet).is_err());
        let meet = TreePacking {
            trees: vec![
                OutTree::new(0, vec![(0, 2), (2, 1)]),
                OutTree::new(0, vec![(0, 3), (3, 2), (2, 3)]),
            ],
            ..meet
        };
        assert!(verify_packing(&k4, &meet).is_err());
        let shares_vertex = TreePacking {
            trees: vec![
                OutTree::new(0, vec![(0, 2), (2, 1)]),
                OutTree::new(0, vec![(0, 3), (3, 1), (3, 2)]),
            ],
            ..meet
        };
        assert_eq!(
            verify_packing(&k4, &shares_vertex),
            Err(Violation::SharedVertex {
                first: 0,
                second: 1,
                vertex: 2
            })
        );
        let arc_mode = TreePacking {
            mode: Mode::Arc,
            ..shares_vertex
        };
        assert_eq!(verify_packing(&k4, &arc_mode), Ok(()));
    }

    #[test]
    fn max_packing_examples() {
        let k4 = Digraph::complete(4).unwrap();
        for mode in Mode::BOTH {
            let inst = SteinerInstance::spanning(4, 0).unwrap();
            let (v, w) = max_packing(&k4, &inst, mode).unwrap();
            assert_eq!(v, 3);
            assert_eq!(w.len(), 3);
            assert_eq!(verify_packing(&k4, &w), Ok(()));

            let inst = SteinerInstance::new(&[0, 2], 0).unwrap();
            assert_eq!(max_packing(&dicycle(4), &inst, mode).unwrap().0, 1);
        }
        let inst = SteinerInstance::spanning(5, 0).unwrap();
        let (v, w) = max_packing(&d51(), &inst, Mode::Arc).unwrap();
        assert_eq!(v, 3);
        assert_eq!(verify_packing(&d51(), &w), Ok(()));
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(SteinerInstance::new(&[0], 0).is_err());
        assert!(SteinerInstance::new(&[0, 1], 2).is_err());
        let inst = SteinerInstance::new(&[0, 5], 0).unwrap();
        assert!(max_packing(&dicycle(4), &inst, Mode::Arc).is_err());
    }

    #[test]
    fn non_strong_gives_zero() {
        let d = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let inst = SteinerInstance::new(&[1, 2], 2).unwrap();
        let (v, w) = max_packing(&d, &inst, Mode::Arc).unwrap();
        assert_eq!(v, 0);
        assert!(w.is_empty());
    }

    #[test]
    fn witness_is_deterministic() {
        let d = d51();
        let inst = SteinerInstance::new(&[0, 2, 4], 2).unwrap();
        let a = max_packing(&d, &inst, Mode::Vertex).unwrap();
        let b = max_packing(&d, &inst, Mode::Vertex).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn capped_search_stops_early() {
        let k5 = Digraph::complete(5).unwrap();
        let inst = SteinerInstance::spanning(5, 1).unwrap();
        let (v, w) = max_packing_capped(&k5, &inst, Mode::Arc, 2).unwrap();
        assert_eq!(v, 2);
        assert_eq!(w.len(), 2);
        assert_eq!(verify_packing(&k5, &w), Ok(()));
    }

    #[test]
    fn trimming_keeps_disjointness() {
        let k4 = Digraph::complete(4).unwrap();
        let inst = SteinerInstance::new(&[0, 1], 0).unwrap();
        let fat = TreePacking {
            instance: inst.clone(),
            mode: Mode::Vertex,
            trees: vec![
                OutTree::new(0, vec![(0, 1), (0, 2)]),
                OutTree::new(0, vec![(0, 3), (3, 1)]),
            ],
        };
        assert_eq!(verify_packing(&k4, &fat), Ok(()));
        let thin = TreePacking {
            trees: fat
                .trees
                .iter()
                .map(|t| t.trimmed(inst.terminals()))
                .collect(),
            ..fat.clone()
        };
        assert_eq!(thin.trees[0].arcs, vec![(0, 1)]);
        assert_eq!(verify_packing(&k4, &thin), Ok(()));
    }

    fn arb_case() -> impl Strategy<Value = (Digraph, SteinerInstance, Mode)> {
        (3usize..=5).prop_flat_map(|n| {
            let m = n * (n - 1);
            (
                proptest::collection::vec(proptest::bool::weighted(0.6), m),
                proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 2..=n),
                any::<proptest::sample::Index>(),
                any::<bool>(),
            )
                .prop_map(move |(keep, terms, ri, arc_mode)| {
                    let pairs =
                        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
                    let arcs: Vec<Arc> = pairs
                        .zip(keep)
                        .filter(|(_, k)| *k)
                        .map(|(a, _)| a)
                        .collect();
                    let d = Digraph::new(n, &arcs).unwrap();
                    let root = terms[ri.index(terms.len())];
                    let inst = SteinerInstance::new(&terms, root).unwrap();
                    (d, inst, if arc_mode { Mode::Arc } else { Mode::Vertex })
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn solver_agrees_with_oracle((d, inst, mode) in arb_case()) {
            let (v, w) = max_packing(&d, &inst, mode).unwrap();
            prop_assert_eq!(verify_packing(&d, &w), Ok(()));
            prop_assert_eq!(w.len(), v);
            prop_assert!(v <= degree_bound(&d, &inst));
            prop_assert!(packing_oracle(&d, &inst, mode, v).unwrap());
            prop_assert!(!packing_oracle(&d, &inst, mode, v + 1).unwrap());
        }

        #[test]
        fn internal_never_exceeds_arc((d, inst, _) in arb_case()) {
            let kv = max_packing(&d, &inst, Mode::Vertex).unwrap().0;
            let lv = max_packing(&d, &inst, Mode::Arc).unwrap().0;
            prop_assert!(kv <= lv);
        }

        #[test]
        fn relabeling_preserves_value((d, inst, mode) in arb_case(), seed in any::<u64>()) {
            let n = d.n();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let a = max_packing(&d, &inst, mode).unwrap().0;
            let b = max_packing(&d.permute(&perm), &inst.permute(&perm), mode).unwrap().0;
            prop_assert_eq!(a, b);
        }
    }
}
