//! Simple digraphs on dense vertex labels `0..n` stored as bitset rows.

use std::fmt;

use crate::error::{Error, Result};

/// Largest order representable by [`Digraph`].
pub const MAX_VERTICES: usize = 16;

/// An ordered pair `(tail, head)`.
pub type Arc = (usize, usize);

pub(crate) fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Immutable simple digraph: no loops, no parallel arcs. A digon `u -> v -> u`
/// is two distinct arcs.
///
/// Equality is label-sensitive (adjacency-matrix equality); use
/// [`crate::canon::canonical_form`] for isomorphism.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: [u32; MAX_VERTICES],
    inn: [u32; MAX_VERTICES],
}

impl Digraph {
    /// Builds a digraph from arc pairs. Duplicate pairs collapse to one arc.
    pub fn new(n: usize, arcs: &[Arc]) -> Result<Self> {
        let mut d = Self::empty(n)?;
        for &(u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            d.insert(u, v);
        }
        Ok(d)
    }

    /// The arcless digraph of order `n`.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDigraph);
        }
        if n > MAX_VERTICES {
            return Err(Error::OrderTooLarge {
                n,
                max: MAX_VERTICES,
            });
        }
        Ok(Digraph {
            n,
            out: [0; MAX_VERTICES],
            inn: [0; MAX_VERTICES],
        })
    }

    /// The complete digraph on `n` vertices: all `n(n-1)` ordered pairs.
    pub fn complete(n: usize) -> Result<Self> {
        let mut d = Self::empty(n)?;
        let all = full_mask(n);
        for v in 0..n {
            d.out[v] = all & !(1 << v);
            d.inn[v] = all & !(1 << v);
        }
        Ok(d)
    }

    /// Builds from out-neighbourhood rows. Bits outside `0..n` and diagonal bits
    /// are ignored.
    pub(crate) fn from_out_rows(n: usize, rows: &[u32]) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&n));
        let mut d = Digraph {
            n,
            out: [0; MAX_VERTICES],
            inn: [0; MAX_VERTICES],
        };
        let all = full_mask(n);
        for (u, &row) in rows.iter().enumerate().take(n) {
            for v in bits(row & all & !(1 << u)) {
                d.insert(u, v);
            }
        }
        d
    }

    pub(crate) fn insert(&mut self, u: usize, v: usize) {
        self.out[u] |= 1 << v;
        self.inn[v] |= 1 << u;
    }

    pub(crate) fn remove(&mut self, u: usize, v: usize) {
        self.out[u] &= !(1 << v);
        self.inn[v] &= !(1 << u);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out[..self.n]
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out[u] >> v & 1 == 1
    }

    /// Out-neighbourhood of `u` as a bitmask.
    pub fn out_row(&self, u: usize) -> u32 {
        self.out[u]
    }

    /// In-neighbourhood of `v` as a bitmask.
    pub fn in_row(&self, v: usize) -> u32 {
        self.inn[v]
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> {
        bits(self.out[u])
    }

    pub fn in_neighbors(&self, v: usize) -> impl Iterator<Item = usize> {
        bits(self.inn[v])
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].count_ones() as usize
    }

    /// δ⁺(D).
    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    /// δ⁻(D).
    pub fn min_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_degree(v)).min().unwrap_or(0)
    }

    /// Arcs in strictly increasing lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        (0..self.n).flat_map(move |u| bits(self.out[u]).map(move |v| (u, v)))
    }

    pub fn arc_vec(&self) -> Vec<Arc> {
        self.arcs().collect()
    }

    /// D^rev: `(u, v)` is an arc iff `(v, u)` is an arc of `self`.
    pub fn reverse(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.inn,
            inn: self.out,
        }
    }

    /// True iff the reverse of every arc is present.
    pub fn is_symmetric(&self) -> bool {
        self.out == self.inn
    }

    /// Removes the arcs of `arcs`, all of which must be present.
    pub fn delete_arcs(&self, arcs: &[Arc]) -> Result<Digraph> {
        let mut d = *self;
        for &(u, v) in arcs {
            if !self.has_arc(u, v) {
                return Err(Error::MissingArc(u, v));
            }
            d.remove(u, v);
        }
        Ok(d)
    }

    /// `D - e` for a single arc; the arc must be present.
    pub fn without_arc(&self, (u, v): Arc) -> Result<Digraph> {
        self.delete_arcs(&[(u, v)])
    }

    /// The subdigraph induced by `vertices`. Vertices are relabeled in the
    /// order given; the returned map sends an old label to its new label.
    pub fn induced(&self, vertices: &[usize]) -> Result<(Digraph, Vec<Option<usize>>)> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut map = vec![None; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { u: v, v, n: self.n });
            }
            if map[v].is_some() {
                return Err(Error::DuplicateVertex(v));
            }
            map[v] = Some(i);
        }
        let mut d = Digraph::empty(vertices.len())?;
        for (i, &u) in vertices.iter().enumerate() {
            for v in bits(self.out[u]) {
                if let Some(j) = map[v] {
                    d.insert(i, j);
                }
            }
        }
        Ok((d, map))
    }

    /// Image of the digraph under the vertex permutation `perm` (old -> new).
    pub fn permute(&self, perm: &[usize]) -> Digraph {
        let mut d = Digraph {
            n: self.n,
            out: [0; MAX_VERTICES],
            inn: [0; MAX_VERTICES],
        };
        for (u, v) in self.arcs() {
            d.insert(perm[u], perm[v]);
        }
        d
    }

    /// Vertices reachable from `src` (bitmask, includes `src`).
    pub fn reach_from(&self, src: usize) -> u32 {
        reach(&self.out, src, full_mask(self.n))
    }

    /// Strongly connected: forward and backward search from vertex 0 both
    /// cover every vertex. Linear in the number of rows.
    pub fn is_strong(&self) -> bool {
        let all = full_mask(self.n);
        reach(&self.out, 0, all) == all && reach(&self.inn, 0, all) == all
    }

    /// Strong, and no single arc can be dropped while staying strong.
    pub fn is_minimally_strong(&self) -> bool {
        if !self.is_strong() {
            return false;
        }
        self.arcs().all(|e| {
            let mut d = *self;
            d.remove(e.0, e.1);
            !d.is_strong()
        })
    }

    /// True iff every arc of `self` is an arc of `other` (same order).
    pub fn is_spanning_subdigraph_of(&self, other: &Digraph) -> bool {
        self.n == other.n && (0..self.n).all(|v| self.out[v] & !other.out[v] == 0)
    }
}

/// Bitset breadth-first search over `rows`, restricted to `allowed`.
pub(crate) fn reach(rows: &[u32], src: usize, allowed: u32) -> u32 {
    let mut seen = 1u32 << src;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= rows[v];
        }
        next &= allowed & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arc_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dicycle(n: usize) -> Digraph {
        let arcs: Vec<Arc> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::new(n, &arcs).unwrap()
    }

    #[test]
    fn make_digraph_examples() {
        let tri = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(tri.arc_count(), 3);
        let digon = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(digon, Digraph::complete(2).unwrap());
        assert_eq!(Digraph::new(3, &[(0, 0)]), Err(Error::Loop(0)));
        assert!(matches!(
            Digraph::new(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { .. })
        ));
        let dup = Digraph::new(3, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(dup.arc_count(), 1);
    }

    #[test]
    fn complete_digraph_sizes() {
        assert_eq!(Digraph::complete(3).unwrap().arc_count(), 6);
        assert_eq!(Digraph::complete(5).unwrap().arc_count(), 20);
        assert_eq!(Digraph::complete(1).unwrap().arc_count(), 0);
    }

    #[test]
    fn reverse_examples() {
        let tri = dicycle(3);
        let rev = Digraph::new(3, &[(0, 2), (2, 1), (1, 0)]).unwrap();
        assert_eq!(tri.reverse(), rev);
        let k4 = Digraph::complete(4).unwrap();
        assert_eq!(k4.reverse(), k4);
        // C1 = u1..u6 and its reverse, 0-based
        let c1 = dicycle(6);
        let c2 = c1.reverse();
        assert!(c2.has_arc(0, 5) && c2.has_arc(1, 0) && !c2.has_arc(0, 1));
        assert_eq!(c2.reverse(), c1);
    }

    #[test]
    fn symmetry() {
        assert!(Digraph::complete(3).unwrap().is_symmetric());
        assert!(!dicycle(3).is_symmetric());
        let d = Digraph::new(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert!(!d.is_symmetric());
    }

    #[test]
    fn delete_and_induce() {
        let k5 = Digraph::complete(5).unwrap();
        let m = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 3)];
        assert_eq!(k5.delete_arcs(&m).unwrap().arc_count(), 15);
        assert_eq!(k5.delete_arcs(&[]).unwrap(), k5);
        let k4 = Digraph::complete(4).unwrap();
        assert_eq!(
            k4.delete_arcs(&[(0, 1), (1, 2), (2, 3), (3, 0)])
                .unwrap()
                .arc_count(),
            8
        );
        assert_eq!(
            dicycle(3).delete_arcs(&[(1, 0)]),
            Err(Error::MissingArc(1, 0))
        );

        let (sub, map) = k5.induced(&[0, 2, 3, 4]).unwrap();
        assert_eq!(sub, k4);
        assert_eq!(map, vec![Some(0), None, Some(1), Some(2), Some(3)]);
        let (sub, _) = dicycle(4).induced(&[0, 1]).unwrap();
        assert_eq!(sub, Digraph::new(2, &[(0, 1)]).unwrap());
        assert_eq!(k5.induced(&[]).unwrap_err(), Error::EmptyVertexSet);
    }

    #[test]
    fn strongness() {
        assert!(dicycle(4).is_strong());
        assert!(!Digraph::new(3, &[(0, 1), (1, 2)]).unwrap().is_strong());
        assert!(Digraph::complete(6).unwrap().is_strong());
        assert!(Digraph::complete(1).unwrap().is_strong());
        assert!(!Digraph::empty(2).unwrap().is_strong());
    }

    #[test]
    fn minimal_strongness() {
        assert!(dicycle(5).is_minimally_strong());
        let path = Digraph::new(4, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)]).unwrap();
        assert!(path.is_minimally_strong());
        assert!(!Digraph::complete(3).unwrap().is_minimally_strong());
    }
}
