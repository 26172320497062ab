//! Simple undirected graphs and their (bivariate) cut functions.
//!
//! All counts are exact integers; they only meet floating point when
//! combined with a set function.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ground::{SetFunction, Subset, MAX_ELEMENTS};

/// Simple undirected graph on `0..n` stored as neighbor bit vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Subset>,
}

impl Graph {
    /// Edgeless graph.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::OverCap { what: "subset word", n, cap: MAX_ELEMENTS });
        }
        Ok(Self { adj: vec![Subset::EMPTY; n] })
    }

    /// `K_n`.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        let full = Subset::full(n);
        for (v, a) in g.adj.iter_mut().enumerate() {
            *a = full.without(v);
        }
        Ok(g)
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (u, w) in edges {
            g.add_edge(u, w)?;
        }
        Ok(g)
    }

    /// Builds a graph from explicit neighbor sets, checking symmetry and loops.
    pub fn from_adjacency(adj: Vec<Subset>) -> Result<Self> {
        let n = adj.len();
        if n > MAX_ELEMENTS {
            return Err(Error::OverCap { what: "subset word", n, cap: MAX_ELEMENTS });
        }
        for (v, a) in adj.iter().enumerate() {
            if !a.fits(n) {
                return Err(Error::WidthMismatch { subset: *a, n });
            }
            if a.contains(v) {
                return Err(Error::Argument("self-loops are not allowed"));
            }
            if a.iter().any(|u| !adj[u].contains(v)) {
                return Err(Error::Argument("adjacency is not symmetric"));
            }
        }
        Ok(Self { adj })
    }

    pub fn add_edge(&mut self, u: usize, w: usize) -> Result<()> {
        let n = self.adj.len();
        if u >= n || w >= n {
            return Err(Error::Argument("edge endpoint out of range"));
        }
        if u == w {
            return Err(Error::Argument("self-loops are not allowed"));
        }
        self.adj[u].insert(w);
        self.adj[w].insert(u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> Subset {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.adj[u].contains(w)
    }

    /// Edges as `(u, w)` with `u < w`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, a)| a.iter().filter(move |&w| w > u).map(move |w| (u, w)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges with exactly one endpoint in `s`.
    pub fn cut(&self, s: Subset) -> usize {
        s.iter().map(|v| self.adj[v].difference(s).len()).sum()
    }

    /// Edges with one endpoint in `a` and the other in `b`. An edge with both
    /// endpoints in `a ∩ b` is counted once.
    pub fn bicut(&self, a: Subset, b: Subset) -> usize {
        self.edges()
            .filter(|&(u, w)| (a.contains(u) && b.contains(w)) || (a.contains(w) && b.contains(u)))
            .count()
    }

    /// Edges with both endpoints in `s`.
    pub fn induced_edges(&self, s: Subset) -> usize {
        s.iter().map(|v| self.adj[v].intersection(s).len()).sum::<usize>() / 2
    }

    /// `cut(A) + cut(B) = cut(A∪B) + cut(A∩B) + 2·bicut(A\B, B\A)`.
    pub fn check_fact1(&self, a: Subset, b: Subset) -> bool {
        self.cut(a) + self.cut(b)
            == self.cut(a.union(b)) + self.cut(a.intersection(b)) + 2 * self.bicut(a.difference(b), b.difference(a))
    }

    /// Every vertex outside `s` has a neighbor in `s`. The empty set dominates
    /// only the empty graph.
    pub fn is_dominating(&self, s: Subset) -> bool {
        (0..self.adj.len()).all(|v| s.contains(v) || !self.adj[v].intersection(s).is_empty())
    }

    /// No edge has both endpoints in `s`.
    pub fn is_independent(&self, s: Subset) -> bool {
        s.iter().all(|v| self.adj[v].intersection(s).is_empty())
    }
}

/// The cut function of a graph as a [`SetFunction`].
#[derive(Debug, Clone, Copy)]
pub struct CutFunction<'g>(pub &'g Graph);

impl SetFunction for CutFunction<'_> {
    fn ground_size(&self) -> usize {
        self.0.vertex_count()
    }
    fn value(&self, s: Subset) -> f64 {
        self.0.cut(s) as f64
    }
    fn bound(&self) -> f64 {
        self.0.edge_count() as f64 + 1.0
    }
    fn is_normalized(&self) -> bool {
        true
    }
}

/// Owned variant of [`CutFunction`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwnedCut(pub Graph);

impl SetFunction for OwnedCut {
    fn ground_size(&self) -> usize {
        self.0.vertex_count()
    }
    fn value(&self, s: Subset) -> f64 {
        self.0.cut(s) as f64
    }
    fn bound(&self) -> f64 {
        self.0.edge_count() as f64 + 1.0
    }
    fn is_normalized(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::{is_submodular, DEFAULT_TOLERANCE};

    // P3 with vertices 1,2,3 mapped to bits 0,1,2.
    fn p3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn s(e: &[usize]) -> Subset {
        Subset::from_elements(e.iter().copied())
    }

    #[test]
    fn cut_examples() {
        assert_eq!(p3().cut(s(&[1])), 2);
        assert_eq!(p3().cut(Subset::EMPTY), 0);
        assert_eq!(p3().cut(Subset::full(3)), 0);
        assert_eq!(Graph::complete(3).unwrap().cut(s(&[0])), 2);
        assert_eq!(CutFunction(&p3()).value(s(&[1])), 2.0);
    }

    #[test]
    fn bicut_examples() {
        assert_eq!(p3().bicut(s(&[0]), s(&[2])), 0);
        assert_eq!(p3().bicut(s(&[0]), s(&[1])), 1);
        assert_eq!(p3().bicut(Subset::EMPTY, Subset::full(3)), 0);
    }

    #[test]
    fn degree_and_induced_edges() {
        assert_eq!(p3().degree(1), 2);
        assert_eq!(p3().induced_edges(Subset::full(3)), 2);
        assert_eq!(p3().induced_edges(Subset::EMPTY), 0);
        for m in Subset::full(3).submasks() {
            let sum: usize = m.iter().map(|v| p3().degree(v)).sum();
            assert_eq!(p3().cut(m), sum - 2 * p3().induced_edges(m));
        }
    }

    #[test]
    fn fact1_examples() {
        assert!(p3().check_fact1(s(&[0, 1]), s(&[1, 2])));
        assert_eq!(p3().cut(s(&[0, 1])) + p3().cut(s(&[1, 2])), 2);
        let k4 = Graph::complete(4).unwrap();
        for a in Subset::full(4).submasks() {
            assert!(k4.check_fact1(a, a));
        }
    }

    #[test]
    fn domination() {
        let k4 = Graph::complete(4).unwrap();
        assert!(Subset::full(4).submasks().skip(1).all(|m| k4.is_dominating(m)));
        assert!(!k4.is_dominating(Subset::EMPTY));
        assert!(p3().is_dominating(s(&[1])));
        assert!(!p3().is_dominating(s(&[0])));
        assert!(Graph::empty(0).unwrap().is_dominating(Subset::EMPTY));
    }

    #[test]
    fn complete_graph_strict_slack() {
        let k5 = Graph::complete(5).unwrap();
        for a in Subset::full(5).submasks() {
            for b in Subset::full(5).submasks() {
                if a.is_comparable(b) {
                    continue;
                }
                let lhs = k5.cut(a) + k5.cut(b);
                let rhs = k5.cut(a.union(b)) + k5.cut(a.intersection(b));
                assert!(lhs >= rhs + 2);
            }
        }
        assert!(is_submodular(&CutFunction(&k5), DEFAULT_TOLERANCE).unwrap());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        let asym = alloc::vec![Subset::singleton(1), Subset::EMPTY];
        assert!(Graph::from_adjacency(asym).is_err());
    }
}
