//! Astral graphs: unions of stars centered outside a distinguished
//! independent set. They are the nodes of the branch and bound and are stored
//! canonically by that independent set, the empty set standing for `K_n`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ground::Subset;

/// Largest vertex count for [`verify_fact6`].
pub const FACT6_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Astral {
    indep: Subset,
    n: usize,
}

impl Astral {
    /// The edgeless graph on `n >= 2` vertices.
    pub fn root(n: usize) -> Result<Self> {
        Self::with_indep(n, Subset::full(n))
    }

    /// The astral whose unique non-trivial maximal independent set is
    /// `indep`; `indep` must have at least two elements.
    pub fn with_indep(n: usize, indep: Subset) -> Result<Self> {
        if n < 2 || n > crate::ground::MAX_ELEMENTS {
            return Err(Error::Argument("astral graphs need 2..=64 vertices"));
        }
        if !indep.fits(n) || indep.len() < 2 {
            return Err(Error::Argument("astral independent set must fit the ground set and have >= 2 elements"));
        }
        Ok(Self { indep, n })
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 || n > crate::ground::MAX_ELEMENTS {
            return Err(Error::Argument("astral graphs need 2..=64 vertices"));
        }
        Ok(Self { indep: Subset::EMPTY, n })
    }

    /// Canonical key; `EMPTY` for `K_n`.
    pub fn indep(&self) -> Subset {
        self.indep
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_complete(&self) -> bool {
        self.indep.is_empty()
    }

    /// Distance from the root in the branching tree.
    pub fn depth(&self) -> usize {
        if self.is_complete() {
            self.n - 1
        } else {
            self.n - self.indep.len()
        }
    }

    /// Adds the star centered at `v`. From a two-element independent set the
    /// result is `K_n`.
    pub fn branch(&self, v: usize) -> Result<Self> {
        if self.is_complete() {
            return Err(Error::Argument("cannot branch from K_n"));
        }
        if !self.indep.contains(v) {
            return Err(Error::Argument("branching element must lie in the independent set"));
        }
        if self.indep.len() == 2 {
            return Ok(Self { indep: Subset::EMPTY, n: self.n });
        }
        Ok(Self { indep: self.indep.without(v), n: self.n })
    }

    /// All children produced by branching, in ascending element order.
    pub fn children(&self) -> impl Iterator<Item = Astral> + '_ {
        self.indep.iter().filter_map(move |v| self.branch(v).ok())
    }

    /// Whether `s` is feasible for the relaxed subproblem at this node:
    /// a subset of the independent set, or at most a singleton for `K_n`.
    pub fn admits(&self, s: Subset) -> bool {
        if self.is_complete() {
            s.fits(self.n) && s.len() <= 1
        } else {
            s.is_subset_of(self.indep)
        }
    }

    /// Edge set: every pair with at least one endpoint outside the
    /// independent set (all pairs for `K_n`).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for w in (u + 1)..self.n {
                if !(self.indep.contains(u) && self.indep.contains(w)) {
                    out.push((u, w));
                }
            }
        }
        out
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, self.edges()).expect("astral edges are valid")
    }

    /// `d̂(v)`: edges of `g` at `v` that are also astral edges.
    pub fn relaxed_degree(&self, g: &Graph, v: usize) -> usize {
        if self.is_complete() {
            g.degree(v)
        } else if self.indep.contains(v) {
            g.neighbors(v).difference(self.indep).len()
        } else {
            g.degree(v)
        }
    }

    /// `δ̂(s) = sum of d̂(v) over s`, defined on feasible `s`.
    pub fn delta_hat(&self, g: &Graph, s: Subset) -> Result<usize> {
        if !self.admits(s) {
            return Err(Error::Argument("subset is outside the node's feasible family"));
        }
        Ok(s.iter().map(|v| self.relaxed_degree(g, v)).sum())
    }
}

/// Checks the astral structure of `a` on its explicit edge set: exactly one
/// maximal independent set of size >= 2, equal to `a.indep()`, and every
/// such set is maximum. For `K_n` there must be none.
pub fn verify_fact6(a: &Astral) -> Result<bool> {
    let n = a.n();
    if n > FACT6_CAP {
        return Err(Error::OverCap { what: "independent set enumeration", n, cap: FACT6_CAP });
    }
    let g = a.to_graph();
    let full = Subset::full(n);
    let maximal: Vec<Subset> = full
        .submasks()
        .filter(|&s| s.len() >= 2 && g.is_independent(s))
        .filter(|&s| full.difference(s).iter().all(|v| !g.is_independent(s.with(v))))
        .collect();
    if a.is_complete() {
        return Ok(maximal.is_empty());
    }
    let max_size = maximal.iter().map(|s| s.len()).max().unwrap_or(0);
    Ok(maximal.len() == 1 && maximal[0] == a.indep() && maximal.iter().all(|s| s.len() == max_size))
}
