//! Submodular maximization engines for the branch-and-bound subproblems:
//! the closed form for modular objectives, an exact interval search driven
//! by the preservation rules, and the LS local search.

use alloc::vec::Vec;
use core::cell::Cell;

use crate::error::{Error, Result};
use crate::ground::{beats, SetFunction, Subset};

/// `[lo, hi] = { S : lo ⊆ S ⊆ hi }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Subset,
    hi: Subset,
}

impl Interval {
    pub fn new(lo: Subset, hi: Subset) -> Result<Self> {
        if !lo.is_subset_of(hi) {
            return Err(Error::Argument("interval lower end must be contained in the upper end"));
        }
        Ok(Self { lo, hi })
    }

    /// `[EMPTY, hi]`.
    pub fn below(hi: Subset) -> Self {
        Self { lo: Subset::EMPTY, hi }
    }

    pub fn lo(&self) -> Subset {
        self.lo
    }

    pub fn hi(&self) -> Subset {
        self.hi
    }

    /// Elements of `hi \ lo`.
    pub fn free(&self) -> Subset {
        self.hi.difference(self.lo)
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.lo.is_subset_of(s) && s.is_subset_of(self.hi)
    }
}

/// Maximizes `s -> sum of weights[v]` over subsets of `domain`: keep every
/// element with non-negative weight.
pub fn maximize_modular(weights: &[f64], domain: Subset) -> (Subset, f64) {
    domain
        .iter()
        .filter(|&v| weights[v] >= 0.0)
        .fold((Subset::EMPTY, 0.0), |(s, total), v| (s.with(v), total + weights[v]))
}

/// The two preservation rules for free element `v` of `iv`:
/// `prune_upper` when `g(lo) - g(lo ∪ v) >= 0` (the half containing `v` can
/// be dropped) and `prune_lower` when `g(hi) - g(hi \ v) >= 0` (the half
/// without `v` can be dropped).
pub fn preservation_check<G: SetFunction + ?Sized>(g: &G, iv: &Interval, v: usize) -> Result<(bool, bool)> {
    if !iv.free().contains(v) {
        return Err(Error::Argument("element is not free in the interval"));
    }
    let upper = g.value(iv.lo) - g.value(iv.lo.with(v)) >= 0.0;
    let lower = g.value(iv.hi) - g.value(iv.hi.without(v)) >= 0.0;
    Ok((upper, lower))
}

/// Exact maximizer of a submodular `g` over `iv` under the total order.
///
/// Depth-first search over intervals. Each interval is first shrunk to a
/// fixpoint of the preservation rules, its endpoints are offered as
/// incumbents, and it is dropped when the submodular bound
/// `g(lo) + sum of positive marginals at lo` cannot beat the incumbent.
/// Otherwise it splits on the free element with the largest marginal at
/// `lo`, exploring the half containing it first.
///
/// The rule dropping the half without `v` is applied only on a strictly
/// positive margin: with a zero margin that half may hold a tied maximizer
/// that is smaller in the total order.
pub fn interval_max<G: SetFunction + ?Sized>(g: &G, iv: Interval) -> (Subset, f64) {
    let mut best = (g.value(iv.lo), iv.lo);
    let mut stack = alloc::vec![iv];
    let mut gains: Vec<(usize, f64)> = Vec::new();
    while let Some(Interval { mut lo, mut hi }) = stack.pop() {
        let mut g_lo = g.value(lo);
        let mut g_hi = g.value(hi);
        loop {
            let mut changed = false;
            gains.clear();
            for v in hi.difference(lo).iter() {
                let up = g.value(lo.with(v));
                if g_lo - up >= 0.0 {
                    hi.remove(v);
                    g_hi = g.value(hi);
                    changed = true;
                } else if g_hi - g.value(hi.without(v)) > 0.0 {
                    lo.insert(v);
                    g_lo = g.value(lo);
                    changed = true;
                } else if !changed {
                    gains.push((v, up - g_lo));
                }
            }
            if !changed {
                break;
            }
        }
        for cand in [(g_lo, lo), (g_hi, hi)] {
            if beats(cand, best) {
                best = cand;
            }
        }
        if lo == hi || gains.is_empty() {
            continue;
        }
        let bound = g_lo + gains.iter().map(|(_, d)| d.max(0.0)).sum::<f64>();
        if bound < best.0 {
            continue;
        }
        let &(v, _) = gains
            .iter()
            .reduce(|a, b| if b.1.abs() > a.1.abs() { b } else { a })
            .expect("gains is non-empty");
        stack.push(Interval { lo, hi: hi.without(v) });
        stack.push(Interval { lo: lo.with(v), hi });
    }
    (best.1, best.0)
}

/// Outcome of [`ls_max`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsResult {
    /// Better of the terminal set and its complement in the domain.
    pub best: Subset,
    pub value: f64,
    /// Number of accepted add/remove moves.
    pub subiterations: usize,
    /// Best singleton the search started from.
    pub seed: Subset,
    /// Locally optimal set the moves ended at.
    pub terminal: Subset,
}

/// Multiplicative local search over subsets of `domain` for the function
/// `h`. Starts at the best singleton and repeatedly applies the first
/// improving addition, then the first improving removal, in ascending
/// element order, where improving means exceeding `(1 + eps / r^2) · h(X')`.
/// While `h(X') <= 0` any strict improvement is accepted.
///
/// Returns `(seed, terminal, subiterations)`.
pub(crate) fn local_search<H: FnMut(Subset) -> f64>(mut h: H, domain: Subset, epsilon: f64) -> (Subset, Subset, usize) {
    let r = domain.len();
    if r == 0 {
        return (Subset::EMPTY, Subset::EMPTY, 0);
    }
    let factor = 1.0 + epsilon / (r * r) as f64;
    let mut seed = (f64::NEG_INFINITY, Subset::EMPTY);
    for x in domain.iter() {
        let s = Subset::singleton(x);
        let v = h(s);
        if v > seed.0 {
            seed = (v, s);
        }
    }
    let (mut cur_val, mut cur) = seed;
    let mut moves = 0;
    'search: loop {
        let threshold = if cur_val > 0.0 { factor * cur_val } else { cur_val };
        for x in domain.difference(cur).iter() {
            let v = h(cur.with(x));
            if v > threshold {
                cur = cur.with(x);
                cur_val = v;
                moves += 1;
                continue 'search;
            }
        }
        for x in cur.iter() {
            let v = h(cur.without(x));
            if v > threshold {
                cur = cur.without(x);
                cur_val = v;
                moves += 1;
                continue 'search;
            }
        }
        break;
    }
    (seed.1, cur, moves)
}

/// Constant in the documented subiteration bound
/// `subiterations <= C · (1/eps) · r² · log2(r) + C`.
///
/// Values start at the best singleton `s > 0`, never exceed `r · s` for a
/// normalized non-negative submodular function, and grow by a factor above
/// `1 + eps/r²` per move, so the count is at most
/// `ln r / ln(1 + eps/r²) <= (r²/eps + 1) · ln 2 · log2 r`, which is below the
/// bound with `C = 1`.
pub const LS_SUBITERATION_CONSTANT: f64 = 1.0;

pub fn ls_subiteration_bound(r: usize, epsilon: f64) -> f64 {
    let r = r as f64;
    let log = if r > 1.0 { libm::log2(r) } else { 0.0 };
    LS_SUBITERATION_CONSTANT * r * r * log / epsilon + LS_SUBITERATION_CONSTANT
}

/// Approximate maximizer of a non-negative submodular `g` over subsets of
/// `domain`, within `1/3 - eps/r` of optimal.
pub fn ls_max<G: SetFunction + ?Sized>(g: &G, domain: Subset, epsilon: f64) -> Result<LsResult> {
    if !(epsilon > 0.0) {
        return Err(Error::Argument("epsilon must be positive"));
    }
    let negative = Cell::new(false);
    let h = |s: Subset| {
        let v = g.value(s);
        if v < 0.0 || v.is_nan() {
            negative.set(true);
        }
        v
    };
    let (seed, terminal, subiterations) = local_search(h, domain, epsilon);
    if negative.get() {
        return Err(Error::Contract("local search requires a non-negative function"));
    }
    let complement = domain.difference(terminal);
    let (a, b) = ((g.value(terminal), terminal), (g.value(complement), complement));
    if a.0 < 0.0 || b.0 < 0.0 {
        return Err(Error::Contract("local search requires a non-negative function"));
    }
    let (value, best) = if beats(b, a) { b } else { a };
    Ok(LsResult { best, value, subiterations, seed, terminal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, OwnedCut};
    use crate::ground::{brute_force_argmax_within, FnFunction, ModularFunction};
    use alloc::vec;

    fn s(e: &[usize]) -> Subset {
        Subset::from_elements(e.iter().copied())
    }

    #[test]
    fn modular_examples() {
        assert_eq!(maximize_modular(&[2.0, -1.0, 0.5], Subset::full(3)), (s(&[0, 2]), 2.5));
        assert_eq!(maximize_modular(&[-2.0, -1.0], Subset::full(2)), (Subset::EMPTY, 0.0));
        assert_eq!(maximize_modular(&[0.0, 1.0], Subset::full(2)), (s(&[0, 1]), 1.0));
        assert_eq!(maximize_modular(&[5.0, 1.0], s(&[1])), (s(&[1]), 1.0));
    }

    #[test]
    fn preservation_examples() {
        let g = ModularFunction::new(vec![3.0, -2.0]);
        let iv = Interval::below(Subset::full(2));
        assert_eq!(preservation_check(&g, &iv, 1).unwrap(), (true, false));
        assert_eq!(preservation_check(&g, &iv, 0).unwrap(), (false, true));
        let fixed = Interval::new(s(&[0]), Subset::full(2)).unwrap();
        assert!(preservation_check(&g, &fixed, 0).is_err());
        assert!(Interval::new(s(&[0]), s(&[1])).is_err());
    }

    #[test]
    fn interval_examples() {
        let g = ModularFunction::new(vec![3.0, -2.0]);
        assert_eq!(interval_max(&g, Interval::below(Subset::full(2))), (s(&[0]), 3.0));
        let point = Interval::new(s(&[1]), s(&[1])).unwrap();
        assert_eq!(interval_max(&g, point), (s(&[1]), -2.0));
        // zero-weight element: the smaller subset wins the tie
        let z = ModularFunction::new(vec![0.0, 1.0]);
        assert_eq!(interval_max(&z, Interval::below(Subset::full(2))), (s(&[1]), 1.0));
    }

    #[test]
    fn interval_matches_brute_force_on_cycle_cut() {
        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let cut = OwnedCut(c6);
        let (set, val) = interval_max(&cut, Interval::below(Subset::full(6)));
        assert_eq!((set, val), brute_force_argmax_within(&cut, Subset::full(6), |_| true).unwrap());
        assert_eq!(val, 6.0);
    }

    #[test]
    fn ls_examples() {
        let g = ModularFunction::new(vec![1.0, 2.0, 3.0]);
        let r = ls_max(&g, Subset::full(3), 0.1).unwrap();
        assert_eq!((r.best, r.value), (Subset::full(3), 6.0));
        assert_eq!(r.seed, s(&[2]));
        assert_eq!(r.subiterations, 2);
        let zero = FnFunction::new(4, |_| 0.0);
        let r = ls_max(&zero, Subset::full(4), 0.5).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.subiterations, 0);
        let neg = ModularFunction::new(vec![1.0, -1.0]);
        assert!(matches!(ls_max(&neg, Subset::full(2), 0.5), Err(Error::Contract(_))));
        assert!(ls_max(&g, Subset::full(3), 0.0).is_err());
        let empty = ls_max(&g, Subset::EMPTY, 1.0).unwrap();
        assert_eq!((empty.best, empty.value), (Subset::EMPTY, 0.0));
    }

    #[test]
    fn ls_restricted_domain() {
        let g = ModularFunction::new(vec![1.0, 2.0, 3.0, 4.0]);
        let r = ls_max(&g, s(&[0, 2]), 0.5).unwrap();
        assert_eq!((r.best, r.value), (s(&[0, 2]), 4.0));
    }

    #[test]
    fn subiteration_bound_values() {
        assert_eq!(ls_subiteration_bound(1, 1.0), 1.0);
        assert_eq!(ls_subiteration_bound(4, 0.5), 1.0 * 16.0 * 2.0 / 0.5 + 1.0);
    }
}
