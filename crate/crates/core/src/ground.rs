//! Ground sets, subsets, set-function oracles and the brute-force reference
//! routines every algorithm in this crate is tested against.
//!
//! Elements are indexed `0..n` and a [`Subset`] is a `u64` bit vector, so the
//! ground set holds at most [`MAX_ELEMENTS`] elements. Subsets are totally
//! ordered by the unsigned value of their bits; together with function value
//! this gives the order used everywhere to pick a unique maximizer: higher
//! value wins, ties go to the smaller subset.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Word capacity of [`Subset`].
pub const MAX_ELEMENTS: usize = 64;
/// Largest ground set [`brute_force_argmax`] will enumerate.
pub const ARGMAX_CAP: usize = 24;
/// Largest ground set for the pairwise (sub/super)modularity checks.
pub const PAIRWISE_CAP: usize = 14;
/// Largest ground set a [`TableFunction`] may describe.
pub const TABLE_CAP: usize = 24;
/// Default absolute tolerance for modularity-type checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("ground set must contain at least one element"));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::OverCap { what: "subset word", n, cap: MAX_ELEMENTS });
        }
        Ok(Self { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut g = Self::new(labels.len())?;
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(i)).map(String::as_str)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }
}

/// A subset of the ground set, stored as a bit vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub const fn singleton(i: usize) -> Self {
        Subset(1u64 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    #[must_use]
    pub const fn with(self, i: usize) -> Self {
        Subset(self.0 | 1u64 << i)
    }

    #[must_use]
    pub const fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1u64 << i))
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub const fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub const fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub const fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_comparable(self, other: Subset) -> bool {
        self.is_subset_of(other) || other.is_subset_of(self)
    }

    /// True if no bit at or above `n` is set.
    pub const fn fits(self, n: usize) -> bool {
        n >= 64 || self.0 >> n == 0
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Elements in ascending order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// All subsets of `self` in ascending bit order, starting at the empty set.
    pub fn submasks(self) -> Submasks {
        Submasks { mask: self.0, next: Some(0) }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl IntoIterator for Subset {
    type Item = usize;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset::from_elements(iter)
    }
}

#[derive(Debug, Clone)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Elements {}

#[derive(Debug, Clone)]
pub struct Submasks {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = (cur != self.mask).then(|| cur.wrapping_sub(self.mask) & self.mask);
        Some(Subset(cur))
    }
}

/// `a` strictly precedes `b` in the maximization order: larger value first,
/// ties broken towards the smaller subset.
pub fn beats(a: (f64, Subset), b: (f64, Subset)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// A value oracle `2^V -> R`.
///
/// Implementations must be deterministic and free of hidden mutable state so
/// they can be queried from several threads at once.
pub trait SetFunction {
    /// Number of ground elements.
    fn ground_size(&self) -> usize;

    /// Value at `s`. Callers guarantee `s` fits the ground set; use
    /// [`evaluate`] for a checked call.
    fn value(&self, s: Subset) -> f64;

    /// Strict bound on `|value|` over all subsets.
    fn bound(&self) -> f64 {
        f64::INFINITY
    }

    /// Whether `value(EMPTY) == 0` is guaranteed.
    fn is_normalized(&self) -> bool {
        false
    }
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, s: Subset) -> f64 {
        (**self).value(s)
    }
    fn bound(&self) -> f64 {
        (**self).bound()
    }
    fn is_normalized(&self) -> bool {
        (**self).is_normalized()
    }
}

impl<F: SetFunction + ?Sized> SetFunction for alloc::boxed::Box<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, s: Subset) -> f64 {
        (**self).value(s)
    }
    fn bound(&self) -> f64 {
        (**self).bound()
    }
    fn is_normalized(&self) -> bool {
        (**self).is_normalized()
    }
}

impl<F: SetFunction + ?Sized> SetFunction for alloc::sync::Arc<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, s: Subset) -> f64 {
        (**self).value(s)
    }
    fn bound(&self) -> f64 {
        (**self).bound()
    }
    fn is_normalized(&self) -> bool {
        (**self).is_normalized()
    }
}

/// Checked evaluation.
pub fn evaluate<F: SetFunction + ?Sized>(f: &F, s: Subset) -> Result<f64> {
    let n = f.ground_size();
    if !s.fits(n) {
        return Err(Error::WidthMismatch { subset: s, n });
    }
    Ok(f.value(s))
}

/// A bound strictly above `max_abs`.
pub fn strict_bound(max_abs: f64) -> f64 {
    max_abs + max_abs.max(1.0) * 1e-9
}

/// Explicit value table indexed by subset bits.
#[derive(Debug, Clone, PartialEq)]
pub struct TableFunction {
    n: usize,
    values: Vec<f64>,
    bound: f64,
}

impl TableFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > TABLE_CAP {
            return Err(Error::OverCap { what: "value table", n, cap: TABLE_CAP });
        }
        if values.len() != 1usize << n {
            return Err(Error::Argument("value table must hold exactly 2^n entries"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Argument("value table entries must be finite"));
        }
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self { n, values, bound: strict_bound(max_abs) })
    }

    /// Tabulate any oracle.
    pub fn from_fn<F: SetFunction + ?Sized>(f: &F) -> Result<Self> {
        let n = f.ground_size();
        if n > TABLE_CAP {
            return Err(Error::OverCap { what: "value table", n, cap: TABLE_CAP });
        }
        let values = Subset::full(n).submasks().map(|s| f.value(s)).collect();
        Self::new(n, values)
    }

    /// Overrides the automatically derived bound.
    pub fn with_bound(mut self, bound: f64) -> Result<Self> {
        if self.values.iter().any(|v| v.abs() >= bound) {
            return Err(Error::Argument("declared bound is not a strict bound on the table"));
        }
        self.bound = bound;
        Ok(self)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl SetFunction for TableFunction {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn value(&self, s: Subset) -> f64 {
        self.values[s.bits() as usize]
    }
    fn bound(&self) -> f64 {
        self.bound
    }
    fn is_normalized(&self) -> bool {
        self.values[0] == 0.0
    }
}

/// Weight-sum function `s -> sum of w[i] for i in s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularFunction {
    weights: Vec<f64>,
}

impl ModularFunction {
    pub fn new(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SetFunction for ModularFunction {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }
    fn value(&self, s: Subset) -> f64 {
        s.iter().map(|i| self.weights[i]).sum()
    }
    fn bound(&self) -> f64 {
        let pos: f64 = self.weights.iter().filter(|w| **w > 0.0).sum();
        let neg: f64 = self.weights.iter().filter(|w| **w < 0.0).sum();
        strict_bound(pos.max(-neg))
    }
    fn is_normalized(&self) -> bool {
        true
    }
}

/// Weighted coverage: each item has a non-negative weight and a set of
/// ground elements covering it; `value(s)` is the weight of items covered by `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageFunction {
    n: usize,
    items: Vec<(f64, Subset)>,
}

impl CoverageFunction {
    pub fn new(n: usize, items: Vec<(f64, Subset)>) -> Result<Self> {
        if n == 0 || n > MAX_ELEMENTS {
            return Err(Error::OverCap { what: "subset word", n, cap: MAX_ELEMENTS });
        }
        for &(w, cover) in &items {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::Argument("coverage weights must be finite and non-negative"));
            }
            if !cover.fits(n) {
                return Err(Error::WidthMismatch { subset: cover, n });
            }
        }
        Ok(Self { n, items })
    }

    pub fn items(&self) -> &[(f64, Subset)] {
        &self.items
    }
}

impl SetFunction for CoverageFunction {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn value(&self, s: Subset) -> f64 {
        self.items
            .iter()
            .filter(|(_, cover)| !cover.intersection(s).is_empty())
            .map(|(w, _)| *w)
            .sum()
    }
    fn bound(&self) -> f64 {
        strict_bound(self.items.iter().map(|(w, _)| *w).sum())
    }
    fn is_normalized(&self) -> bool {
        true
    }
}

/// Adapts a closure into a [`SetFunction`].
#[derive(Clone)]
pub struct FnFunction<F> {
    n: usize,
    f: F,
    bound: f64,
    normalized: bool,
}

impl<F: Fn(Subset) -> f64> FnFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f, bound: f64::INFINITY, normalized: false }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    pub fn normalized(mut self) -> Self {
        self.normalized = true;
        self
    }
}

impl<F: Fn(Subset) -> f64> SetFunction for FnFunction<F> {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn value(&self, s: Subset) -> f64 {
        (self.f)(s)
    }
    fn bound(&self) -> f64 {
        self.bound
    }
    fn is_normalized(&self) -> bool {
        self.normalized
    }
}

/// `f - f(EMPTY)`; see [`normalize`].
#[derive(Debug, Clone)]
pub struct Normalized<F> {
    inner: F,
    shift: f64,
}

impl<F> Normalized<F> {
    /// The constant subtracted from the inner function.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: SetFunction> SetFunction for Normalized<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn value(&self, s: Subset) -> f64 {
        if s.is_empty() {
            0.0
        } else {
            self.inner.value(s) - self.shift
        }
    }
    fn bound(&self) -> f64 {
        self.inner.bound() + self.shift.abs()
    }
    fn is_normalized(&self) -> bool {
        true
    }
}

/// Shift `f` so that it vanishes at the empty set. The maximizer is unchanged.
pub fn normalize<F: SetFunction>(f: F) -> Normalized<F> {
    let shift = f.value(Subset::EMPTY);
    Normalized { inner: f, shift }
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::OverCap { what, n, cap })
    } else {
        Ok(())
    }
}

/// Maximizer of `f` over all of `2^V` under the total order, with its value.
pub fn brute_force_argmax<F: SetFunction + ?Sized>(f: &F) -> Result<(Subset, f64)> {
    brute_force_argmax_within(f, Subset::full(f.ground_size()), |_| true)
}

/// Maximizer of `f` over the subsets of `domain` accepted by `member`.
///
/// The empty set is always a candidate so a result always exists; callers
/// working with subset systems rely on the empty set being a member.
pub fn brute_force_argmax_within<F, P>(f: &F, domain: Subset, mut member: P) -> Result<(Subset, f64)>
where
    F: SetFunction + ?Sized,
    P: FnMut(Subset) -> bool,
{
    check_cap("brute-force argmax", domain.len(), ARGMAX_CAP)?;
    let mut best = (f.value(Subset::EMPTY), Subset::EMPTY);
    for s in domain.submasks().skip(1) {
        if !member(s) {
            continue;
        }
        let v = f.value(s);
        if beats((v, s), best) {
            best = (v, s);
        }
    }
    Ok((best.1, best.0))
}

fn tabulate<F: SetFunction + ?Sized>(f: &F) -> Vec<f64> {
    Subset::full(f.ground_size()).submasks().map(|s| f.value(s)).collect()
}

/// Largest value of `table[A∪B] + table[A∩B] - table[A] - table[B]` over
/// incomparable pairs, with the pair attaining it. `None` when every pair is
/// comparable (n = 1).
pub(crate) fn worst_pair<W>(table: &[f64], n: usize, mut weight: W) -> Option<(Subset, Subset, f64)>
where
    W: FnMut(Subset, Subset, f64) -> f64,
{
    let full = Subset::full(n).bits();
    let mut worst: Option<(Subset, Subset, f64)> = None;
    for a in 0..=full {
        for b in (a + 1)..=full {
            if a & !b == 0 || b & !a == 0 {
                continue;
            }
            let gap = table[(a | b) as usize] + table[(a & b) as usize] - table[a as usize] - table[b as usize];
            let (sa, sb) = (Subset(a), Subset(b));
            let score = weight(sa, sb, gap);
            if worst.map_or(true, |w| score > w.2) {
                worst = Some((sa, sb, score));
            }
        }
    }
    worst
}

/// The pair of subsets violating submodularity the most, if the violation
/// exceeds `tolerance`.
pub fn submodularity_violation<F: SetFunction + ?Sized>(f: &F, tolerance: f64) -> Result<Option<(Subset, Subset, f64)>> {
    let n = f.ground_size();
    check_cap("pairwise check", n, PAIRWISE_CAP)?;
    let table = tabulate(f);
    Ok(worst_pair(&table, n, |_, _, gap| gap).filter(|w| w.2 > tolerance))
}

/// `f(A) + f(B) >= f(A∪B) + f(A∩B)` for every pair, within `tolerance`.
pub fn is_submodular<F: SetFunction + ?Sized>(f: &F, tolerance: f64) -> Result<bool> {
    Ok(submodularity_violation(f, tolerance)?.is_none())
}

/// `f(A) + f(B) <= f(A∪B) + f(A∩B)` for every pair, within `tolerance`.
pub fn is_supermodular<F: SetFunction + ?Sized>(f: &F, tolerance: f64) -> Result<bool> {
    let n = f.ground_size();
    check_cap("pairwise check", n, PAIRWISE_CAP)?;
    let table = tabulate(f);
    Ok(worst_pair(&table, n, |_, _, gap| -gap).map_or(true, |w| w.2 <= tolerance))
}

pub fn is_modular<F: SetFunction + ?Sized>(f: &F, tolerance: f64) -> Result<bool> {
    Ok(is_submodular(f, tolerance)? && is_supermodular(f, tolerance)?)
}
