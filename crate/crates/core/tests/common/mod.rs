#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use setmax_core::ground::{CoverageFunction, FnFunction, TableFunction};
use setmax_core::{Graph, SetFunction, Subset};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn table(n: usize, rng: &mut ChaCha8Rng) -> TableFunction {
    let values = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    TableFunction::new(n, values).unwrap()
}

/// Non-negative table with zero at the empty set.
pub fn nonneg_table(n: usize, rng: &mut ChaCha8Rng) -> TableFunction {
    let values = (0..1usize << n).map(|i| if i == 0 { 0.0 } else { rng.gen_range(0.0..1.0) }).collect();
    TableFunction::new(n, values).unwrap()
}

pub fn graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for u in 0..n {
        for w in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, w).unwrap();
            }
        }
    }
    g
}

/// Weighted coverage with every element covering at least one item.
pub fn coverage(n: usize, rng: &mut ChaCha8Rng) -> CoverageFunction {
    let m = n + 2;
    let mut items: Vec<(f64, Subset)> = (0..m)
        .map(|_| {
            let covers: Subset = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            (rng.gen_range(0.1..1.0), covers)
        })
        .collect();
    for v in 0..n {
        let i = rng.gen_range(0..m);
        items[i].1.insert(v);
    }
    CoverageFunction::new(n, items).unwrap()
}

/// Submodular, possibly negative: coverage plus random modular weights.
pub fn submodular(n: usize, rng: &mut ChaCha8Rng) -> TableFunction {
    let cov = coverage(n, rng);
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let f = FnFunction::new(n, move |s: Subset| cov.value(s) + s.iter().map(|v| w[v]).sum::<f64>());
    TableFunction::from_fn(&f).unwrap()
}

/// Random antichain of maximal sets.
pub fn antichain(n: usize, rng: &mut ChaCha8Rng) -> Vec<Subset> {
    let mut sets: Vec<Subset> = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let s: Subset = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if sets.iter().any(|&t| s.is_subset_of(t)) {
            continue;
        }
        sets.retain(|&t| !t.is_subset_of(s));
        sets.push(s);
    }
    sets
}
