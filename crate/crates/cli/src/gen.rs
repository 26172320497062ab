//! Seeded instance generators. A seed fully determines the output.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use setmax_core::ground::{CoverageFunction, FnFunction, ModularFunction, TableFunction};
use setmax_core::{Graph, SetFunction, Subset, SubsetSystem};

use crate::instance::{Instance, Theta};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Values uniform in `[-1, 1)`.
pub fn random_table(n: usize, rng: &mut ChaCha8Rng) -> TableFunction {
    let values = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    TableFunction::new(n, values).expect("n within the table cap")
}

/// Values uniform in `[0, 1)` with zero at the empty set.
pub fn random_nonneg_table(n: usize, rng: &mut ChaCha8Rng) -> TableFunction {
    let values = (0..1usize << n).map(|i| if i == 0 { 0.0 } else { rng.gen_range(0.0..1.0) }).collect();
    TableFunction::new(n, values).expect("n within the table cap")
}

/// `G(n, p)`.
pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::empty(n).expect("n within the subset word");
    for u in 0..n {
        for w in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, w).expect("distinct endpoints in range");
            }
        }
    }
    g
}

/// `n + 2` items with weights in `[0.1, 1)`, each covered by every element
/// with probability 0.3; every element covers at least one item, so all
/// singleton values are positive.
pub fn random_coverage(n: usize, rng: &mut ChaCha8Rng) -> CoverageFunction {
    let m = n + 2;
    let mut items: Vec<(f64, Subset)> = (0..m)
        .map(|_| {
            let cover: Subset = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            (rng.gen_range(0.1..1.0), cover)
        })
        .collect();
    for v in 0..n {
        let i = rng.gen_range(0..m);
        items[i].1.insert(v);
    }
    CoverageFunction::new(n, items).expect("valid coverage items")
}

/// Submodular and of either sign: a random coverage function plus modular
/// weights uniform in `[-1, 1)`.
pub fn random_submodular(n: usize, rng: &mut ChaCha8Rng) -> TableFunction {
    let cov = random_coverage(n, rng);
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let f = FnFunction::new(n, move |s: Subset| cov.value(s) + s.iter().map(|v| w[v]).sum::<f64>());
    TableFunction::from_fn(&f).expect("n within the table cap")
}

pub fn random_modular(n: usize, rng: &mut ChaCha8Rng) -> ModularFunction {
    ModularFunction::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

/// Antichain of one to four random maximal sets.
pub fn random_antichain(n: usize, rng: &mut ChaCha8Rng) -> Vec<Subset> {
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

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemChoice {
    GraphIndependence,
    Cardinality,
    Explicit,
}

/// Random downward-closed system of the given kind.
pub fn random_system(n: usize, kind: SystemChoice, rng: &mut ChaCha8Rng) -> SubsetSystem {
    match kind {
        SystemChoice::GraphIndependence => SubsetSystem::graph_independence(random_graph(n, 0.5, rng)),
        SystemChoice::Cardinality => SubsetSystem::cardinality(n, rng.gen_range(0..=n)),
        SystemChoice::Explicit => SubsetSystem::explicit(n, random_antichain(n, rng)),
    }
    .expect("generated systems are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaChoice {
    Table,
    Cut,
    Coverage,
    Modular,
}

pub fn random_theta(n: usize, kind: ThetaChoice, rng: &mut ChaCha8Rng) -> Theta {
    match kind {
        ThetaChoice::Table => Theta::Table(random_table(n, rng)),
        ThetaChoice::Cut => Theta::Cut(random_graph(n, 0.5, rng)),
        ThetaChoice::Coverage => Theta::Coverage(random_coverage(n, rng)),
        ThetaChoice::Modular => Theta::Modular(random_modular(n, rng)),
    }
}

pub fn random_instance(n: usize, theta: ThetaChoice, system: Option<SystemChoice>, seed: u64) -> Instance {
    let mut rng = rng(seed);
    let theta = random_theta(n, theta, &mut rng);
    let system = system.map(|k| random_system(n, k, &mut rng));
    Instance { theta, graph: None, system }
}

#[cfg(test)]
mod tests {
    use super::*;
    use setmax_core::ground::{is_submodular, DEFAULT_TOLERANCE};

    #[test]
    fn seeds_determine_instances() {
        let a = random_instance(5, ThetaChoice::Table, Some(SystemChoice::Explicit), 7);
        let b = random_instance(5, ThetaChoice::Table, Some(SystemChoice::Explicit), 7);
        assert_eq!(a, b);
        assert_ne!(a, random_instance(5, ThetaChoice::Table, Some(SystemChoice::Explicit), 8));
    }

    #[test]
    fn generated_functions_have_their_shape() {
        let mut r = rng(1);
        for n in 1..=7 {
            assert!(is_submodular(&random_submodular(n, &mut r), DEFAULT_TOLERANCE).unwrap());
            let c = random_coverage(n, &mut r);
            assert!((0..n).all(|v| c.value(Subset::singleton(v)) > 0.0));
            for kind in [SystemChoice::GraphIndependence, SystemChoice::Cardinality, SystemChoice::Explicit] {
                assert!(random_system(n, kind, &mut r).is_downward_closed().unwrap());
            }
        }
    }
}
