//! Global maximization of set functions on ground sets of up to 64 elements.
//!
//! Any set function `θ` is written as `α·(f - cut_G) + θ(∅)` with `f`
//! submodular and `G` a graph ([`decompose`]); `f - cut_G` is then maximized
//! by a branch and bound whose nodes are astral graphs ([`astral`], [`bb`]),
//! optionally over a downward-closed subset system ([`constrained`]).
//!
//! Subsets are bit masks ([`Subset`]). Whenever several subsets attain the
//! same value, the one with the numerically smallest mask wins; every solver
//! and oracle in the crate applies this rule, so their outputs are
//! comparable with `==`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod astral;
pub mod bb;
pub mod constrained;
pub mod decompose;
pub mod error;
pub mod graph;
pub mod ground;
pub mod submax;

pub use astral::Astral;
pub use bb::{bb_maximize, BbConfig, BbOutcome, BbStats, Engine, FuMode, Status};
pub use constrained::{bbc_maximize, BbcConfig, BbcEngine, SubsetSystem};
pub use decompose::Decomposition;
pub use error::{Error, Result};
pub use graph::Graph;
pub use ground::{SetFunction, Subset};
