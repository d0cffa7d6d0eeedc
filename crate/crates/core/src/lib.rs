//! Algebraic constructions of `K_{s,t}`-free and `C_{2t}`-free bipartite graphs over
//! finite fields, grid (complete bipartite subgraph) search, polynomial embeddings with
//! empirical regularity and nondegeneracy testers, and the mod-`p` obstruction
//! polynomial that certifies grids on real hypersurfaces.
//!
//! The crate is `no_std` (with `alloc`) when built without the `std` feature. The
//! `parallel` feature spreads graph construction, grid search and embedding trials
//! over a rayon pool; results are identical to the serial paths.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod constructions;
pub mod embeddings;
pub mod gf;
pub mod graph;
pub mod gridsearch;
pub mod poly;
pub mod primes;
pub mod rng;
pub mod theta;

mod par;

pub use constructions::{
    build_graph, build_inner_product, expected_edge_count, ClaimedForbidden, ConstructionResult,
    ConstructionSpec, EdgeExpectation, Family, InnerProductMode,
};
pub use embeddings::{
    order_bound, prime_power_embedding, test_nondegeneracy, test_regularity, veronese_regular,
    FiberWitness, PolyMap, PrimeAssignment, RegularityWitness,
};
pub use gf::{fp_inv, ExtElement, ExtField, PrimeField};
pub use graph::BipartiteGraph;
pub use gridsearch::{check_kst_bound, find_kst, girth, max_codegree, GridWitness, KstBound, SearchOutcome};
pub use poly::{Monomial, Polynomial};
pub use theta::{
    admissible_tuples, grid_dimension, theta_closed_form_k2, theta_poly, DimensionTuple, ThetaPoly,
};

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("non-invertible element")]
    NonInvertible,
    #[error("non-unit at Laurent monomial")]
    NonUnitAtLaurentMonomial,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus mismatch between operands")]
    ModulusMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("domain too small: {domain} points, {needed} required")]
    DomainTooSmall { domain: u64, needed: u64 },
    #[error("no expectation available for this family")]
    NoExpectation,
    #[error("exponent {exponent} is not below the field prime {p}")]
    ExponentTooLarge { exponent: u64, p: u64 },
    #[error("p^k = {0} exceeds the tractability cap")]
    TooLarge(u64),
    #[error("cross-check failed: formula gives {formula}, criterion gives {criterion}")]
    CrossCheck { formula: u64, criterion: u64 },
}
