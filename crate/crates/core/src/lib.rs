//! Matching, domination and transversal numbers of small hypergraphs.
//!
//! The crate covers four layers:
//!
//! - [`hypergraph`]: the canonical incidence model.
//! - [`exact`]: branch-and-bound solvers for ν, γ and τ with certificates.
//! - [`reduce`]: edge peeling, the dominating set read off a matching of a
//!   peeled hypergraph, and edge contraction.
//! - [`families`] and [`recognize`]: generators for the rank-3 hypergraphs
//!   with γ = 2ν and a polynomial-time structural test for membership.

pub mod exact;
pub mod families;
pub mod hypergraph;
pub mod recognize;
pub mod reduce;

pub use exact::{
    check_bound_chain, max_matching, max_matching_avoiding, min_dominating, min_transversal, BoundReport, Certificate,
    Matching, SolveError, SolveKind, SolveOptions, SolveResult,
};
pub use hypergraph::{Edge, Hypergraph, HypergraphError, VertexId};
