//! Exact decisions for star arrowing problems on small graphs.
//!
//! The central relation: a host graph G arrows the pair (n K_{1,p}, K_{1,m})
//! when every red/blue edge coloring of G contains a red packing of n
//! disjoint stars K_{1,p} or a blue star K_{1,m}. This crate decides that
//! relation exactly with a certificate, reproduces small connected size
//! Ramsey numbers by exhaustive enumeration, and produces witness colorings
//! for under-budget hosts by a recursive case analysis that mirrors the
//! inductive structure of the underlying extremal argument.

pub mod arrowing;
pub mod cache;
pub mod canon;
pub mod cli;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod proof;
pub mod sample;

pub use arrowing::{
    arrows, coloring_is_good, naive_arrows, ArrowingCertificate, ArrowingInstance, SearchBudget,
    TwoColoring,
};
pub use canon::{canonical_form, canonical_labeling};
pub use construct::{construct_upper, degree_partition, m_min, min_edges_for_t};
pub use graph::{EdgeId, Graph};
pub use graph6::{parse_graph6, to_graph6};
pub use proof::{proof_color, ProofTrace};
