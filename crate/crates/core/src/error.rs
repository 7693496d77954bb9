//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {got} outside supported range 1..=64")]
    BadVertexCount { got: usize },
    #[error("endpoint {endpoint} out of range for {vertex_count} vertices")]
    EndpointOutOfRange {
        endpoint: usize,
        vertex_count: usize,
    },
    #[error("loop edge at vertex {vertex}")]
    LoopEdge { vertex: usize },
    #[error("edge {{{a}, {b}}} already present")]
    EdgeAlreadyPresent { a: usize, b: usize },
    #[error("edge id {id} out of range for {edge_count} edges")]
    BadEdgeId { id: usize, edge_count: usize },
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate graph6 is invalid: {0}")]
    BadGraph(#[from] Graph6Error),
    #[error("certificate json is invalid: {0}")]
    BadJson(#[from] serde_json::Error),
    #[error("certificate witness references a bad edge id: {0}")]
    BadWitness(#[from] GraphError),
    #[error("refuting certificate carries no witness coloring")]
    MissingWitness,
    #[error("arrowing certificate must not carry a witness coloring")]
    UnexpectedWitness,
    #[error("witness coloring is not good: {reason}")]
    WitnessNotGood { reason: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("graph6 vertex count {got} exceeds supported maximum 64")]
    TooManyVertices { got: usize },
    #[error("invalid graph6 byte {byte:#04x} at position {pos}")]
    BadByte { byte: u8, pos: usize },
    #[error("graph6 string truncated: expected {expected} data bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing bytes after graph6 payload")]
    TrailingData,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("arrowing instance parameters must all be at least 1 (got n={n}, p={p}, m={m})")]
    NonPositive { n: usize, p: usize, m: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("search node budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("naive enumeration limited to 20 edges, host has {edges}")]
    TooManyEdgesForNaive { edges: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("t={t} exceeds m={m}; the minimum-edge bound is undefined there")]
    TExceedsM { t: usize, m: usize },
    #[error("construction needs {needed} vertices, above the supported 64")]
    TooLarge { needed: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("edge budget {requested} exceeds enumeration cap {cap}")]
    EdgeBudget { requested: usize, cap: usize },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache line {line} is not a valid record: {reason}")]
    BadRecord { line: usize, reason: String },
    #[error("conflicting verdicts for {graph6} n={n} p={p} m={m}: cached arrows={cached}, new arrows={new}")]
    Conflict {
        graph6: String,
        n: usize,
        p: usize,
        m: usize,
        cached: bool,
        new: bool,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofError {
    #[error("host must be connected")]
    Disconnected,
    #[error("host has {edges} edges, above the inductive budget {max} for this instance")]
    EdgeBudget { edges: usize, max: usize },
    #[error("m={m} is below the threshold {threshold} for n={n}, p={p}")]
    MBelowThreshold {
        m: usize,
        threshold: usize,
        n: usize,
        p: usize,
    },
    #[error("reduction needs more than 64 vertices")]
    VertexCap,
    #[error("edge {{{a}, {b}}} stays inside one degree class; the reduction needs every edge between U and V")]
    IntraClassEdge { a: usize, b: usize },
    #[error("pruned tree has no qualifying deep vertex")]
    DegenerateSelection,
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(
        "exhaustive fallback found no good coloring for n={n} p={p} m={m} on {graph6}; \
         this contradicts the proved bound and indicates a bug"
    )]
    TheoremContradiction {
        graph6: String,
        n: usize,
        p: usize,
        m: usize,
    },
}
