use thiserror::Error;

use crate::construct::TraceStep;

pub type Result<T> = std::result::Result<T, Error>;

/// Which clause of the constructor's input contract a graph violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractViolation {
    Disconnected,
    TooFewVertices,
    ContainsK4,
}

impl std::fmt::Display for ContractViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ContractViolation::Disconnected => "graph is disconnected",
            ContractViolation::TooFewVertices => "graph has fewer than 4 vertices",
            ContractViolation::ContainsK4 => "contains K4",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("unsupported graph size {n} (maximum {max})")]
    UnsupportedSize { n: usize, max: usize },

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("duplicate vertex {0}")]
    DuplicateVertex(usize),

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("input contract violated: {0}")]
    Contract(ContractViolation),

    #[error("graph is disconnected; distances are not all finite")]
    Disconnected,

    #[error("packing search for {class} exceeded the node budget of {budget}")]
    PackingBudget { class: String, budget: u64 },

    #[error("graph on {n} vertices exceeds the exhaustive search cap of {cap}")]
    OracleCap { n: usize, cap: usize },

    #[error("construction invariant failed: {message}")]
    ConstructionInvariant { message: String, trace: Vec<TraceStep> },

    #[error("unknown graph name `{0}`")]
    UnknownName(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
