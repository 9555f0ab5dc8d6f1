use thiserror::Error;

use crate::linkage::VertexId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkageError {
    #[error("edge {u}-{v} has non-positive or non-finite length {length}")]
    BadLength { u: VertexId, v: VertexId, length: f64 },
    #[error("edge endpoints must differ (vertex {0})")]
    SelfLoop(VertexId),
    #[error("edge {u}-{v} references undeclared vertex")]
    UnknownEndpoint { u: VertexId, v: VertexId },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("position for {0} is not finite")]
    NonFinite(VertexId),
    #[error("configuration is missing a position for vertex {0}")]
    MalformedConfiguration(VertexId),
    #[error("incompatible linkages: {0}")]
    Incompatible(String),
    #[error("vertex {0} is already fixed")]
    AlreadyFixed(VertexId),
    #[error("cannot identify {v} and {w}: {reason}")]
    QuotientForbidden {
        v: VertexId,
        w: VertexId,
        reason: String,
    },
    #[error("scale factor must be positive, got {0}")]
    BadScale(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GadgetError {
    #[error(transparent)]
    Linkage(#[from] LinkageError),
    #[error("invalid gadget parameter: {0}")]
    BadParameter(String),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("input lies outside the restricted domain")]
    OutsideDomain,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileError {
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("bad region: {0}")]
    BadRegion(String),
    #[error("node {node}: domain radius {radius:e} exceeds representable gadget scale")]
    ScaleOverflow { node: usize, radius: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Linkage(#[from] LinkageError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error("no convergence: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("step count must be at least 2, got {0}")]
    TooFewSteps(usize),
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed linkage JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Linkage(#[from] LinkageError),
    #[error("{0}")]
    Invalid(String),
}
