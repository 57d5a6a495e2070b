use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: endpoint {vertex} out of range for {order} vertices")]
    EndpointOutOfRange {
        line: usize,
        vertex: i64,
        order: usize,
    },

    #[error("vertex {vertex} not in graph of order {order}")]
    UnknownVertex { vertex: Vertex, order: usize },

    #[error("edge {u}-{v} not present")]
    EdgeAbsent { u: Vertex, v: Vertex },

    #[error("edge {u}-{v} already present")]
    EdgePresent { u: Vertex, v: Vertex },

    #[error("multiplicity of {u}-{v} exceeds the representable bound")]
    Multiplicity { u: Vertex, v: Vertex },

    #[error("graph of order {order} exceeds the bound {bound} for {what}")]
    SizeBound {
        what: &'static str,
        order: usize,
        bound: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("move precondition failed: {0}")]
    MovePrecondition(String),

    #[error("gadget pattern absent: {0}")]
    GadgetAbsent(String),

    #[error("separation does not match the graph: {0}")]
    StaleSeparation(String),

    #[error("split part is not a circuit: {0}")]
    PartNotCircuit(String),

    #[error("input is not a (2,1)-circuit")]
    NotCircuit,

    #[error("input is not simple")]
    NotSimple,

    #[error("certificate format: line {line}: {msg}")]
    CertificateFormat { line: usize, msg: String },

    #[error("replay failed: {0}")]
    Replay(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
