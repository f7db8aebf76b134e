use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph is disconnected: vertex {vertex} is unreachable from {root}")]
    Unreachable { root: usize, vertex: usize },

    #[error("expected a tree, got {vertices} vertices and {edges} edges")]
    NotATree { vertices: usize, edges: usize },

    #[error("expected a connected unicyclic graph, got {vertices} vertices and {edges} edges")]
    NotUnicyclic { vertices: usize, edges: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible generator: {0}")]
    Infeasible(String),

    #[error("enumeration cap exceeded: {vertices} vertices allow up to {bound} orders (cap is {cap} vertices)")]
    EnumerationCap { vertices: usize, cap: usize, bound: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse classes used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Topology,
    ResourceCap,
    Io,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Disconnected { .. }
            | Error::Unreachable { .. }
            | Error::NotATree { .. }
            | Error::NotUnicyclic { .. }
            | Error::InvalidGraph(_) => ErrorClass::Topology,
            Error::EnumerationCap { .. } => ErrorClass::ResourceCap,
            Error::Io(_) => ErrorClass::Io,
            _ => ErrorClass::Usage,
        }
    }

    pub(crate) fn param(msg: impl fmt::Display) -> Self {
        Error::InvalidParameter(msg.to_string())
    }
}
