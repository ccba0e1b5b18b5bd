use thiserror::Error;

use crate::digraph::{CutReport, EdgeId};

/// Errors raised by the library.
///
/// `Internal` is reserved for situations that a correct input can only reach
/// if one of the underlying existence theorems is false (or the code is wrong);
/// it is never used for ordinary precondition failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("unknown or retired edge id {0}")]
    StaleEdge(EdgeId),

    #[error("cut is undefined for the empty set or the full vertex set")]
    DegenerateCut,

    #[error("source and sink must differ (both are {0})")]
    SameEndpoints(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible root multiset: d+(X) = {} < {} roots inside X = {:?}", .violation.out_degree, .demand, .violation.subset)]
    Infeasible { violation: CutReport, demand: usize },

    #[error("cut condition for k = {k} fails at X = {:?} (d+ = {}, d- = {})", .violation.subset, .violation.out_degree, .violation.in_degree)]
    CutCondition { k: usize, violation: CutReport },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal error (contradicts an existence theorem): {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
