use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge {edge} occurs {count} times (expected 2)")]
    Gluing { edge: usize, count: usize },
    #[error("surface is disconnected")]
    Disconnected,
    #[error("edge {0} has non-positive weight")]
    NonPositiveWeight(usize),
    #[error("chord endpoint mismatch: {0}")]
    ChordEndpointMismatch(String),
    #[error("non-transversal crossing: {0}")]
    NonTransversalCrossing(String),
    #[error("not a closed curve: {0}")]
    NotAClosedCurve(String),
    #[error("curve is not simple")]
    NotSimple,
    #[error("no boundary component {0}")]
    NoSuchBoundary(usize),
    #[error("multiplicity map has odd degree at vertex {0}")]
    OddVertexDegree(usize),
    #[error("multiplicity map has empty or disconnected support")]
    DisconnectedSupport,
    #[error("surface is orientable")]
    SurfaceOrientable,
    #[error("surface is not orientable")]
    NotOrientable,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("signature is not taken against a canonical system")]
    NotCanonical,
    #[error("surface mismatch: {0}")]
    SurfaceMismatch(String),
    #[error("Kirchhoff voltage law fails on face {0}")]
    KirchhoffViolation(usize),
    #[error("infeasible goal: {0}")]
    InfeasibleGoal(String),
    #[error("enumeration budget too large: {0}")]
    BudgetTooLarge(String),
    #[error("epsilon must be below 1/(12n)")]
    EpsilonTooLarge,
    #[error("grid graph is disconnected or empty")]
    DisconnectedGrid,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
