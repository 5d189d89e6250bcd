//! Errors shared by the descent machinery, the solvers, and the lab oracles.

use crate::rat::Rat;
use crate::space::PointId;

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum SolveError {
    /// The instance records a failed audit; solvers require all three.
    #[error(
        "instance audits not satisfied (d_ord={d_ord}, inc_lsc={inc_lsc}, proper={proper})"
    )]
    AuditNotSatisfied { d_ord: bool, inc_lsc: bool, proper: bool },

    /// Iteration start has an infinite potential value.
    #[error("start point {x} lies outside the potential's domain")]
    StartOutsideDomain { x: PointId },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The full Ekeland gate `phi(x0) <= eps + inf phi` failed.
    #[error("hypothesis violated: phi(x0) = {phi_x0} exceeds eps + inf phi = {bound}")]
    HypothesisViolated { phi_x0: Rat, bound: Rat },

    /// A Caristi map fails feasibility at the witness point.
    #[error("map is not a feasible Caristi map: fails at point {witness}")]
    InfeasibleMap { witness: PointId },

    /// T1 strengthening requested on a space that is not T1.
    #[error("space is not T1: d({x},{y}) = 0 for distinct points")]
    NotT1 { x: PointId, y: PointId },

    /// A certificate obligation failed re-verification. Indicates a bug, not
    /// a property of the input.
    #[error("certificate check failed: {what}")]
    CertificateCheckFailed { what: String },

    /// Two routes that must agree did not. Indicates a bug.
    #[error("consistency violation: {what}")]
    ConsistencyViolation { what: String },

    /// A suite precondition (symmetry, totality, ...) does not hold.
    #[error("precondition not met: {what}")]
    PreconditionNotMet { what: String },

    /// A Caristi map file or argument is structurally unusable.
    #[error("malformed map: {reason}")]
    MalformedMap { reason: String },
}
