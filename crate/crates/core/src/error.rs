use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("{op}: domain error: {reason}")]
    Domain { op: &'static str, reason: String },

    /// A function evaluation produced NaN or infinity where a finite value is required.
    #[error("{op}: non-finite value at {at}")]
    NonFinite { op: &'static str, at: f64 },

    /// The potential has fewer than two local minima in the scanned range.
    #[error("classify_vacua: need at least two minima, found {found}")]
    NoFalseVacuum { found: usize },

    /// Division by a vanishing potential.
    #[error("{op}: singular potential at phi = {phi}")]
    SingularPotential { op: &'static str, phi: f64 },

    /// Adaptive quadrature ran out of evaluations before meeting its tolerance.
    #[error(
        "quadrature did not converge: value {value:e}, error estimate {error:e}, {evals} evaluations"
    )]
    Quadrature { value: f64, error: f64, evals: usize },

    /// A caller broke a documented precondition (e.g. handed in an un-normalized state).
    #[error("{op}: contract violation: {reason}")]
    Contract { op: &'static str, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        op,
        reason: reason.into(),
    }
}
