use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by measures, function representations, duality maps and
/// the acoustic layer.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of refinement budget. Carries the last
    /// estimate and the error bound it could certify.
    #[error("quadrature did not converge: estimate {estimate}, error bound {bound}")]
    QuadratureNonConvergent { estimate: f64, bound: f64 },

    /// The integral was diagnosed as divergent. Carries the partial value
    /// accumulated before the growth test triggered.
    #[error("integral diverges (partial value {partial})")]
    Divergent { partial: f64 },

    /// The integrand evaluated to a non-finite value.
    #[error("integrand is not finite at r = {at}")]
    NonFiniteIntegrand { at: f64 },

    /// An oscillatory sweep would exceed the panel budget.
    #[error("oscillatory quadrature over [{lo}, {hi}] at omega = {omega} exceeds the panel budget")]
    OscillatoryBudget { lo: f64, hi: f64, omega: f64 },

    /// Evaluation requested on the branch cut of a complete Bernstein
    /// function (the closed negative real axis).
    #[error("evaluation on the branch cut ]-inf, 0] at z = {re}+{im}i")]
    BranchCut { re: f64, im: f64 },

    /// Finite differences can no longer be separated from rounding noise at
    /// the requested order and step. Not a class verdict.
    #[error("finite-difference order {order} unresolvable: noise {noise:.3e} vs signal {signal:.3e}")]
    Precision { order: usize, noise: f64, signal: f64 },

    /// A table kernel violated monotonicity or a measure constraint failed.
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    /// The spectral measure fails the Bernstein integrability condition.
    #[error("measure violates the Bernstein integrability condition: {0}")]
    Bs1Violation(String),

    /// Diagnostic sequence behaved inconsistently with the representation.
    #[error("inconsistent diagnostic: {0}")]
    Inconsistent(String),

    /// The material has an identically vanishing modulus at this frequency.
    #[error("degenerate material: p^2 J~(p) vanishes at omega = {omega}")]
    DegenerateMaterial { omega: f64 },

    /// Frequency grid cannot represent the requested window or time span.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Power-law fit has no usable points.
    #[error("cannot fit power law: {0}")]
    CannotFit(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
