use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which clause of the existence criterion for a parameter array failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionClause {
    /// `ζ₀ ≠ 1`
    ZetaZero,
    /// `ζ_d = 0`
    ZetaDZero,
    /// `Σ η_{d-i}(θ₀) η*_{d-i}(θ*₀) ζ_i = 0`
    SumZero,
}

impl ConditionClause {
    pub fn reason_code(self) -> &'static str {
        match self {
            ConditionClause::ZetaZero => "condition-ii-zeta0",
            ConditionClause::ZetaDZero => "condition-ii-zeta-d-zero",
            ConditionClause::SumZero => "condition-ii-sum-zero",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars from different backends cannot be combined")]
    BackendMismatch,
    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("evaluation parameter must be nonzero")]
    ZeroAlpha,
    #[error("diameter {d} is not feasible for q: q^(2·{i}) = 1")]
    InfeasibleDiameter { d: usize, i: usize },
    #[error("q^2 = 1: q-bracket denominator vanishes")]
    DegenerateQ,
    #[error("repeated eigenvalues at positions {0} and {1}")]
    RepeatedEigenvalues(usize, usize),
    #[error("matrix is not annihilated by the product of (M - eig I)")]
    NotAnnihilated,
    #[error("eigenvalue sequence is not mutually distinct: positions {0} and {1} coincide")]
    NotDistinct(usize, usize),
    #[error("root finding did not converge (best relative residual {residual:e})")]
    RootFinding { residual: f64 },
    #[error("value is not representable over the rationals: {0}")]
    NotRational(String),
    #[error("not of q-Racah type: {0}")]
    NotQRacah(String),
    #[error("underdetermined: {0}")]
    Underdetermined(String),
    #[error("degenerate linear system: {0}")]
    DegenerateSystem(String),
    #[error("parameter array violates the existence criterion ({}); certificate {certificate}", clause.reason_code())]
    ConditionII { clause: ConditionClause, certificate: String },
    #[error("proportionality failure: {0}")]
    Proportionality(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("diameter {d} exceeds the configured limit {limit}")]
    DiameterLimit { d: usize, limit: usize },
    #[error("internal consistency check failed: {0}")]
    Assertion(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Machine-readable reason code used by the command-line front end and the C interface.
    pub fn reason_code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division-by-zero",
            Error::BackendMismatch => "backend-mismatch",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::ZeroAlpha => "zero-alpha",
            Error::InfeasibleDiameter { .. } => "infeasible-diameter",
            Error::DegenerateQ => "degenerate-q",
            Error::RepeatedEigenvalues(..) => "repeated-eigenvalues",
            Error::NotAnnihilated => "not-annihilated",
            Error::NotDistinct(..) => "not-distinct",
            Error::RootFinding { .. } => "root-finding-failed",
            Error::NotRational(_) => "not-rational",
            Error::NotQRacah(_) => "not-q-racah",
            Error::Underdetermined(_) => "underdetermined",
            Error::DegenerateSystem(_) => "degenerate-system",
            Error::ConditionII { clause, .. } => clause.reason_code(),
            Error::Proportionality(_) => "proportionality-failure",
            Error::InvalidParameters(_) => "invalid-parameters",
            Error::DiameterLimit { .. } => "diameter-limit",
            Error::Assertion(_) => "assertion-failure",
            Error::Parse(_) => "parse-error",
        }
    }

    /// True when the failure is a property of well-formed input (a mathematical refusal)
    /// rather than malformed input.
    pub fn is_refusal(&self) -> bool {
        !matches!(
            self,
            Error::Parse(_) | Error::DimensionMismatch(_) | Error::BackendMismatch | Error::DiameterLimit { .. }
        )
    }
}
