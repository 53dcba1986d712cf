use thiserror::Error;

/// Errors raised by the series engine, the model and the pricers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("leading coefficient {0:e} is below the reciprocal floor")]
    ZeroLeadingCoefficient(f64),
    #[error("series has a principal part (base exponent {0}); expected a power series")]
    PrincipalPartPresent(i32),
    #[error("series inversion supports orders 1 and 2 only, got {0}")]
    UnsupportedOrder(i32),
    #[error("operation requires an integer-step series")]
    UnsupportedGrid,
    #[error("inner series of a composition must vanish at the origin (base exponent {0})")]
    NonvanishingInner(i32),
    #[error("index {index} out of range (len {len})")]
    IndexError { index: usize, len: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("psi evaluated within {distance:e} of the pole {pole}")]
    PoleEvaluation { pole: f64, distance: f64 },
    #[error("risk-neutral pricing needs rho_1 > 1, got {0}")]
    RhoOneTooSmall(f64),
    #[error("weights at exponential time sum to {0}, not 1")]
    InconsistentRoots(f64),

    #[error("no {0} root exists in this regime")]
    RegimeMismatch(String),
    #[error("root index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("no sign change found in ({lo}, {hi})")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("Newton failed to converge while tracking root {root} at u = {u}")]
    TrackingDivergence { root: usize, u: f64 },
    #[error("|q| = {modulus} is below the validity threshold {q_min}")]
    BelowValidityThreshold { modulus: f64, q_min: f64 },

    #[error("expected a positive argument t, got {0}")]
    DomainError(f64),

    #[error("process is not risk neutral: psi(1) = {psi_one}, r = {rate}")]
    NotRiskNeutral { psi_one: f64, rate: f64 },
    #[error("delta and gamma need sigma > 0")]
    GaussianRequired,
    #[error("theta is one-sided at the kink T = c = {c}: left {left}, right {right}")]
    AtKinkPoint { c: f64, left: f64, right: f64 },
    #[error("series {constituent} has not converged: last term {tail:e} against price {price:e}")]
    ConvergenceWarning { constituent: usize, tail: f64, price: f64 },
    #[error("truncation vector has {got} entries, expected {expected}")]
    TruncationLength { expected: usize, got: usize },
    #[error("truncation orders must be at least 2")]
    TruncationTooSmall,

    #[error("contour abscissa {c} is outside the strip ({lo}, {hi})")]
    ContourOutOfStrip { c: f64, lo: f64, hi: f64 },
    #[error("fixture error: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
