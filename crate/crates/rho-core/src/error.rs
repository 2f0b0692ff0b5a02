use thiserror::Error;

/// Errors produced by model construction, closed-form evaluation and the
/// numerical machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("x = {x} lies outside the open domain (-{radius}, {radius})")]
    OutsideDomain { x: f64, radius: f64 },

    #[error("energy {energy} is below the rest energy {mass}")]
    EnergyBelowRest { energy: f64, mass: f64 },

    /// λ > 0 and E at or above the escape threshold: the orbit is not closed.
    #[error("energy {energy} is at or above the open-motion threshold {threshold}")]
    OpenMotion { energy: f64, threshold: f64 },

    #[error("orbit is not oscillatory (class {class})")]
    NotOscillatory { class: &'static str },

    #[error("state (x = {x}, v = {v}) is kinematically forbidden")]
    UnphysicalState { x: f64, v: f64 },

    #[error("trajectory reached |x| = {x} within {margin} of the horizon {radius}")]
    HorizonApproach { x: f64, radius: f64, margin: f64 },

    #[error("adaptive step control failed near t = {t} (h = {h})")]
    StepFailure { t: f64, h: f64 },

    /// λ = 0: the dimensionless bookkeeping (ε, μ, p±) is undefined.
    #[error("operation requires λ ≠ 0 (flat-metric model must use the dedicated branch)")]
    FlatModel,

    #[error("level n = {n} is not normalizable (n_max = {n_max})")]
    NotNormalizable { n: u32, n_max: u32 },

    #[error("energy {energy} is below the continuum threshold {threshold}")]
    BelowThreshold { energy: f64, threshold: f64 },

    #[error("energy sits exactly at the continuum threshold (degenerate parameters)")]
    ThresholdDegenerate,

    #[error("series did not converge within {terms} terms")]
    SeriesNonConvergence { terms: usize },

    #[error("hypergeometric parameter c = {c} is a non-positive integer pole")]
    ParameterPole { c: f64 },

    #[error("argument out of range: {what}")]
    ArgumentOutOfRange { what: &'static str },

    #[error("quadrature did not stabilize (last relative change {last_change})")]
    QuadratureNonConvergence { last_change: f64 },

    #[error("grid too coarse: {what}")]
    GridTooCoarse { what: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
