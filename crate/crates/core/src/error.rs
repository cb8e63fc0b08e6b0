use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// β = 0 together with μ = 0 is the identity, which is not parabolic.
    #[error("beta and mu must not be simultaneously null")]
    DegenerateMap,

    #[error("point outside the domain: {0}")]
    DomainError(String),

    #[error("moment undefined: {0}")]
    UndefinedMoment(String),

    #[error("adaptive quadrature did not stabilize within depth {max_depth} on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64, max_depth: u32 },

    #[error("imaginary part decreased at step {step}: {before} -> {after}")]
    NumericalBreakdown { step: usize, before: f64, after: f64 },

    #[error("orbit left the representable range at step {step}")]
    Overflow { step: usize },

    #[error("orbit has {len} points, at least {min} required")]
    InsufficientOrbit { len: usize, min: usize },

    #[error("map is not of finite shift ({0})")]
    NotFiniteShift(String),
}

impl Error {
    /// Variant name, used by the command line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidMeasure(_) => "InvalidMeasure",
            Error::DegenerateMap => "DegenerateMap",
            Error::DomainError(_) => "DomainError",
            Error::UndefinedMoment(_) => "UndefinedMoment",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::NumericalBreakdown { .. } => "NumericalBreakdown",
            Error::Overflow { .. } => "Overflow",
            Error::InsufficientOrbit { .. } => "InsufficientOrbit",
            Error::NotFiniteShift(_) => "NotFiniteShift",
        }
    }
}
