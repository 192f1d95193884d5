//! Error type shared by the whole crate.

use thiserror::Error as ThisError;

/// Failure modes of group actions, energies, optimizers and solvers.
#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum Error {
    /// The element maps a relevant time slice through the projective singularity `γt + δ = 0`.
    #[error("transformation passes through the projective singularity (|γt+δ| = {0:e})")]
    SingularTransform(f64),
    /// A transformed spatial interval collapsed.
    #[error("transformed domain has length {0:e}")]
    DegenerateDomain(f64),
    /// A finite-difference probe hit a non-finite or sentinel energy.
    #[error("energy is not finite at a finite-difference probe")]
    NonFiniteEnergy,
    /// Every initialization of a canonicalizer started at a non-finite energy.
    #[error("energy is not finite at any initialization")]
    NoFiniteStart,
    /// The canonical instance does not reach the operator's training domain.
    #[error("canonical energy {energy:e} exceeds the acceptance threshold {threshold:e}")]
    CanonicalizationFailed { energy: f64, threshold: f64 },
    /// Two fields are sampled on different grids.
    #[error("fields are sampled on different grids")]
    GridMismatch,
    /// A spectral solver received a non-periodic field.
    #[error("field is not periodic")]
    NotPeriodic,
    /// The Cole–Hopf solver received an initial condition with nonzero mean.
    #[error("initial condition has nonzero mean {0:e}")]
    NonZeroMean(f64),
    /// The time step violates the solver's stability bound.
    #[error("time step {dt:e} exceeds the stability bound {bound:e}")]
    UnstableStep { dt: f64, bound: f64 },
    /// A coefficient vector has the wrong length for its group.
    #[error("coefficient vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Reading or writing a file failed.
    #[error("io: {0}")]
    Io(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
