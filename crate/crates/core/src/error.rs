use crate::precision::Real;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the pipeline. Every numeric payload is carried at full
/// working precision so callers can report it without loss.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("{function}: argument {argument} outside the domain ({detail})")]
    Domain {
        function: &'static str,
        argument: Real,
        detail: String,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric: max |A_ij - A_ji| = {asymmetry}")]
    NotSymmetric { asymmetry: Real },

    #[error("matrix is not positive definite: pivot {index} is {pivot}")]
    NotPositiveDefinite { index: usize, pivot: Real },

    #[error("matrix is singular at working precision: pivot {index} has magnitude {magnitude}")]
    SingularMatrix { index: usize, magnitude: Real },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal})")]
    NoConvergence { sweeps: usize, off_diagonal: Real },

    #[error("region boundary {boundary} does not coincide with a grid node")]
    RegionNotOnGrid { boundary: Real },

    #[error("quadrature did not reach its target: estimated error {estimate}")]
    QuadratureNotConverged { estimate: Real },

    #[error("eigenvalue {index} of B is {lambda} (|λ|-1 = {gap}), inside the forbidden band")]
    ForbiddenSpectrum {
        index: usize,
        lambda: Real,
        gap: Real,
    },

    #[error("probe at mu = {center} with sigma = {width} reaches the box edge at {half_width} (|mu| + 6 sigma >= b)")]
    ProbeOutsideGrid {
        center: Real,
        width: Real,
        half_width: Real,
    },

    #[error("precision mismatch: {0}")]
    Precision(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed input: {0}")]
    Parse(String),
}
