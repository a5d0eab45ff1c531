use modkernel_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("selfcheck failed: {}", .0.join(", "))]
    Selfcheck(Vec<String>),
}

impl CliError {
    /// 1 selfcheck, 2 spectral or numerical, 3 configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Selfcheck(_) => 1,
            Self::Config(_) | Self::Io(_) => 3,
            Self::Core(e) => match e {
                Error::InvalidConfig(_)
                | Error::Parse(_)
                | Error::RegionNotOnGrid { .. }
                | Error::ProbeOutsideGrid { .. }
                | Error::Dimension(_) => 3,
                _ => 2,
            },
        }
    }

    /// What to change to get past the failure, when there is a standard answer.
    pub fn remedy(&self) -> Option<&'static str> {
        match self {
            Self::Core(Error::ForbiddenSpectrum { .. }) => Some(
                "an eigenvalue of B reached the band |λ| ≤ 1: raise --digits, or check that the region is neither empty nor the whole box",
            ),
            Self::Core(Error::Precision(_) | Error::NoConvergence { .. } | Error::QuadratureNotConverged { .. }) => {
                Some("raise --digits")
            }
            Self::Core(Error::RegionNotOnGrid { .. }) => {
                Some("choose --cells and --halfwidth so that every region boundary is a grid node")
            }
            Self::Core(Error::ProbeOutsideGrid { .. }) => Some("narrow --sigma, move the probe inward or enlarge --halfwidth"),
            _ => None,
        }
    }

    /// Short identifier used in convergence-report rows.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Io(_) => "io",
            Self::Selfcheck(_) => "selfcheck",
            Self::Core(e) => match e {
                Error::ForbiddenSpectrum { .. } => "forbidden-spectrum",
                Error::Precision(_) => "precision",
                Error::NoConvergence { .. } => "no-convergence",
                Error::QuadratureNotConverged { .. } => "quadrature",
                Error::NotPositiveDefinite { .. } => "not-positive-definite",
                Error::SingularMatrix { .. } => "singular",
                Error::Domain { .. } => "domain",
                Error::ProbeOutsideGrid { .. } => "probe-outside-grid",
                Error::RegionNotOnGrid { .. } => "region-not-on-grid",
                _ => "config",
            },
        }
    }
}
