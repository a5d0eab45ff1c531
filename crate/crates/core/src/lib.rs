//! Arbitrary-precision construction of modular Hamiltonians for the massive
//! free scalar in one spatial dimension, from a piecewise-linear
//! discretization of the field and momentum algebras.

pub mod discretization;
pub mod error;
pub mod linalg;
pub mod modular;
pub mod precision;
pub mod quadrature;

pub use discretization::{BasisMode, BasisSet, Grid, RegionSpec};
pub use error::{Error, Result};
pub use linalg::{MatrixMP, SymEigen};
pub use modular::{mu_scan, run_pipeline, GaussianProbe, ModularResult, PipelineConfig, SmearScan};
pub use precision::{PrecisionContext, Real};
