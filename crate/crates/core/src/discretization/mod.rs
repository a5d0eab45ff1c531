//! Piecewise-linear discretization on a uniform grid over `[-b, b]`: basis,
//! Gram and `χ` matrices, `A^s` matrix elements, and the orthonormal frame.

mod basis;
mod frame;
mod grid;
pub mod kernel;
pub mod momentum;
mod region;

pub use basis::{build_basis, chi_matrix, BasisMode, BasisSet, Element, ElementKind, Piece, Slope};
pub use frame::{orthonormal_frame, OrthonormalFrame};
pub use grid::Grid;
pub use kernel::{a_power_matrix, PowerKernel};
pub use momentum::{
    element_fourier, momentum_entry, momentum_pair_integral, MomentumOptions, QuadratureEstimate,
};
pub use region::RegionSpec;
