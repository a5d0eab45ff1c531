//! Dense linear algebra at extended precision.

mod csv;
mod eigen;
mod factor;
mod function;
mod matrix;

pub use csv::{read_matrix_csv, write_matrix_csv};
pub use eigen::{sym_eigen, sym_eigen_with, JacobiOptions, SymEigen};
pub use factor::{cholesky, congruence, invert, invert_lower_triangular};
pub use function::{matrix_function, reconstruct, spectral_sum};
pub use matrix::MatrixMP;
