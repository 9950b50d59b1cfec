//! Exact rational scalars and sparse linear algebra.

mod elim;
mod scalar;
mod sparse;

pub use elim::{
    cohomology_dim, complement_coordinates, image_basis, in_column_space, independent_columns,
    kernel_basis, rank, reduced_image_basis, rref, solve, Rref,
};
pub use scalar::{ParseScalarError, Scalar};
pub use sparse::SparseMatrix;
