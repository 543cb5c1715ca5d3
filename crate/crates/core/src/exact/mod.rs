//! Exact numeric substrate: rational scalars, matrices, subspaces and dense tensors.

mod matrix;
pub mod scalar;
mod subspace;
mod tensor;

pub use matrix::{matrix_rank, Matrix};
pub use scalar::{format_scalar, parse_scalar, Scalar};
pub(crate) use subspace::unit;
pub use subspace::Subspace;
pub use tensor::{gl_act, permute_modes, tensor_product, Flattening, Tensor};
