//! Exact signature tensors of piecewise linear paths.
//!
//! The crate computes truncated signatures over the rationals and builds on
//! them: shuffle identities, the exp/log correspondence with log-signatures,
//! Thrall components, explicit low-rank decompositions with certified rank
//! bounds, symmetry classification and conciseness.
//!
//! No floating point is used anywhere; every rank and zero test is exact.

pub mod error;
pub mod exact;
pub mod harness;
pub mod io;
pub mod lie;
pub mod path;
pub mod rank;
pub mod symmetry;
pub mod words;

pub use error::{Error, Result};
pub use exact::{Matrix, Scalar, Subspace, Tensor};
pub use lie::{LogSignature, Partition};
pub use path::{Path, TruncatedSignature};
pub use rank::{Decomposition, RankCertificate};
pub use words::{Word, WordSum};
