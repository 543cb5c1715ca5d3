use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::{serde_str, Scalar};
use crate::error::{Error, Result};

/// A linear subspace of `Q^d`, stored by its reduced row echelon basis.
///
/// The echelon form is canonical, so two subspaces are equal exactly when
/// their stored bases are identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn span(ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        let basis = Matrix::from_rows(vectors.to_vec())?.rref();
        Ok(Self { ambient_dim, basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    /// The hyperplane `{x_i = 0}` (0-based coordinate `i`).
    pub fn coordinate_hyperplane(ambient_dim: usize, i: usize) -> Self {
        let vectors: Vec<Vec<Scalar>> = (0..ambient_dim)
            .filter(|&j| j != i)
            .map(|j| unit(ambient_dim, j))
            .collect();
        Self::span(ambient_dim, &vectors).expect("unit vectors have the ambient dimension")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn is_hyperplane(&self) -> bool {
        self.ambient_dim > 0 && self.dim() + 1 == self.ambient_dim
    }

    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.basis.to_rows()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut rows = self.basis.to_rows();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).is_ok_and(|m| m.rank() == self.dim())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient_dim == self.ambient_dim && other.basis().iter().all(|v| self.contains(v))
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let mut rows = self.basis();
        rows.extend(other.basis());
        Subspace::span(self.ambient_dim, &rows)
    }
}

pub(crate) fn unit(d: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); d];
    v[i] = Scalar::one();
    v
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    ambient_dim: usize,
    dim: usize,
    #[serde(with = "serde_str::vec_vec")]
    basis: Vec<Vec<Scalar>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceJson {
            ambient_dim: self.ambient_dim,
            dim: self.dim(),
            basis: self.basis(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SubspaceJson::deserialize(d)?;
        Subspace::span(raw.ambient_dim, &raw.basis).map_err(serde::de::Error::custom)
    }
}
