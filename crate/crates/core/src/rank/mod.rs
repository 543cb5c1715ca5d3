//! Explicit decompositions of signature tensors, rank bounds and certificates.

mod bounds;
mod decompose;
mod hyperdet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{unit, Scalar, Tensor};

pub use bounds::{
    bipartitions, flattening_lower_bound, hockey_stick_closed, hockey_stick_nested, koszul_lower_bound,
    rank_bound_formula,
};
pub use decompose::{
    decompose_path, decompose_s3_alpha, decompose_s_k_alpha, decompose_second_level,
    decompose_three_segments, decompose_two_segments, s_k_alpha,
};
pub use hyperdet::{classify_222_complex_rank, hyperdet_222};

/// One summand `coeff · f_1 ⊗ ... ⊗ f_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "crate::exact::scalar::serde_str")]
    pub coeff: Scalar,
    #[serde(with = "crate::exact::scalar::serde_str::vec_vec")]
    pub factors: Vec<Vec<Scalar>>,
}

impl Term {
    pub fn realize(&self, dim: usize) -> Result<Tensor> {
        Ok(Tensor::outer(dim, &self.factors)?.scale(&self.coeff))
    }
}

/// A sum of elementary tensors in `(Q^d)^{⊗k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    dim: usize,
    order: usize,
    terms: Vec<Term>,
}

impl Decomposition {
    pub fn new(dim: usize, order: usize, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.factors.len() != order {
                return Err(Error::OrderMismatch {
                    expected: order,
                    found: t.factors.len(),
                });
            }
            if let Some(f) = t.factors.iter().find(|f| f.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.len(),
                });
            }
        }
        Ok(Self { dim, order, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of terms with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.iter().filter(|t| !t.coeff.is_zero()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &Scalar) -> Decomposition {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: &t.coeff * c,
                factors: t.factors.clone(),
            })
            .collect();
        Decomposition {
            terms,
            ..self.clone()
        }
    }

    /// Pairwise products of terms; realizes `self.realize() ⊗ other.realize()`
    /// with `len(self)·len(other)` terms.
    pub fn tensor_product(&self, other: &Decomposition) -> Result<Decomposition> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in self.terms.iter().filter(|t| !t.coeff.is_zero()) {
            for b in other.terms.iter().filter(|t| !t.coeff.is_zero()) {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                terms.push(Term {
                    coeff: &a.coeff * &b.coeff,
                    factors,
                });
            }
        }
        Decomposition::new(self.dim, self.order + other.order, terms)
    }

    /// The tensor this decomposition sums to.
    pub fn realize(&self) -> Tensor {
        let mut acc = Tensor::zeros(self.order, self.dim);
        for t in &self.terms {
            if t.coeff.is_zero() {
                continue;
            }
            let outer = Tensor::outer(self.dim, &t.factors).expect("validated on construction");
            acc.add_scaled(&t.coeff, &outer).expect("same shape");
        }
        acc
    }
}

/// One term per nonzero entry: the trivial upper bound.
pub fn decompose_entries(t: &Tensor) -> Decomposition {
    let d = t.dim();
    let terms = t
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(off, x)| Term {
            coeff: x.clone(),
            factors: t.multi_index(off).iter().map(|&i| unit(d, i)).collect(),
        })
        .collect();
    Decomposition::new(d, t.order(), terms).expect("well shaped")
}

/// Rank factorization of an order-2 tensor: `M = Σ_i M[:, p_i] ⊗ R[i, :]`,
/// with `R` the reduced row echelon form of `M` and `p_i` its pivot columns.
pub fn decompose_matrix(t: &Tensor) -> Result<Decomposition> {
    if t.order() != 2 {
        return Err(Error::OrderMismatch {
            expected: 2,
            found: t.order(),
        });
    }
    let m = t.flatten(&[0])?.matrix;
    let r = m.rref();
    let terms = (0..r.rows())
        .map(|i| {
            let pivot = r
                .row(i)
                .iter()
                .position(|x| !x.is_zero())
                .expect("rref drops zero rows");
            Term {
                coeff: Scalar::one(),
                factors: vec![
                    (0..m.rows()).map(|row| m.get(row, pivot).clone()).collect(),
                    r.row(i).to_vec(),
                ],
            }
        })
        .collect();
    Decomposition::new(t.dim(), 2, terms)
}

/// Decomposition of `T^{⊗h}/h!` from one of `T`; it has `len(T)^h` terms.
/// This is the level-`hn` signature of a pure `n`-volume log-signature `T`.
pub fn decompose_pure_volume(t: &Decomposition, h: usize) -> Result<Decomposition> {
    let mut acc = Decomposition::new(
        t.dim(),
        0,
        vec![Term {
            coeff: crate::exact::scalar::inv_factorial(h),
            factors: Vec::new(),
        }],
    )?;
    for _ in 0..h {
        acc = acc.tensor_product(t)?;
    }
    Ok(acc)
}

#[derive(Deserialize)]
struct DecompositionJson {
    dim: usize,
    order: usize,
    terms: Vec<Term>,
}

impl<'de> Deserialize<'de> for Decomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DecompositionJson::deserialize(d)?;
        Decomposition::new(raw.dim, raw.order, raw.terms).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStatus {
    Exact,
    Bounded,
}

/// `lower ≤ rk(t) ≤ upper`, with the decomposition achieving `upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub lower: usize,
    pub upper: usize,
    pub witness: Option<Decomposition>,
    pub status: CertificateStatus,
}

impl RankCertificate {
    pub fn is_exact(&self) -> bool {
        self.status == CertificateStatus::Exact
    }
}

/// Combine the flattening (and, for order 3, Koszul) lower bounds with the
/// length of a decomposition that realizes `t`.
pub fn certify_rank(t: &Tensor, witness: &Decomposition) -> Result<RankCertificate> {
    if witness.dim() != t.dim() || witness.order() != t.order() || &witness.realize() != t {
        return Err(Error::InvalidWitness);
    }
    let lower = if t.order() < 2 {
        usize::from(!t.is_zero())
    } else {
        let flat = flattening_lower_bound(t)?;
        if t.order() == 3 {
            flat.max(koszul_lower_bound(t)?)
        } else {
            flat
        }
    };
    let upper = witness.len();
    debug_assert!(
        lower <= upper,
        "lower bound {lower} exceeds witness length {upper}"
    );
    let status = if lower == upper {
        CertificateStatus::Exact
    } else {
        CertificateStatus::Bounded
    };
    Ok(RankCertificate {
        lower,
        upper,
        witness: Some(witness.clone()),
        status,
    })
}
