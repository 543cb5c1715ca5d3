//! Piecewise linear paths and their truncated signatures.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::scalar::{inv_factorial, serde_str};
use crate::exact::{Matrix, Scalar, Tensor};
use crate::words::Word;

/// A piecewise linear path, stored as its ordered segment increments.
///
/// The signature ignores translation and reparametrization, so the
/// increments are all that matter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PathJson", into = "PathJson")]
pub struct Path {
    dim: usize,
    increments: Vec<Vec<Scalar>>,
}

#[derive(Serialize, Deserialize)]
struct PathJson {
    dim: usize,
    #[serde(with = "serde_str::vec_vec")]
    increments: Vec<Vec<Scalar>>,
}

impl TryFrom<PathJson> for Path {
    type Error = Error;
    fn try_from(raw: PathJson) -> Result<Self> {
        Path::new(raw.dim, raw.increments)
    }
}

impl From<Path> for PathJson {
    fn from(p: Path) -> Self {
        PathJson {
            dim: p.dim,
            increments: p.increments,
        }
    }
}

impl Path {
    pub fn new(dim: usize, increments: Vec<Vec<Scalar>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("path dimension must be at least 1".into()));
        }
        if increments.is_empty() {
            return Err(Error::Precondition("a path needs at least one segment".into()));
        }
        for u in &increments {
            if u.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.len(),
                });
            }
        }
        Ok(Self { dim, increments })
    }

    pub fn from_integers(increments: &[&[i64]]) -> Result<Self> {
        let dim = increments.first().map_or(0, |u| u.len());
        Path::new(
            dim,
            increments
                .iter()
                .map(|u| u.iter().map(|&x| Scalar::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn increments(&self) -> &[Vec<Scalar>] {
        &self.increments
    }

    pub fn segments(&self) -> usize {
        self.increments.len()
    }

    /// The path `t ↦ M·X(t)`.
    pub fn transform(&self, m: &Matrix) -> Result<Path> {
        let increments = self
            .increments
            .iter()
            .map(|u| m.apply(u))
            .collect::<Result<_>>()?;
        Path::new(m.rows(), increments)
    }
}

/// Levels `0..=K` of an element of the tensor algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSignature {
    dim: usize,
    levels: Vec<Tensor>,
}

impl TruncatedSignature {
    /// `levels[k]` must have order `k` and dimension `dim`.
    pub fn new(dim: usize, levels: Vec<Tensor>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Precondition("a truncated signature needs level 0".into()));
        }
        for (k, t) in levels.iter().enumerate() {
            if t.order() != k {
                return Err(Error::OrderMismatch {
                    expected: k,
                    found: t.order(),
                });
            }
            if t.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: t.dim(),
                });
            }
        }
        Ok(Self { dim, levels })
    }

    /// The identity element: constant term 1, every other level zero.
    pub fn trivial(dim: usize, max_level: usize) -> Self {
        let mut levels = vec![Tensor::scalar(Scalar::one(), dim)];
        levels.extend((1..=max_level).map(|k| Tensor::zeros(k, dim)));
        Self { dim, levels }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &Tensor {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[Tensor] {
        &self.levels
    }

    pub fn into_levels(self) -> Vec<Tensor> {
        self.levels
    }

    pub fn constant(&self) -> &Scalar {
        &self.levels[0].entries()[0]
    }

    /// `σ_w`, read from the level `|w|` tensor.
    pub fn entry(&self, w: &Word) -> Result<&Scalar> {
        if w.len() > self.max_level() {
            return Err(Error::LevelExceeded {
                needed: w.len(),
                available: self.max_level(),
            });
        }
        w.check_dim(self.dim)?;
        Ok(self.levels[w.len()].get(&w.index()))
    }

    /// Keep levels `0..=k`.
    pub fn truncate(&self, k: usize) -> Result<TruncatedSignature> {
        if k > self.max_level() {
            return Err(Error::LevelExceeded {
                needed: k,
                available: self.max_level(),
            });
        }
        Ok(Self {
            dim: self.dim,
            levels: self.levels[..=k].to_vec(),
        })
    }

    /// Truncated tensor-algebra product: level `k` is `Σ_{i+j=k} a_i ⊗ b_j`.
    pub fn product(&self, other: &TruncatedSignature) -> Result<TruncatedSignature> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.max_level() != other.max_level() {
            return Err(Error::LevelMismatch {
                left: self.max_level(),
                right: other.max_level(),
            });
        }
        let levels = (0..=self.max_level())
            .map(|k| {
                let mut acc = Tensor::zeros(k, self.dim);
                for i in 0..=k {
                    let (a, b) = (&self.levels[i], &other.levels[k - i]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc.add_scaled(&Scalar::one(), &a.tensor_product(b)?)?;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            dim: self.dim,
            levels,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SignatureJson {
    dim: usize,
    max_level: usize,
    levels: Vec<Tensor>,
}

impl Serialize for TruncatedSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SignatureJson {
            dim: self.dim,
            max_level: self.max_level(),
            levels: self.levels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSignature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SignatureJson::deserialize(d)?;
        if raw.levels.len() != raw.max_level + 1 {
            return Err(serde::de::Error::custom(format!(
                "max_level {} but {} levels given",
                raw.max_level,
                raw.levels.len()
            )));
        }
        TruncatedSignature::new(raw.dim, raw.levels).map_err(serde::de::Error::custom)
    }
}

/// Signature of the segment `t ↦ t·v`: level `k` is `v^{⊗k}/k!`.
pub fn segment_signature(v: &[Scalar], max_level: usize) -> TruncatedSignature {
    let d = v.len();
    let step = Tensor::from_vector(v);
    let mut levels = vec![Tensor::scalar(Scalar::one(), d)];
    for k in 1..=max_level {
        let next = levels[k - 1]
            .tensor_product(&step)
            .expect("same dimension")
            .scale(&Scalar::new(1.into(), k.into()));
        levels.push(next);
    }
    TruncatedSignature { dim: d, levels }
}

/// Chen's identity: the signature of a concatenation is the product.
pub fn chen_concat(a: &TruncatedSignature, b: &TruncatedSignature) -> Result<TruncatedSignature> {
    a.product(b)
}

pub fn pwl_signature(p: &Path, max_level: usize) -> TruncatedSignature {
    p.increments
        .iter()
        .map(|u| segment_signature(u, max_level))
        .reduce(|acc, s| chen_concat(&acc, &s).expect("segments share dimension and level"))
        .expect("paths have at least one segment")
}

/// The iterated integral `σ_w` computed directly, piece by piece.
///
/// On piece `p` (local time `τ ∈ [0,1]`) the running integral of the prefix
/// `w_1..w_j` is a polynomial in `τ`; each letter integrates the previous
/// polynomial against the constant derivative of the piece. No tensor
/// products are involved, so this serves as an independent check on
/// [`pwl_signature`].
pub fn iterated_integral_entry(p: &Path, w: &Word) -> Result<Scalar> {
    w.check_dim(p.dim)?;
    let n = w.len();
    let letters = w.index();
    // start[j]: value of the j-th prefix integral at the start of the current piece.
    let mut start = vec![Scalar::zero(); n + 1];
    start[0] = Scalar::one();
    for u in &p.increments {
        // polys[j][e] is the coefficient of τ^e.
        let mut prev: Vec<Scalar> = vec![Scalar::one()];
        let mut ends = vec![Scalar::one()];
        for j in 1..=n {
            let rate = &u[letters[j - 1]];
            let mut poly = vec![start[j].clone()];
            for (e, c) in prev.iter().enumerate() {
                poly.push(c * rate / Scalar::from_integer((e + 1).into()));
            }
            ends.push(poly.iter().sum());
            prev = poly;
        }
        start = ends;
    }
    Ok(start[n].clone())
}

/// Differences of consecutive samples.
pub fn time_series_to_path(samples: &[Vec<Scalar>]) -> Result<Path> {
    if samples.len() < 2 {
        return Err(Error::Precondition(format!(
            "a time series needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let dim = samples[0].len();
    let increments = samples
        .windows(2)
        .map(|pair| {
            if pair[1].len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: pair[1].len(),
                });
            }
            Ok(pair[1].iter().zip(&pair[0]).map(|(b, a)| b - a).collect())
        })
        .collect::<Result<_>>()?;
    Path::new(dim, increments)
}

/// `v^{⊗k}/k!` as a single level, handy in tests and examples.
pub fn segment_level(v: &[Scalar], k: usize) -> Tensor {
    Tensor::power(v, k).scale(&inv_factorial(k))
}
