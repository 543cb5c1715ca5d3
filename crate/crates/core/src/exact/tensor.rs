//! Dense order-k tensors over the rationals.
//!
//! Entries are stored flat in lexicographic order of the multi-index with the
//! first index slowest, so the entry `(i_1, ..., i_k)` (0-based) sits at
//! offset `sum_j i_j * d^(k-1-j)`. Mode numbers in this API are 0-based.

use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::{serde_str, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    order: usize,
    dim: usize,
    entries: Vec<Scalar>,
}

impl Tensor {
    pub fn new(order: usize, dim: usize, entries: Vec<Scalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("tensor dimension must be at least 1".into()));
        }
        let expected = checked_len(dim, order)?;
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: entries.len(),
            });
        }
        Ok(Self { order, dim, entries })
    }

    pub fn zeros(order: usize, dim: usize) -> Self {
        let len = dim.pow(order as u32);
        Self {
            order,
            dim,
            entries: vec![Scalar::zero(); len],
        }
    }

    /// Order-0 tensor holding a single scalar.
    pub fn scalar(x: Scalar, dim: usize) -> Self {
        Self {
            order: 0,
            dim,
            entries: vec![x],
        }
    }

    pub fn from_vector(v: &[Scalar]) -> Self {
        Self {
            order: 1,
            dim: v.len(),
            entries: v.to_vec(),
        }
    }

    /// The basis tensor `e_{i_1} ⊗ ... ⊗ e_{i_k}` (0-based indices).
    pub fn basis(dim: usize, index: &[usize]) -> Self {
        let mut t = Self::zeros(index.len(), dim);
        let off = t.offset(index);
        t.entries[off] = Scalar::one();
        t
    }

    /// The elementary tensor `v_1 ⊗ ... ⊗ v_k`.
    pub fn outer(dim: usize, factors: &[Vec<Scalar>]) -> Result<Self> {
        let mut acc = Tensor::scalar(Scalar::one(), dim);
        for f in factors {
            if f.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.len(),
                });
            }
            acc = acc.tensor_product(&Tensor::from_vector(f))?;
        }
        Ok(acc)
    }

    /// `v^{⊗k}`.
    pub fn power(v: &[Scalar], k: usize) -> Self {
        let base = Tensor::from_vector(v);
        let mut acc = Tensor::scalar(Scalar::one(), v.len());
        for _ in 0..k {
            acc = acc.tensor_product(&base).expect("same dimension");
        }
        acc
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.order);
        index.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn multi_index(&self, mut offset: usize) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for slot in idx.iter_mut().rev() {
            *slot = offset % self.dim;
            offset /= self.dim;
        }
        idx
    }

    pub fn get(&self, index: &[usize]) -> &Scalar {
        &self.entries[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], x: Scalar) {
        let off = self.offset(index);
        self.entries[off] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        if c.is_zero() {
            return Tensor::zeros(self.order, self.dim);
        }
        Tensor {
            order: self.order,
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    fn check_same_shape(&self, other: &Tensor) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        Ok(Tensor {
            order: self.order,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        Ok(Tensor {
            order: self.order,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self += c * other`, in place.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Tensor) -> Result<()> {
        self.check_same_shape(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
        Ok(())
    }

    /// Entry at `(I, J)` is `self[I] * other[J]`.
    pub fn tensor_product(&self, other: &Tensor) -> Result<Tensor> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut entries = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            if a.is_zero() {
                entries.extend(std::iter::repeat_n(Scalar::zero(), other.len()));
            } else {
                entries.extend(other.entries.iter().map(
                    |b| {
                        if b.is_zero() {
                            Scalar::zero()
                        } else {
                            a * b
                        }
                    },
                ));
            }
        }
        Ok(Tensor {
            order: self.order + other.order,
            dim: self.dim,
            entries,
        })
    }

    /// Reshape into a matrix whose rows are indexed by the modes in `rows`
    /// (in the given order) and whose columns are indexed by the remaining
    /// modes in increasing order.
    pub fn flatten(&self, rows: &[usize]) -> Result<Flattening> {
        let k = self.order;
        let mut seen = vec![false; k];
        for &r in rows {
            if r >= k {
                return Err(Error::InvalidModeSubset(format!(
                    "mode {r} out of range for order {k}"
                )));
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidModeSubset(format!("mode {r} repeated")));
            }
        }
        if rows.is_empty() || rows.len() == k {
            return Err(Error::InvalidModeSubset(
                "row modes must be a nonempty proper subset".into(),
            ));
        }
        let row_modes = rows.to_vec();
        let col_modes: Vec<usize> = (0..k).filter(|m| !seen[*m]).collect();
        let n_rows = self.dim.pow(row_modes.len() as u32);
        let n_cols = self.dim.pow(col_modes.len() as u32);
        let mut matrix = Matrix::zeros(n_rows, n_cols);
        for (off, x) in self.entries.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let idx = self.multi_index(off);
            let r = row_modes.iter().fold(0, |acc, &m| acc * self.dim + idx[m]);
            let c = col_modes.iter().fold(0, |acc, &m| acc * self.dim + idx[m]);
            matrix.set(r, c, x.clone());
        }
        Ok(Flattening {
            source_order: k,
            dim: self.dim,
            row_modes,
            col_modes,
            matrix,
        })
    }

    /// The GL(V) action `M·(v_1⊗...⊗v_k) = (Mv_1)⊗...⊗(Mv_k)`.
    pub fn gl_act(&self, m: &Matrix) -> Result<Tensor> {
        if !m.is_square() || m.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.rows(),
            });
        }
        if m.rank() != self.dim {
            return Err(Error::SingularMatrix);
        }
        let mut t = self.clone();
        for mode in 0..self.order {
            t = t.mode_product(mode, m);
        }
        Ok(t)
    }

    /// Apply `m` along a single mode.
    fn mode_product(&self, mode: usize, m: &Matrix) -> Tensor {
        let d = self.dim;
        let stride = d.pow((self.order - 1 - mode) as u32);
        let mut out = Tensor::zeros(self.order, d);
        for (off, x) in self.entries.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let j = (off / stride) % d;
            let base = off - j * stride;
            for i in 0..d {
                let c = m.get(i, j);
                if !c.is_zero() {
                    out.entries[base + i * stride] += c * x;
                }
            }
        }
        out
    }

    /// Output entry at `(i_{π(1)}, ..., i_{π(k)})` equals input entry at
    /// `(i_1, ..., i_k)`; `perm` lists `π(0), ..., π(k-1)` (0-based).
    pub fn permute_modes(&self, perm: &[usize]) -> Result<Tensor> {
        check_permutation(perm, self.order)?;
        let mut out = Tensor::zeros(self.order, self.dim);
        for (off, x) in self.entries.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let idx = self.multi_index(off);
            let target: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
            let t = out.offset(&target);
            out.entries[t] = x.clone();
        }
        Ok(out)
    }

    /// Fibers along `mode`: one vector in `Q^d` per choice of the other indices.
    pub fn mode_fibers(&self, mode: usize) -> Vec<Vec<Scalar>> {
        let d = self.dim;
        let stride = d.pow((self.order - 1 - mode) as u32);
        let mut fibers = Vec::new();
        for off in 0..self.len() {
            if !(off / stride).is_multiple_of(d) {
                continue;
            }
            let fiber: Vec<Scalar> = (0..d).map(|i| self.entries[off + i * stride].clone()).collect();
            if fiber.iter().any(|x| !x.is_zero()) {
                fibers.push(fiber);
            }
        }
        fibers
    }

    /// Koszul flattening of an order-3 tensor.
    ///
    /// With `U` the pivot mode, `W` the last remaining mode and `V` the other,
    /// this is the matrix of `U*⊗W → V⊗W⊗W → V⊗∧²W`, where the second map sends
    /// `v⊗w1⊗w2` to `v⊗(w1∧w2)`. Rows are indexed by `(u, w)` (`d²` of them),
    /// columns by `(v, p<q)` (`d·C(d,2)` of them).
    pub fn koszul_flatten(&self, pivot_mode: usize) -> Result<Matrix> {
        if self.order != 3 {
            return Err(Error::OrderMismatch {
                expected: 3,
                found: self.order,
            });
        }
        let (v_mode, w_mode) = match pivot_mode {
            0 => (1, 2),
            1 => (0, 2),
            2 => (0, 1),
            _ => {
                return Err(Error::InvalidModeSubset(format!(
                    "pivot mode {pivot_mode} out of range for order 3"
                )))
            }
        };
        let d = self.dim;
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|p| (p + 1..d).map(move |q| (p, q))).collect();
        let pair_index = |p: usize, q: usize| pairs.iter().position(|&x| x == (p, q));
        let mut f = Matrix::zeros(d * d, d * pairs.len());
        for (off, x) in self.entries.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let idx = self.multi_index(off);
            let (u, v, w) = (idx[pivot_mode], idx[v_mode], idx[w_mode]);
            // T_U(u*) ⊗ e_b contributes x · e_v ⊗ (e_w ∧ e_b).
            for b in 0..d {
                if b == w {
                    continue;
                }
                let (p, q, sign) = if w < b { (w, b, 1) } else { (b, w, -1) };
                let col = v * pairs.len() + pair_index(p, q).expect("pair listed");
                let row = u * d + b;
                let cur = f.get(row, col).clone();
                let delta = if sign > 0 { x.clone() } else { -x.clone() };
                f.set(row, col, cur + delta);
            }
        }
        Ok(f)
    }
}

fn checked_len(dim: usize, order: usize) -> Result<usize> {
    dim.checked_pow(order as u32)
        .ok_or_else(|| Error::Precondition(format!("{dim}^{order} entries overflow")))
}

pub(crate) fn check_permutation(perm: &[usize], k: usize) -> Result<()> {
    if perm.len() != k {
        return Err(Error::InvalidPermutation(format!(
            "expected {k} entries, got {}",
            perm.len()
        )));
    }
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection")));
        }
    }
    Ok(())
}

pub fn tensor_product(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    a.tensor_product(b)
}

pub fn gl_act(m: &Matrix, t: &Tensor) -> Result<Tensor> {
    t.gl_act(m)
}

pub fn permute_modes(t: &Tensor, perm: &[usize]) -> Result<Tensor> {
    t.permute_modes(perm)
}

impl Add for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        self.try_add(rhs).expect("tensor shapes must agree")
    }
}

impl Sub for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        self.try_sub(rhs).expect("tensor shapes must agree")
    }
}

impl Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        Tensor {
            order: self.order,
            dim: self.dim,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

/// A tensor viewed as a matrix along a bipartition of its modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flattening {
    pub source_order: usize,
    pub dim: usize,
    pub row_modes: Vec<usize>,
    pub col_modes: Vec<usize>,
    pub matrix: Matrix,
}

impl Flattening {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Reassemble the tensor from the matrix and the bipartition.
    pub fn to_tensor(&self) -> Tensor {
        let mut t = Tensor::zeros(self.source_order, self.dim);
        let mut idx = vec![0; self.source_order];
        for r in 0..self.matrix.rows() {
            spread(r, &self.row_modes, self.dim, &mut idx);
            for c in 0..self.matrix.cols() {
                spread(c, &self.col_modes, self.dim, &mut idx);
                t.set(&idx, self.matrix.get(r, c).clone());
            }
        }
        t
    }
}

fn spread(mut flat: usize, modes: &[usize], d: usize, idx: &mut [usize]) {
    for &m in modes.iter().rev() {
        idx[m] = flat % d;
        flat /= d;
    }
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    order: usize,
    dim: usize,
    #[serde(with = "serde_str::vec")]
    entries: Vec<Scalar>,
}

impl Serialize for Tensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            order: self.order,
            dim: self.dim,
            entries: self.entries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TensorJson::deserialize(d)?;
        Tensor::new(raw.order, raw.dim, raw.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{frac, int};

    fn vec_of(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn basis_product() {
        let e1 = Tensor::basis(2, &[0]);
        let e2 = Tensor::basis(2, &[1]);
        assert_eq!(e1.tensor_product(&e2).unwrap(), Tensor::basis(2, &[0, 1]));
    }

    #[test]
    fn scalar_one_is_unit() {
        let t = Tensor::outer(2, &[vec_of(&[1, 2]), vec_of(&[3, -1])]).unwrap();
        let one = Tensor::scalar(int(1), 2);
        assert_eq!(one.tensor_product(&t).unwrap(), t);
        assert_eq!(t.tensor_product(&one).unwrap(), t);
    }

    #[test]
    fn bilinearity_on_sum() {
        let lhs = Tensor::from_vector(&vec_of(&[1, 1]))
            .tensor_product(&Tensor::basis(2, &[0]))
            .unwrap();
        let rhs = &Tensor::basis(2, &[0, 0]) + &Tensor::basis(2, &[1, 0]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_dimension_mismatch() {
        let a = Tensor::basis(2, &[0]);
        let b = Tensor::basis(3, &[0]);
        assert!(matches!(
            a.tensor_product(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn new_checks_length() {
        assert!(Tensor::new(2, 2, vec![int(0); 3]).is_err());
        assert!(Tensor::new(0, 3, vec![int(5)]).is_ok());
    }

    #[test]
    fn flatten_rejects_bad_subsets() {
        let t = Tensor::zeros(3, 2);
        assert!(t.flatten(&[]).is_err());
        assert!(t.flatten(&[0, 1, 2]).is_err());
        assert!(t.flatten(&[0, 0]).is_err());
        assert!(t.flatten(&[3]).is_err());
    }

    #[test]
    fn elementary_flattenings_have_rank_one() {
        let t = Tensor::outer(3, &[vec_of(&[1, 2, 0]), vec_of(&[0, 1, -1]), vec_of(&[2, 2, 5])]).unwrap();
        for rows in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            assert_eq!(t.flatten(&rows).unwrap().rank(), 1);
        }
    }

    #[test]
    fn flattening_round_trip() {
        let entries: Vec<Scalar> = (0..16).map(|i| frac(i * 7 % 5 - 2, 1 + i % 3)).collect();
        let t = Tensor::new(4, 2, entries).unwrap();
        for rows in [vec![0, 2], vec![3, 1], vec![2]] {
            assert_eq!(t.flatten(&rows).unwrap().to_tensor(), t);
        }
    }

    #[test]
    fn permutation_swap_and_involution() {
        let v = vec_of(&[1, 2]);
        let w = vec_of(&[3, 5]);
        let vw = Tensor::outer(2, &[v.clone(), w.clone()]).unwrap();
        let wv = Tensor::outer(2, &[w, v]).unwrap();
        assert_eq!(vw.permute_modes(&[1, 0]).unwrap(), wv);
        assert_eq!(vw.permute_modes(&[0, 1]).unwrap(), vw);
        let t = Tensor::new(3, 2, (0..8).map(int).collect()).unwrap();
        let once = t.permute_modes(&[1, 0, 2]).unwrap();
        assert_eq!(once.permute_modes(&[1, 0, 2]).unwrap(), t);
        assert!(t.permute_modes(&[0, 0, 1]).is_err());
        assert!(t.permute_modes(&[0, 1]).is_err());
    }

    #[test]
    fn gl_identity_and_permutation() {
        let t = Tensor::new(2, 2, (1..5).map(int).collect()).unwrap();
        assert_eq!(t.gl_act(&Matrix::identity(2)).unwrap(), t);
        let swap = Matrix::from_rows(vec![vec_of(&[0, 1]), vec_of(&[1, 0])]).unwrap();
        assert_eq!(
            Tensor::basis(2, &[0, 1]).gl_act(&swap).unwrap(),
            Tensor::basis(2, &[1, 0])
        );
        let singular = Matrix::from_rows(vec![vec_of(&[1, 1]), vec_of(&[1, 1])]).unwrap();
        assert_eq!(t.gl_act(&singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn koszul_of_zero_is_zero() {
        let f = Tensor::zeros(3, 3).koszul_flatten(0).unwrap();
        assert_eq!((f.rows(), f.cols()), (9, 9));
        assert!(f.is_zero());
        assert!(Tensor::zeros(2, 3).koszul_flatten(0).is_err());
    }

    #[test]
    fn koszul_of_elementary_tensor_is_small() {
        let t = Tensor::outer(3, &[vec_of(&[1, 2, 3]), vec_of(&[0, 1, 1]), vec_of(&[2, -1, 1])]).unwrap();
        for pivot in 0..3 {
            assert!(t.koszul_flatten(pivot).unwrap().rank() <= 2);
        }
    }

    #[test]
    fn json_uses_rational_strings() {
        let t = Tensor::new(1, 2, vec![frac(1, 2), int(-3)]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"order":1,"dim":2,"entries":["1/2","-3"]}"#);
        let back: Tensor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Tensor>(r#"{"order":2,"dim":2,"entries":["1"]}"#).is_err());
    }
}
