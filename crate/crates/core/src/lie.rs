//! Free Lie elements, the exp/log correspondence between log-signatures and
//! signatures, Thrall components and pure-volume detection.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::scalar::inv_factorial;
use crate::exact::{Scalar, Tensor};
use crate::path::TruncatedSignature;

/// `[a, b] = a⊗b − b⊗a`.
pub fn lie_bracket(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    let ab = a.tensor_product(b)?;
    let ba = b.tensor_product(a)?;
    ab.try_sub(&ba)
}

/// The left-to-right bracketing operator
/// `x_1 x_2 ... x_k ↦ [...[[x_1, x_2], x_3], ..., x_k]`, extended linearly.
pub fn dynkin_operator(t: &Tensor) -> Tensor {
    let (k, d) = (t.order(), t.dim());
    if k <= 1 {
        return t.clone();
    }
    let mut out = Tensor::zeros(k, d);
    for j in 0..d {
        let slice: Vec<Scalar> = t.entries().iter().skip(j).step_by(d).cloned().collect();
        let head = Tensor::new(k - 1, d, slice).expect("slice has d^(k-1) entries");
        if head.is_zero() {
            continue;
        }
        let e_j = Tensor::basis(d, &[j]);
        let r = dynkin_operator(&head);
        let bracket = lie_bracket(&r, &e_j).expect("same dimension");
        out.add_scaled(&Scalar::one(), &bracket).expect("same shape");
    }
    out
}

/// Dynkin–Specht–Wever: `t ∈ Lie^k(V)` iff the bracketing operator maps `t` to `k·t`.
pub fn is_lie_element(t: &Tensor) -> Result<bool> {
    if t.order() == 0 {
        return Err(Error::Precondition(
            "Lie membership is defined for order at least 1".into(),
        ));
    }
    let k = Scalar::from_integer(t.order().into());
    Ok(dynkin_operator(t) == t.scale(&k))
}

/// Lyndon words of length `len` over `{0..dim-1}`, in lexicographic order (Duval).
pub fn lyndon_words(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if dim == 0 || len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == len {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while matches!(w.last(), Some(&c) if c == dim - 1) {
            w.pop();
        }
        match w.last_mut() {
            Some(c) => *c += 1,
            None => break,
        }
    }
    out
}

/// Bracketing of a Lyndon word along its standard factorization `w = u·v`,
/// `v` the longest proper Lyndon suffix.
pub fn lyndon_bracket(dim: usize, word: &[usize]) -> Tensor {
    if word.len() == 1 {
        return Tensor::basis(dim, word);
    }
    let split = (1..word.len())
        .find(|&i| is_lyndon(&word[i..]))
        .expect("a Lyndon word of length ≥ 2 has a proper Lyndon suffix");
    let left = lyndon_bracket(dim, &word[..split]);
    let right = lyndon_bracket(dim, &word[split..]);
    lie_bracket(&left, &right).expect("same dimension")
}

fn is_lyndon(w: &[usize]) -> bool {
    (1..w.len()).all(|i| w[i..] > *w)
}

/// Basis of `Lie^k(Q^d)` from bracketed Lyndon words. These coordinates are a
/// choice, not canonical; they are used to build inputs, never serialized.
pub fn lyndon_basis(dim: usize, k: usize) -> Vec<Tensor> {
    lyndon_words(dim, k)
        .iter()
        .map(|w| lyndon_bracket(dim, w))
        .collect()
}

/// Levels `1..=K` of a log-signature, each validated to lie in `Lie^k(V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogSignature {
    dim: usize,
    levels: Vec<Tensor>,
}

impl LogSignature {
    /// `levels[i]` is the level-`(i+1)` component `T_(i+1)`.
    pub fn new(dim: usize, levels: Vec<Tensor>) -> Result<Self> {
        for (i, t) in levels.iter().enumerate() {
            if t.order() != i + 1 {
                return Err(Error::OrderMismatch {
                    expected: i + 1,
                    found: t.order(),
                });
            }
            if t.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: t.dim(),
                });
            }
            if !is_lie_element(t)? {
                return Err(Error::NotLieElement { level: i + 1 });
            }
        }
        Ok(Self { dim, levels })
    }

    pub fn zero(dim: usize, max_level: usize) -> Self {
        Self {
            dim,
            levels: (1..=max_level).map(|k| Tensor::zeros(k, dim)).collect(),
        }
    }

    /// A log-signature supported in the single degree `n`.
    pub fn pure(t: Tensor, max_level: usize) -> Result<Self> {
        let (dim, n) = (t.dim(), t.order());
        let mut levels: Vec<Tensor> = (1..=max_level).map(|k| Tensor::zeros(k, dim)).collect();
        if n == 0 || n > max_level {
            return Err(Error::LevelExceeded {
                needed: n,
                available: max_level,
            });
        }
        levels[n - 1] = t;
        Self::new(dim, levels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    /// `T_(k)` for `1 ≤ k ≤ K`.
    pub fn level(&self, k: usize) -> &Tensor {
        &self.levels[k - 1]
    }

    pub fn levels(&self) -> &[Tensor] {
        &self.levels
    }

    /// The element of the tensor algebra with constant term 0.
    fn as_nilpotent(&self) -> TruncatedSignature {
        let mut levels = vec![Tensor::scalar(Scalar::zero(), self.dim)];
        levels.extend(self.levels.iter().cloned());
        TruncatedSignature::new(self.dim, levels).expect("levels are well formed")
    }
}

#[derive(Serialize, Deserialize)]
struct LogSignatureJson {
    dim: usize,
    max_level: usize,
    levels: Vec<Tensor>,
}

impl Serialize for LogSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LogSignatureJson {
            dim: self.dim,
            max_level: self.max_level(),
            levels: self.levels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LogSignature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LogSignatureJson::deserialize(d)?;
        if raw.levels.len() != raw.max_level {
            return Err(serde::de::Error::custom(format!(
                "max_level {} but {} levels given",
                raw.max_level,
                raw.levels.len()
            )));
        }
        LogSignature::new(raw.dim, raw.levels).map_err(serde::de::Error::custom)
    }
}

/// `exp(ℓ)` truncated at the log-signature's level; level `k` is `φ_k(ℓ)`.
pub fn exp_log_signature(l: &LogSignature) -> TruncatedSignature {
    let n = l.as_nilpotent();
    let k_max = l.max_level();
    let mut result = TruncatedSignature::trivial(l.dim, k_max);
    let mut term = TruncatedSignature::trivial(l.dim, k_max);
    for t in 1..=k_max {
        term = term.product(&n).expect("matching shapes");
        let scaled = scale_levels(&term, &inv_factorial(t));
        result = add_levels(&result, &scaled);
    }
    result
}

/// `log(s) = Σ_t (−1)^{t+1} N^t / t` with `N = s − 1`.
///
/// Fails when the constant term is not 1, or when `s` is not group-like (its
/// logarithm then has a level outside the free Lie algebra).
pub fn log_signature(s: &TruncatedSignature) -> Result<LogSignature> {
    if !s.constant().is_one() {
        return Err(Error::ConstantTermNotOne);
    }
    let dim = s.dim();
    let k_max = s.max_level();
    let mut n_levels = s.levels().to_vec();
    n_levels[0] = Tensor::scalar(Scalar::zero(), dim);
    let n = TruncatedSignature::new(dim, n_levels)?;
    let mut result = zero_algebra(dim, k_max);
    let mut power = n.clone();
    for t in 1..=k_max {
        let sign = if t % 2 == 1 { 1 } else { -1 };
        let c = Scalar::new(sign.into(), t.into());
        result = add_levels(&result, &scale_levels(&power, &c));
        if t < k_max {
            power = power.product(&n)?;
        }
    }
    LogSignature::new(dim, result.into_levels().into_iter().skip(1).collect())
}

fn zero_algebra(dim: usize, k_max: usize) -> TruncatedSignature {
    let mut levels = vec![Tensor::scalar(Scalar::zero(), dim)];
    levels.extend((1..=k_max).map(|k| Tensor::zeros(k, dim)));
    TruncatedSignature::new(dim, levels).expect("well formed")
}

fn scale_levels(s: &TruncatedSignature, c: &Scalar) -> TruncatedSignature {
    TruncatedSignature::new(s.dim(), s.levels().iter().map(|t| t.scale(c)).collect()).expect("well formed")
}

fn add_levels(a: &TruncatedSignature, b: &TruncatedSignature) -> TruncatedSignature {
    TruncatedSignature::new(
        a.dim(),
        a.levels().iter().zip(b.levels()).map(|(x, y)| x + y).collect(),
    )
    .expect("well formed")
}

/// An integer partition `λ_1 ≥ ... ≥ λ_s > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Precondition(format!(
                "partition parts must be positive and nonempty, got {parts:?}"
            )));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `a_i(λ)`: how many times `i` occurs.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    pub fn has_distinct_entries(&self) -> bool {
        self.parts.windows(2).any(|w| w[0] != w[1])
    }

    /// The distinct orderings of the parts, in lexicographic order.
    pub fn distinct_permutations(&self) -> Vec<Vec<usize>> {
        let mut cur: Vec<usize> = self.parts.iter().rev().cloned().collect();
        let mut out = vec![cur.clone()];
        while next_permutation(&mut cur) {
            out.push(cur.clone());
        }
        out
    }

    /// All partitions of `k`, largest first part first.
    pub fn all(k: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if k > 0 {
            go(k, k, &mut Vec::new(), &mut out);
        }
        out
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The `λ`-component of `φ_k(ℓ)`: `Σ_{α ∈ P(λ)} (1/t!) T_(α_1) ⊗ ... ⊗ T_(α_t)`.
pub fn f_lambda(l: &LogSignature, lam: &Partition) -> Result<Tensor> {
    let k = lam.sum();
    if k > l.max_level() {
        return Err(Error::LevelExceeded {
            needed: k,
            available: l.max_level(),
        });
    }
    let weight = inv_factorial(lam.len());
    let mut acc = Tensor::zeros(k, l.dim());
    for alpha in lam.distinct_permutations() {
        let mut term = Tensor::scalar(Scalar::one(), l.dim());
        for &a in &alpha {
            term = term.tensor_product(l.level(a))?;
            if term.is_zero() {
                break;
            }
        }
        if !term.is_zero() {
            acc.add_scaled(&weight, &term)?;
        }
    }
    Ok(acc)
}

/// True when `λ ⊢ k` has two distinct entries and some entry divides `k`; then
/// no nonzero signature has level `k` inside `W_λ(V)`.
///
/// This is sufficient, not necessary: `λ = (2,3,6)`, `k = 11` returns false,
/// yet `W_(2,3,6)` contains no nonzero signature either.
pub fn thrall_forced_zero(lam: &Partition, k: usize) -> Result<bool> {
    if lam.sum() != k {
        return Err(Error::Precondition(format!(
            "partition {:?} does not sum to {k}",
            lam.parts()
        )));
    }
    Ok(lam.has_distinct_entries() && lam.parts().iter().any(|&p| k.is_multiple_of(p)))
}

/// Check whether `s` looks like the signature of a pure `n`-volume path from
/// level `k0` on: level `k` must be `T^{⊗h}/h!` when `k = hn` (with `T` the
/// level-`n` log-signature component) and zero otherwise, for all
/// `k0 ≤ k ≤ K`.
pub fn pure_volume_check(s: &TruncatedSignature, n: usize, k0: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if k0 <= n {
        return Err(Error::Precondition(format!("k0 = {k0} must exceed n = {n}")));
    }
    if k0 > s.max_level() {
        return Err(Error::LevelExceeded {
            needed: k0,
            available: s.max_level(),
        });
    }
    let log = log_signature(s)?;
    let t = log.level(n);
    for k in k0..=s.max_level() {
        let expected = if k % n == 0 {
            let h = k / n;
            let mut p = Tensor::scalar(Scalar::one(), s.dim());
            for _ in 0..h {
                p = p.tensor_product(t)?;
            }
            p.scale(&inv_factorial(h))
        } else {
            Tensor::zeros(k, s.dim())
        };
        if s.level(k) != &expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{frac, int};
    use crate::path::{pwl_signature, segment_signature, Path};

    fn e(d: usize, i: usize) -> Tensor {
        Tensor::basis(d, &[i])
    }

    #[test]
    fn bracket_basics() {
        let b = lie_bracket(&e(2, 0), &e(2, 1)).unwrap();
        assert_eq!(b, &Tensor::basis(2, &[0, 1]) - &Tensor::basis(2, &[1, 0]));
        let v = Tensor::from_vector(&[int(2), int(-1)]);
        assert!(lie_bracket(&v, &v).unwrap().is_zero());
        assert!(lie_bracket(&e(2, 0), &e(3, 0)).is_err());
    }

    #[test]
    fn jacobi_identity() {
        let (a, b, c) = (e(3, 0), e(3, 1), e(3, 2));
        let br = |x: &Tensor, y: &Tensor| lie_bracket(x, y).unwrap();
        let sum = &(&br(&br(&a, &b), &c) + &br(&br(&b, &c), &a)) + &br(&br(&c, &a), &b);
        assert!(sum.is_zero());
    }

    #[test]
    fn dynkin_membership() {
        let area = lie_bracket(&e(2, 0), &e(2, 1)).unwrap();
        assert!(is_lie_element(&area).unwrap());
        assert!(!is_lie_element(&Tensor::basis(2, &[0, 1])).unwrap());
        assert!(is_lie_element(&e(4, 2)).unwrap());
        assert!(is_lie_element(&Tensor::scalar(int(1), 2)).is_err());

        let inner = lie_bracket(&e(3, 1), &e(3, 2)).unwrap();
        let t3 = lie_bracket(&e(3, 0), &inner).unwrap();
        assert!(is_lie_element(&t3).unwrap());
    }

    #[test]
    fn lyndon_words_and_counts() {
        assert_eq!(lyndon_words(2, 3), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        // Witt's formula: dim Lie^k(Q^d).
        let witt = [(2, 4, 3), (3, 3, 8), (3, 4, 18), (2, 5, 6)];
        for (d, k, n) in witt {
            assert_eq!(lyndon_words(d, k).len(), n);
            for t in lyndon_basis(d, k) {
                assert!(is_lie_element(&t).unwrap());
            }
        }
    }

    #[test]
    fn exp_of_segment_log() {
        let v = vec![int(1), int(3)];
        let mut levels = vec![Tensor::from_vector(&v)];
        levels.extend((2..=4).map(|k| Tensor::zeros(k, 2)));
        let l = LogSignature::new(2, levels).unwrap();
        assert_eq!(exp_log_signature(&l), segment_signature(&v, 4));
        assert_eq!(log_signature(&segment_signature(&v, 4)).unwrap(), l);
    }

    #[test]
    fn exp_of_zero_is_trivial() {
        assert_eq!(
            exp_log_signature(&LogSignature::zero(3, 3)),
            TruncatedSignature::trivial(3, 3)
        );
        assert_eq!(
            log_signature(&TruncatedSignature::trivial(3, 3)).unwrap(),
            LogSignature::zero(3, 3)
        );
    }

    #[test]
    fn exp_of_pure_area() {
        let area = lie_bracket(&e(2, 0), &e(2, 1)).unwrap();
        let l = LogSignature::pure(area.clone(), 4).unwrap();
        let s = exp_log_signature(&l);
        assert!(s.level(1).is_zero() && s.level(3).is_zero());
        assert_eq!(s.level(2), &area);
        assert_eq!(
            s.level(4),
            &area.tensor_product(&area).unwrap().scale(&frac(1, 2))
        );
        assert!(pure_volume_check(&s, 2, 3).unwrap());
    }

    #[test]
    fn log_of_two_axis_segments() {
        let p = Path::from_integers(&[&[1, 0], &[0, 1]]).unwrap();
        let l = log_signature(&pwl_signature(&p, 2)).unwrap();
        let half_area = lie_bracket(&e(2, 0), &e(2, 1)).unwrap().scale(&frac(1, 2));
        assert_eq!(l.level(2), &half_area);
    }

    #[test]
    fn log_rejects_bad_constant_and_non_lie() {
        let mut levels = TruncatedSignature::trivial(2, 2).into_levels();
        levels[0] = Tensor::scalar(int(2), 2);
        let s = TruncatedSignature::new(2, levels).unwrap();
        assert_eq!(log_signature(&s), Err(Error::ConstantTermNotOne));

        let mut levels = TruncatedSignature::trivial(2, 2).into_levels();
        levels[2] = Tensor::basis(2, &[0, 1]);
        let s = TruncatedSignature::new(2, levels).unwrap();
        assert_eq!(log_signature(&s), Err(Error::NotLieElement { level: 2 }));
    }

    #[test]
    fn log_signature_rejects_non_lie_levels() {
        let r = LogSignature::new(2, vec![e(2, 0), Tensor::basis(2, &[0, 1])]);
        assert_eq!(r, Err(Error::NotLieElement { level: 2 }));
    }

    #[test]
    fn partitions() {
        assert_eq!(Partition::all(4).len(), 5);
        assert_eq!(Partition::all(6).len(), 11);
        let p = Partition::new(vec![1, 2, 1]).unwrap();
        assert_eq!(p.parts(), &[2, 1, 1]);
        assert_eq!(p.multiplicity(1), 2);
        assert_eq!(p.distinct_permutations().len(), 3);
        assert!(Partition::new(vec![0, 1]).is_err());
    }

    #[test]
    fn f_lambda_examples() {
        let area = lie_bracket(&e(2, 0), &e(2, 1)).unwrap();
        let t1 = Tensor::from_vector(&[int(1), int(2)]);
        let l = LogSignature::new(2, vec![t1.clone(), area.clone(), Tensor::zeros(3, 2)]).unwrap();

        let single = f_lambda(&l, &Partition::new(vec![2]).unwrap()).unwrap();
        assert_eq!(single, area);

        let mixed = f_lambda(&l, &Partition::new(vec![2, 1]).unwrap()).unwrap();
        let expected =
            (&t1.tensor_product(&area).unwrap() + &area.tensor_product(&t1).unwrap()).scale(&frac(1, 2));
        assert_eq!(mixed, expected);

        let ones = f_lambda(&l, &Partition::new(vec![1, 1, 1]).unwrap()).unwrap();
        assert_eq!(ones, Tensor::power(t1.entries(), 3).scale(&frac(1, 6)));

        assert!(f_lambda(&l, &Partition::new(vec![4]).unwrap()).is_err());
    }

    #[test]
    fn thrall_forced_zero_examples() {
        let p = |v: Vec<usize>| Partition::new(v).unwrap();
        assert!(thrall_forced_zero(&p(vec![2, 1, 1]), 4).unwrap());
        assert!(!thrall_forced_zero(&p(vec![2, 2]), 4).unwrap());
        assert!(!thrall_forced_zero(&p(vec![2, 3, 6]), 11).unwrap());
        assert!(thrall_forced_zero(&p(vec![2, 2]), 5).is_err());
    }

    #[test]
    fn pure_volume_rejects_segments_and_bad_args() {
        let s = segment_signature(&[int(1), int(1)], 4);
        assert!(!pure_volume_check(&s, 2, 3).unwrap());
        assert!(pure_volume_check(&s, 2, 2).is_err());
        assert!(pure_volume_check(&s, 2, 5).is_err());
        assert!(pure_volume_check(&s, 1, 2).unwrap());
    }
}
