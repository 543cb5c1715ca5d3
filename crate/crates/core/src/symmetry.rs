//! Symmetry classes of signature tensors, the 2×2×2 signature family,
//! mode subspaces and conciseness.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::scalar::{frac, parse_scalar};
use crate::exact::{Scalar, Subspace, Tensor};
use crate::lie::{exp_log_signature, LogSignature};
use crate::path::TruncatedSignature;

/// The two index blocks partial symmetry is tested on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartialBlock {
    /// Invariance under permutations of positions `0..k-1`.
    FirstKMinus1,
    /// Invariance under permutations of positions `1..k`.
    LastKMinus1,
}

impl PartialBlock {
    /// Identify a block from its (0-based) positions. Blocks other than the
    /// first or last `k−1` positions are rejected.
    pub fn from_positions(positions: &[usize], k: usize) -> Result<Self> {
        let mut p = positions.to_vec();
        p.sort_unstable();
        p.dedup();
        if k >= 2 && p == (0..k - 1).collect::<Vec<_>>() {
            Ok(PartialBlock::FirstKMinus1)
        } else if k >= 2 && p == (1..k).collect::<Vec<_>>() {
            Ok(PartialBlock::LastKMinus1)
        } else {
            Err(Error::InvalidModeSubset(format!(
                "partial symmetry is supported on the first or last {} positions only, got {positions:?}",
                k.saturating_sub(1)
            )))
        }
    }

    /// Adjacent transpositions `(p, p+1)` generating the block's symmetric group.
    fn swaps(self, k: usize) -> std::ops::Range<usize> {
        match self {
            PartialBlock::FirstKMinus1 => 0..k.saturating_sub(2),
            PartialBlock::LastKMinus1 => 1..k.saturating_sub(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryProperty {
    Symmetric,
    FirstKMinus1,
    LastKMinus1,
    Skew,
}

/// An entry and its image under an adjacent transposition that break a property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryWitness {
    pub property: SymmetryProperty,
    /// 0-based multi-index.
    pub index: Vec<usize>,
    pub swapped: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub is_symmetric: bool,
    pub is_skew: bool,
    pub partial: BTreeSet<PartialBlock>,
    /// The first violation found, checked in the order symmetric, first
    /// block, last block, skew. Present iff some property fails.
    pub witness: Option<SymmetryWitness>,
}

/// First entry `i` with `t[swap_p(i)] != sign·t[i]` for some `p` in `positions`.
fn find_violation(
    t: &Tensor,
    positions: std::ops::Range<usize>,
    skew: bool,
) -> Option<(Vec<usize>, Vec<usize>)> {
    for p in positions {
        for (off, x) in t.entries().iter().enumerate() {
            let idx = t.multi_index(off);
            if idx[p] >= idx[p + 1] {
                // Each unordered pair is visited once; equal indices only matter for skew.
                if !(skew && idx[p] == idx[p + 1] && !x.is_zero()) {
                    continue;
                }
            }
            let mut swapped = idx.clone();
            swapped.swap(p, p + 1);
            let y = t.get(&swapped);
            let ok = if skew { *y == -x } else { y == x };
            if !ok {
                return Some((idx, swapped));
            }
        }
    }
    None
}

pub fn symmetry_report(t: &Tensor) -> Result<SymmetryReport> {
    let k = t.order();
    if k < 2 {
        return Err(Error::Precondition(format!(
            "symmetry needs order at least 2, got {k}"
        )));
    }
    let checks = [
        (SymmetryProperty::Symmetric, find_violation(t, 0..k - 1, false)),
        (
            SymmetryProperty::FirstKMinus1,
            find_violation(t, PartialBlock::FirstKMinus1.swaps(k), false),
        ),
        (
            SymmetryProperty::LastKMinus1,
            find_violation(t, PartialBlock::LastKMinus1.swaps(k), false),
        ),
        (SymmetryProperty::Skew, find_violation(t, 0..k - 1, true)),
    ];
    let mut partial = BTreeSet::new();
    if checks[1].1.is_none() {
        partial.insert(PartialBlock::FirstKMinus1);
    }
    if checks[2].1.is_none() {
        partial.insert(PartialBlock::LastKMinus1);
    }
    let witness = checks.iter().find_map(|(property, v)| {
        v.as_ref().map(|(index, swapped)| SymmetryWitness {
            property: *property,
            index: index.clone(),
            swapped: swapped.clone(),
        })
    });
    Ok(SymmetryReport {
        is_symmetric: checks[0].1.is_none(),
        is_skew: checks[3].1.is_none(),
        partial,
        witness,
    })
}

/// Whether `t` is invariant under permutations within `block`.
pub fn is_partially_symmetric(t: &Tensor, block: PartialBlock) -> bool {
    find_violation(t, block.swaps(t.order()), false).is_none()
}

pub fn is_symmetric(t: &Tensor) -> bool {
    find_violation(t, 0..t.order().saturating_sub(1), false).is_none()
}

pub fn is_skew(t: &Tensor) -> bool {
    find_violation(t, 0..t.order().saturating_sub(1), true).is_none()
}

/// Coordinates of a 2×2×2 signature tensor: `T_(1) = (x, y)`,
/// `T_(2) = a·[e_1, e_2]`, `T_(3) = b·[e_1,[e_1,e_2]] + c·[[e_1,e_2],e_2]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sig222Params {
    #[serde(with = "crate::exact::scalar::serde_str")]
    pub x: Scalar,
    #[serde(with = "crate::exact::scalar::serde_str")]
    pub y: Scalar,
    #[serde(with = "crate::exact::scalar::serde_str")]
    pub a: Scalar,
    #[serde(with = "crate::exact::scalar::serde_str")]
    pub b: Scalar,
    #[serde(with = "crate::exact::scalar::serde_str")]
    pub c: Scalar,
}

impl Sig222Params {
    pub fn new(x: Scalar, y: Scalar, a: Scalar, b: Scalar, c: Scalar) -> Self {
        Self { x, y, a, b, c }
    }

    pub fn from_integers(x: i64, y: i64, a: i64, b: i64, c: i64) -> Self {
        let i = |n: i64| frac(n, 1);
        Self::new(i(x), i(y), i(a), i(b), i(c))
    }

    /// The log-signature with these coordinates, truncated at level 3.
    pub fn log_signature(&self) -> LogSignature {
        let t1 = Tensor::from_vector(&[self.x.clone(), self.y.clone()]);
        let mut t2 = Tensor::zeros(2, 2);
        t2.set(&[0, 1], self.a.clone());
        t2.set(&[1, 0], -self.a.clone());
        let mut t3 = Tensor::zeros(3, 2);
        let two = Scalar::from_integer(2.into());
        for (idx, coeff) in [
            ([0, 0, 1], self.b.clone()),
            ([0, 1, 0], -&two * &self.b),
            ([1, 0, 0], self.b.clone()),
            ([0, 1, 1], self.c.clone()),
            ([1, 0, 1], -&two * &self.c),
            ([1, 1, 0], self.c.clone()),
        ] {
            t3.set(&idx, coeff);
        }
        LogSignature::new(2, vec![t1, t2, t3]).expect("components are Lie elements")
    }
}

impl FromStr for Sig222Params {
    type Err = Error;

    /// Five comma-separated rationals `x,y,a,b,c`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<Scalar> = s
            .split(',')
            .map(|p| parse_scalar(p.trim()))
            .collect::<Result<_>>()?;
        match <[Scalar; 5]>::try_from(parts) {
            Ok([x, y, a, b, c]) => Ok(Self { x, y, a, b, c }),
            Err(v) => Err(Error::Parse(format!(
                "expected 5 parameters x,y,a,b,c, got {}",
                v.len()
            ))),
        }
    }
}

impl fmt::Display for Sig222Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.x, self.y, self.a, self.b, self.c)
    }
}

/// Level 3 of the signature with coordinates `p`, entry by entry.
pub fn sig222_from_params(p: &Sig222Params) -> Tensor {
    let (x, y, a, b, c) = (&p.x, &p.y, &p.a, &p.b, &p.c);
    let sixth = frac(1, 6);
    let half = frac(1, 2);
    let two = frac(2, 1);
    let x2y = &sixth * x * x * y;
    let xy2 = &sixth * x * y * y;
    let entries = vec![
        &sixth * x * x * x,
        &x2y + &half * a * x + b,
        &x2y - &two * b,
        &xy2 + &half * a * y + c,
        &x2y - &half * a * x + b,
        &xy2 - &two * c,
        &xy2 - &half * a * y + c,
        &sixth * y * y * y,
    ];
    Tensor::new(3, 2, entries).expect("eight entries")
}

/// Closed-form condition for the 2×2×2 signature to be partially symmetric:
/// `ax = 6b, ay = −6c` on the first two indices, `ax = −6b, ay = 6c` on the last two.
pub fn partial_symmetry_constraint(p: &Sig222Params, block: PartialBlock) -> bool {
    let six = frac(6, 1);
    let (ax, ay) = (&p.a * &p.x, &p.a * &p.y);
    let (sb, sc) = (&six * &p.b, &six * &p.c);
    match block {
        PartialBlock::FirstKMinus1 => ax == sb && ay == -sc,
        PartialBlock::LastKMinus1 => ax == -sb && ay == sc,
    }
}

/// `−(1/3)(yb + xc)²(4yb + 4xc − 3a²)`.
pub fn sig222_hyperdet_closed_form(p: &Sig222Params) -> Scalar {
    let s = &p.y * &p.b + &p.x * &p.c;
    let four = frac(4, 1);
    let three = frac(3, 1);
    -frac(1, 3) * &s * &s * (&four * &s - &three * &p.a * &p.a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsequenceReport {
    pub level: usize,
    /// Whether level `k` of the signature is nonzero and partially symmetric.
    pub hypothesis_met: bool,
    pub passed: bool,
    /// The first consequence that failed.
    pub violated: Option<String>,
}

/// If level `k ≥ 4` of `exp(ℓ)` is nonzero and partially symmetric, check that
/// `T_(1) ≠ 0`, that `T_(i) = 0` for `2 ≤ i ≤ k/2`, and that every level
/// `2..=k` is symmetric.
pub fn verify_partial_symmetry_consequences(l: &LogSignature, k: usize) -> Result<ConsequenceReport> {
    if k < 4 {
        return Err(Error::Precondition(format!(
            "partial symmetry consequences are stated for k ≥ 4, got {k}"
        )));
    }
    if k > l.max_level() {
        return Err(Error::LevelExceeded {
            needed: k,
            available: l.max_level(),
        });
    }
    let sig = exp_log_signature(l);
    let phi = sig.level(k);
    let hypothesis_met = !phi.is_zero()
        && (is_partially_symmetric(phi, PartialBlock::FirstKMinus1)
            || is_partially_symmetric(phi, PartialBlock::LastKMinus1));
    let mut violated = None;
    if hypothesis_met {
        if l.level(1).is_zero() {
            violated = Some("level 1 of the log-signature vanishes".to_string());
        } else if let Some(i) = (2..=k / 2).find(|&i| !l.level(i).is_zero()) {
            violated = Some(format!("level {i} of the log-signature is nonzero"));
        } else if let Some(i) = (2..=k).find(|&i| !is_symmetric(sig.level(i))) {
            violated = Some(format!("signature level {i} is not symmetric"));
        }
    }
    Ok(ConsequenceReport {
        level: k,
        hypothesis_met,
        passed: violated.is_none(),
        violated,
    })
}

/// True iff level `k ≥ 3` of `exp(ℓ)` is zero whenever it is skew-symmetric.
pub fn skew_impossibility_check(l: &LogSignature, k: usize) -> Result<bool> {
    if k < 3 {
        return Err(Error::Precondition(format!(
            "skew signatures exist at level 2; the check needs k ≥ 3, got {k}"
        )));
    }
    if k > l.max_level() {
        return Err(Error::LevelExceeded {
            needed: k,
            available: l.max_level(),
        });
    }
    let phi = exp_log_signature(l).level(k).clone();
    Ok(!is_skew(&phi) || phi.is_zero())
}

/// For each mode, the span of the fibers along that mode.
pub fn mode_subspaces(t: &Tensor) -> Vec<Subspace> {
    (0..t.order())
        .map(|mode| Subspace::span(t.dim(), &t.mode_fibers(mode)).expect("fibers have length dim"))
        .collect()
}

/// The smallest `W` with `t ∈ W^{⊗k}`: the join of all mode subspaces.
pub fn symmetric_conciseness(t: &Tensor) -> Result<Subspace> {
    if t.order() == 0 {
        return Err(Error::Precondition("conciseness needs order at least 1".into()));
    }
    mode_subspaces(t)
        .iter()
        .try_fold(Subspace::zero(t.dim()), |acc, s| acc.join(s))
}

/// Whether every mode subspace of `t` is the whole space.
pub fn is_concise(t: &Tensor) -> bool {
    mode_subspaces(t).iter().all(Subspace::is_full)
}

/// Whether `t ∈ W^{⊗k}`.
pub fn tensor_in_power(t: &Tensor, w: &Subspace) -> Result<bool> {
    if w.ambient_dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: w.ambient_dim(),
        });
    }
    Ok(mode_subspaces(t).iter().all(|s| w.contains_subspace(s)))
}

/// The join of the conciseness subspaces of levels `1..=K`, or `None` when
/// it is the whole space. A proper result only certifies confinement up to
/// the truncation level.
pub fn hyperplane_recovery(s: &TruncatedSignature) -> Result<Option<Subspace>> {
    if s.max_level() < 2 {
        return Err(Error::Precondition(format!(
            "recovery needs truncation level at least 2, got {}",
            s.max_level()
        )));
    }
    let mut w = Subspace::zero(s.dim());
    for k in 1..=s.max_level() {
        w = w.join(&symmetric_conciseness(s.level(k))?)?;
        if w.is_full() {
            return Ok(None);
        }
    }
    Ok(Some(w))
}

/// Given level `k` of `s` inside `W^{⊗k}`, check that level `t` lies in
/// `W^{⊗t}` for every divisor `t` of `k`.
pub fn divisor_propagation_check(s: &TruncatedSignature, k: usize, w: &Subspace) -> Result<bool> {
    if k == 0 || k > s.max_level() {
        return Err(Error::LevelExceeded {
            needed: k,
            available: s.max_level(),
        });
    }
    if !tensor_in_power(s.level(k), w)? {
        return Err(Error::HypothesisNotMet(format!(
            "level {k} does not lie in W^⊗{k}"
        )));
    }
    for t in (1..k).filter(|t| k.is_multiple_of(*t)) {
        if !tensor_in_power(s.level(t), w)? {
            return Ok(false);
        }
    }
    Ok(true)
}
