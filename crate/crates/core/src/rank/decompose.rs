//! Constructors for explicit decompositions of `S_{k,α}` and of signatures of
//! piecewise linear paths.
//!
//! Every constructor first builds a symbolic decomposition whose factors are
//! linear combinations of the input vectors (referenced by position), then
//! evaluates it. The symbolic form lets tests expand the terms back into
//! monomials and check that each one appears exactly once with the right
//! weight, independently of the vectors chosen.

use num_traits::{One, Zero};

use super::{Decomposition, Term};
use crate::error::{Error, Result};
use crate::exact::scalar::{factorial, inv_factorial};
use crate::exact::{Scalar, Tensor};
use crate::path::{pwl_signature, Path};

/// A linear combination `Σ c · vs[i]`.
type Combo = Vec<(usize, Scalar)>;

#[derive(Debug, Clone)]
struct SymTerm {
    coeff: Scalar,
    factors: Vec<Combo>,
}

/// Weight of the monomial `w_1^{e_1} ⊗ ... ⊗ w_m^{e_m}` in `S_{k,α}(w_1..w_m)`.
fn weight(exps: &[usize], alpha: usize) -> Scalar {
    let mut den = factorial(exps[0] + alpha);
    for &e in &exps[1..] {
        den *= factorial(e);
    }
    Scalar::new(One::one(), den)
}

fn letter(i: usize) -> Combo {
    vec![(i, Scalar::one())]
}

fn repeat(i: usize, n: usize) -> impl Iterator<Item = Combo> {
    std::iter::repeat_n(letter(i), n)
}

/// One monomial of `S_{k,α}(ls)` as its own term.
fn monomial(ls: &[usize], exps: &[usize], alpha: usize) -> SymTerm {
    let factors = ls.iter().zip(exps).flat_map(|(&l, &e)| repeat(l, e)).collect();
    SymTerm {
        coeff: weight(exps, alpha),
        factors,
    }
}

/// `prefix ⊗ (Σ_x c_x ls[x]) ⊗ ls[last]^{⊗suffix}`, where the monomial for
/// middle letter `x` has exponents `prefix + e_x + suffix·e_last`. The weight
/// of the last middle letter is pulled out as the coefficient.
fn pivot_group(ls: &[usize], prefix: &[usize], mids: &[usize], suffix: usize, alpha: usize) -> SymTerm {
    let last = ls.len() - 1;
    let mut combo: Combo = Vec::with_capacity(mids.len());
    for &x in mids {
        let mut exps = prefix.to_vec();
        exps[x] += 1;
        exps[last] += suffix;
        combo.push((ls[x], weight(&exps, alpha)));
    }
    let coeff = combo.last().expect("at least one middle letter").1.clone();
    for (_, c) in combo.iter_mut() {
        *c = &*c / &coeff;
    }
    let mut factors: Vec<Combo> = ls.iter().zip(prefix).flat_map(|(&l, &e)| repeat(l, e)).collect();
    factors.push(combo);
    factors.extend(repeat(ls[last], suffix));
    SymTerm { coeff, factors }
}

/// Two letters `(u, v)`: adjacent monomials `u^j v^{k-j}` and `u^{j+1} v^{k-j-1}`
/// share all but one factor. Length `⌈(k+1)/2⌉`.
fn two_letters(ls: &[usize], k: usize, alpha: usize) -> Vec<SymTerm> {
    debug_assert_eq!(ls.len(), 2);
    let mut out = Vec::new();
    let first = if k % 2 == 1 {
        0
    } else {
        out.push(monomial(ls, &[0, k], alpha));
        1
    };
    for j in (first..k).step_by(2) {
        out.push(pivot_group(ls, &[j, 0], &[0, 1], k - j - 1, alpha));
    }
    out
}

/// Three letters `(u, v, w)`, grouping monomials by the position where the
/// letter changes. Length `⌈(k+1)²/4⌉`.
fn three_letters(ls: &[usize], k: usize, alpha: usize) -> Vec<SymTerm> {
    debug_assert_eq!(ls.len(), 3);
    let g = |a: usize, b: usize, mids: &[usize], c: usize| pivot_group(ls, &[a, b, 0], mids, c, alpha);
    let mut out = Vec::new();
    let s = k / 2;
    if k % 2 == 1 {
        for i in 0..=s {
            out.push(g(2 * i, 0, &[0, 1, 2], 2 * (s - i)));
        }
        for i in 0..s {
            for j in 1..2 * (s - i) {
                out.push(g(j, 2 * (s - i) - j, &[1, 2], 2 * i));
            }
        }
        for i in 1..=s {
            out.push(g(0, 2 * i, &[1, 2], 2 * (s - i)));
        }
    } else {
        for i in 0..s {
            out.push(g(2 * i + 1, 0, &[0, 1, 2], 2 * (s - i - 1)));
        }
        for i in 0..s.saturating_sub(1) {
            for j in 1..2 * (s - i) - 1 {
                out.push(g(j, 2 * (s - i) - j - 1, &[1, 2], 2 * i));
            }
        }
        for i in 0..s {
            out.push(g(0, 2 * i + 1, &[1, 2], 2 * (s - i - 1)));
        }
        out.push(monomial(ls, &[0, 0, k], alpha));
    }
    out
}

fn exps_of(m: usize, letters: &[usize]) -> Vec<usize> {
    let mut e = vec![0; m];
    for &l in letters {
        e[l] += 1;
    }
    e
}

/// Level 2: `Σ_i w_i ⊗ (c_ii w_i + Σ_{j>i} c_ij w_j)`. Length `m`.
fn second_level(ls: &[usize], alpha: usize) -> Vec<SymTerm> {
    let m = ls.len();
    (0..m)
        .map(|i| {
            let combo = (i..m)
                .map(|j| (ls[j], weight(&exps_of(m, &[i, j]), alpha)))
                .collect();
            SymTerm {
                coeff: Scalar::one(),
                factors: vec![letter(ls[i]), combo],
            }
        })
        .collect()
}

/// Level 3 for any number of letters, in five groups split at `s = ⌈m/2⌉`.
/// Length `2m − 2`.
///
/// Monomials without the first letter carry the extra factor `1/α!`.
fn third_level(ls: &[usize], alpha: usize) -> Vec<SymTerm> {
    let m = ls.len();
    debug_assert!(m >= 2);
    let s = m.div_ceil(2);
    let a0 = inv_factorial(alpha);
    let a1 = inv_factorial(alpha + 1);
    let half = Scalar::new(1.into(), 2.into());
    let sixth = Scalar::new(1.into(), 6.into());
    let one = Scalar::one();
    // 0-based positions; the groups below use 1-based i as in the usual statement.
    let v = |i: usize| ls[i - 1];
    let lower = |i: usize, c1: &Scalar, c: &Scalar| -> Combo {
        let mut combo = vec![(v(1), c1.clone())];
        combo.extend((2..i).map(|j| (v(j), c.clone())));
        combo
    };
    let mut out = Vec::with_capacity(2 * m - 2);

    let mut tail = vec![(v(1), inv_factorial(alpha + 3))];
    tail.extend((2..=m).map(|j| (v(j), inv_factorial(alpha + 2))));
    out.push(SymTerm {
        coeff: one.clone(),
        factors: vec![letter(v(1)), letter(v(1)), tail],
    });

    for i in 2..=s {
        let mut tail = vec![(v(i), sixth.clone())];
        tail.extend((i + 1..=m).map(|j| (v(j), half.clone())));
        out.push(SymTerm {
            coeff: a0.clone(),
            factors: vec![letter(v(i)), letter(v(i)), tail],
        });
    }
    for i in 2..=s {
        let mut tail = vec![(v(i), half.clone())];
        tail.extend((i + 1..=m).map(|j| (v(j), one.clone())));
        out.push(SymTerm {
            coeff: one.clone(),
            factors: vec![lower(i, &a1, &a0), letter(v(i)), tail],
        });
    }
    for i in s + 1..=m {
        let mut head = lower(i, &(&a1 * &half), &(&a0 * &half));
        head.push((v(i), &a0 * &sixth));
        out.push(SymTerm {
            coeff: one.clone(),
            factors: vec![head, letter(v(i)), letter(v(i))],
        });
    }
    for i in s + 1..m {
        let mut head = lower(i, &a1, &a0);
        head.push((v(i), &a0 * &half));
        let tail = (i + 1..=m).map(|j| (v(j), one.clone())).collect();
        out.push(SymTerm {
            coeff: one.clone(),
            factors: vec![head, letter(v(i)), tail],
        });
    }
    out
}

/// Symbolic decomposition of `S_{k,α}(vs[ls[0]], ..., vs[ls[m-1]])`.
///
/// Base cases come first; otherwise strip the first letter:
/// `S_{k,α}(w_1..w_m) = w_1 ⊗ S_{k-1,α+1}(w_1..w_m) + (1/α!) S_{k,0}(w_2..w_m)`.
fn sym_s_k_alpha(ls: &[usize], k: usize, alpha: usize) -> Vec<SymTerm> {
    let m = ls.len();
    if m == 1 {
        return vec![monomial(ls, &[k], alpha)];
    }
    if k == 1 {
        let combo = (0..m)
            .map(|i| (ls[i], weight(&exps_of(m, &[i]), alpha)))
            .collect();
        return vec![SymTerm {
            coeff: Scalar::one(),
            factors: vec![combo],
        }];
    }
    if k == 3 {
        return third_level(ls, alpha);
    }
    if m == 2 {
        return two_letters(ls, k, alpha);
    }
    if m == 3 {
        return three_letters(ls, k, alpha);
    }
    if k == 2 {
        return second_level(ls, alpha);
    }
    let mut out: Vec<SymTerm> = sym_s_k_alpha(ls, k - 1, alpha + 1)
        .into_iter()
        .map(|mut t| {
            t.factors.insert(0, letter(ls[0]));
            t
        })
        .collect();
    let scale = inv_factorial(alpha);
    out.extend(sym_s_k_alpha(&ls[1..], k, 0).into_iter().map(|mut t| {
        t.coeff *= &scale;
        t
    }));
    out
}

fn check_vectors(vs: &[Vec<Scalar>]) -> Result<usize> {
    let first = vs
        .first()
        .ok_or_else(|| Error::Precondition("at least one vector is required".into()))?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Precondition("vectors must have positive dimension".into()));
    }
    if let Some(v) = vs.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    Ok(dim)
}

fn check_order(k: usize, min: usize) -> Result<()> {
    if k < min {
        return Err(Error::Precondition(format!(
            "order must be at least {min}, got {k}"
        )));
    }
    Ok(())
}

fn evaluate(vs: &[Vec<Scalar>], dim: usize, k: usize, sym: Vec<SymTerm>) -> Decomposition {
    let terms = sym
        .into_iter()
        .map(|t| Term {
            coeff: t.coeff,
            factors: t
                .factors
                .iter()
                .map(|combo| {
                    let mut f = vec![Scalar::zero(); dim];
                    for (i, c) in combo {
                        for (x, y) in f.iter_mut().zip(&vs[*i]) {
                            *x += c * y;
                        }
                    }
                    f
                })
                .collect(),
        })
        .collect();
    Decomposition::new(dim, k, terms).expect("constructors produce well-shaped terms")
}

/// `S_{k,α}(v_1..v_m) = Σ_{a_1+...+a_m=k} v_1^{a_1} ⊗ ... ⊗ v_m^{a_m} / ((a_1+α)! a_2! ... a_m!)`.
///
/// Computed as `Σ_a v_1^{⊗a}/(a+α)! ⊗ σ^{(k-a)}(v_2 ⊔ ... ⊔ v_m)`.
pub fn s_k_alpha(vs: &[Vec<Scalar>], k: usize, alpha: usize) -> Result<Tensor> {
    check_order(k, 2)?;
    let dim = check_vectors(vs)?;
    let tail = if vs.len() > 1 {
        Some(pwl_signature(&Path::new(dim, vs[1..].to_vec())?, k))
    } else {
        None
    };
    let mut acc = Tensor::zeros(k, dim);
    for a in 0..=k {
        let head = Tensor::power(&vs[0], a).scale(&inv_factorial(a + alpha));
        let term = match &tail {
            Some(sig) => head.tensor_product(sig.level(k - a))?,
            None if a == k => head,
            None => continue,
        };
        acc.add_scaled(&Scalar::one(), &term)?;
    }
    Ok(acc)
}

/// Level `k` of the signature of `u ⊔ v`, with `⌈(k+1)/2⌉` terms.
pub fn decompose_two_segments(u: &[Scalar], v: &[Scalar], k: usize) -> Result<Decomposition> {
    check_order(k, 1)?;
    let vs = vec![u.to_vec(), v.to_vec()];
    let dim = check_vectors(&vs)?;
    Ok(evaluate(&vs, dim, k, two_letters(&[0, 1], k, 0)))
}

/// Level `k` of the signature of `u ⊔ v ⊔ w`, with `⌈(k+1)²/4⌉` terms.
pub fn decompose_three_segments(u: &[Scalar], v: &[Scalar], w: &[Scalar], k: usize) -> Result<Decomposition> {
    check_order(k, 1)?;
    let vs = vec![u.to_vec(), v.to_vec(), w.to_vec()];
    let dim = check_vectors(&vs)?;
    Ok(evaluate(&vs, dim, k, three_letters(&[0, 1, 2], k, 0)))
}

/// Level 2 of the signature of `v_1 ⊔ ... ⊔ v_m`, with `m` terms.
pub fn decompose_second_level(vs: &[Vec<Scalar>]) -> Result<Decomposition> {
    let dim = check_vectors(vs)?;
    let ls: Vec<usize> = (0..vs.len()).collect();
    Ok(evaluate(vs, dim, 2, second_level(&ls, 0)))
}

/// `S_{3,α}(v_1..v_m)` with `2m − 2` terms.
pub fn decompose_s3_alpha(vs: &[Vec<Scalar>], alpha: usize) -> Result<Decomposition> {
    let dim = check_vectors(vs)?;
    if vs.len() < 2 {
        return Err(Error::Precondition(format!(
            "at least 2 vectors are required, got {}",
            vs.len()
        )));
    }
    let ls: Vec<usize> = (0..vs.len()).collect();
    Ok(evaluate(vs, dim, 3, third_level(&ls, alpha)))
}

/// `S_{k,α}(v_1..v_m)` by stripping leading letters down to the two-letter,
/// three-letter, level-2 and level-3 constructions. For `k ≥ 3`, `m ≥ 4` the
/// length is at most [`rank_bound_formula`](super::rank_bound_formula).
pub fn decompose_s_k_alpha(vs: &[Vec<Scalar>], k: usize, alpha: usize) -> Result<Decomposition> {
    check_order(k, 2)?;
    let dim = check_vectors(vs)?;
    let ls: Vec<usize> = (0..vs.len()).collect();
    Ok(evaluate(vs, dim, k, sym_s_k_alpha(&ls, k, alpha)))
}

/// Level `k ≥ 1` of the signature of a piecewise linear path.
pub fn decompose_path(p: &Path, k: usize) -> Result<Decomposition> {
    check_order(k, 1)?;
    let vs = p.increments();
    let ls: Vec<usize> = (0..vs.len()).collect();
    Ok(evaluate(vs, p.dim(), k, sym_s_k_alpha(&ls, k, 0)))
}
