//! Upper bound formulas and lower bounds from flattenings.

use num_integer::binomial;

use crate::error::{Error, Result};
use crate::exact::{matrix_rank, Tensor};

/// Upper bound on `rk(S_{k,α}(v_1..v_m))` achieved by
/// [`decompose_s_k_alpha`](super::decompose_s_k_alpha).
///
/// For `k ≥ 3`, `m ≥ 4`:
/// `Σ_{j=0}^{k-4} C(m+j-4, j)·⌈(k-j+1)²/4⌉ + 2·C(m+k-6, k-2) + 4·C(m+k-7, k-3)`.
/// Small cases: `m = 1` gives 1, `m = 2` gives `⌈(k+1)/2⌉`, `m = 3` gives
/// `⌈(k+1)²/4⌉`, `k = 2` gives `m`.
pub fn rank_bound_formula(k: usize, m: usize) -> u64 {
    let (k64, m64) = (k as u64, m as u64);
    match (k, m) {
        (_, 0) => u64::from(k == 0),
        (0 | 1, _) | (_, 1) => 1,
        (_, 2) => (k64 + 2) / 2,
        (_, 3) => ((k64 + 1) * (k64 + 1)).div_ceil(4),
        (2, _) => m64,
        _ => {
            let head: u64 = (0..k64 - 3)
                .map(|j| binomial(m64 + j - 4, j) * ((k64 - j + 1) * (k64 - j + 1)).div_ceil(4))
                .sum();
            head + 2 * binomial(m64 + k64 - 6, k64 - 2) + 4 * binomial(m64 + k64 - 7, k64 - 3)
        }
    }
}

/// `Σ_{a_1=4}^{m} Σ_{a_2=4}^{a_1} ... Σ_{a_{k-3}=4}^{a_{k-4}} (a_{k-3} − 1)`, summed directly.
pub fn hockey_stick_nested(k: usize, m: usize) -> u64 {
    fn go(depth: usize, upper: u64) -> u64 {
        (4..=upper)
            .map(|a| if depth == 1 { a - 1 } else { go(depth - 1, a) })
            .sum()
    }
    assert!(k >= 4 && m >= 4, "nested sum needs k ≥ 4 and m ≥ 4");
    go(k - 3, m as u64)
}

/// Closed form of [`hockey_stick_nested`]: `C(m+k-6, k-2) + 2·C(m+k-7, k-3)`.
pub fn hockey_stick_closed(k: usize, m: usize) -> u64 {
    let (k, m) = (k as u64, m as u64);
    binomial(m + k - 6, k - 2) + 2 * binomial(m + k - 7, k - 3)
}

/// Row-mode sets of the bipartitions scanned by [`flattening_lower_bound`].
///
/// Up to order 7 this is every bipartition up to complement (mode 0 always on
/// the row side). From order 8 on only the odd/even split and the prefix
/// splits are used.
pub fn bipartitions(order: usize) -> Vec<Vec<usize>> {
    if order < 2 {
        return Vec::new();
    }
    if order <= 7 {
        let rest = order - 1;
        return (0..(1usize << rest) - 1)
            .map(|mask| {
                let mut rows = vec![0];
                rows.extend((0..rest).filter(|b| mask & (1 << b) != 0).map(|b| b + 1));
                rows
            })
            .collect();
    }
    let mut out = vec![(0..order).step_by(2).collect::<Vec<_>>()];
    out.extend((1..order).map(|p| (0..p).collect()));
    out
}

/// Maximum matrix rank over the flattenings of `t`.
pub fn flattening_lower_bound(t: &Tensor) -> Result<usize> {
    if t.order() < 2 {
        return Err(Error::Precondition(format!(
            "flattenings need order at least 2, got {}",
            t.order()
        )));
    }
    let mut best = 0;
    for rows in bipartitions(t.order()) {
        let r = matrix_rank(&t.flatten(&rows)?.matrix);
        best = best.max(r);
    }
    Ok(best)
}

/// `max over pivot modes of ⌈rank(F)/(d−1)⌉` for the Koszul flattening `F`.
pub fn koszul_lower_bound(t: &Tensor) -> Result<usize> {
    if t.order() != 3 {
        return Err(Error::OrderMismatch {
            expected: 3,
            found: t.order(),
        });
    }
    let d = t.dim();
    if d <= 1 {
        return Ok(usize::from(!t.is_zero()));
    }
    let mut best = 0;
    for pivot in 0..3 {
        let r = t.koszul_flatten(pivot)?.rank();
        best = best.max(r.div_ceil(d - 1));
    }
    Ok(best)
}
