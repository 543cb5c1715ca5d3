//! The 2×2×2 hyperdeterminant and complex rank classification.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{Scalar, Tensor};

fn check_222(t: &Tensor) -> Result<()> {
    if t.order() != 3 {
        return Err(Error::OrderMismatch {
            expected: 3,
            found: t.order(),
        });
    }
    if t.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: t.dim(),
        });
    }
    Ok(())
}

/// Cayley's hyperdeterminant of a 2×2×2 tensor.
pub fn hyperdet_222(t: &Tensor) -> Result<Scalar> {
    check_222(t)?;
    let a = |i: usize, j: usize, k: usize| t.get(&[i, j, k]).clone();
    let (a000, a001, a010, a011) = (a(0, 0, 0), a(0, 0, 1), a(0, 1, 0), a(0, 1, 1));
    let (a100, a101, a110, a111) = (a(1, 0, 0), a(1, 0, 1), a(1, 1, 0), a(1, 1, 1));
    let sq = |x: &Scalar| x * x;

    let squares = sq(&(&a000 * &a111)) + sq(&(&a001 * &a110)) + sq(&(&a010 * &a101)) + sq(&(&a100 * &a011));
    let pairs = &a000 * &a111 * &a001 * &a110
        + &a000 * &a111 * &a010 * &a101
        + &a000 * &a111 * &a100 * &a011
        + &a001 * &a110 * &a010 * &a101
        + &a001 * &a110 * &a100 * &a011
        + &a010 * &a101 * &a100 * &a011;
    let quads = &a000 * &a011 * &a101 * &a110 + &a001 * &a010 * &a100 * &a111;

    Ok(squares - pairs * Scalar::from_integer(2.into()) + quads * Scalar::from_integer(4.into()))
}

/// Rank over the complex numbers of a 2×2×2 tensor.
///
/// 0 for the zero tensor; 1 when every flattening has rank at most 1; 3 when
/// the hyperdeterminant vanishes and all three flattenings have rank 2;
/// 2 otherwise. Real rank can differ and is not computed.
pub fn classify_222_complex_rank(t: &Tensor) -> Result<u8> {
    check_222(t)?;
    if t.is_zero() {
        return Ok(0);
    }
    let ranks: Vec<usize> = (0..3)
        .map(|mode| t.flatten(&[mode]).map(|f| f.rank()))
        .collect::<Result<_>>()?;
    if ranks.iter().all(|&r| r <= 1) {
        return Ok(1);
    }
    if hyperdet_222(t)?.is_zero() && ranks.iter().all(|&r| r == 2) {
        return Ok(3);
    }
    Ok(2)
}
