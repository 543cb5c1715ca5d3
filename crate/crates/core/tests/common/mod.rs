#![allow(dead_code)]

use proptest::prelude::*;
use sigtensor::exact::scalar::int;
use sigtensor::{Path, Scalar, Tensor};

pub fn ints(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| int(x)).collect()
}

/// `(order, dim, entries)` with small integer entries.
pub fn tensor_strategy(max_order: usize, max_dim: usize) -> impl Strategy<Value = Tensor> {
    (0..=max_order, 1..=max_dim).prop_flat_map(|(k, d)| {
        prop::collection::vec(-4i64..=4, d.pow(k as u32))
            .prop_map(move |xs| Tensor::new(k, d, ints(&xs)).unwrap())
    })
}

pub fn vectors_strategy(
    m: std::ops::RangeInclusive<usize>,
    d: usize,
    range: i64,
) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    prop::collection::vec(prop::collection::vec(-range..=range, d), m)
        .prop_map(|vs| vs.iter().map(|v| ints(v)).collect())
}

pub fn path_strategy(max_dim: usize, max_segments: usize) -> impl Strategy<Value = Path> {
    (1..=max_dim).prop_flat_map(move |d| {
        vectors_strategy(1..=max_segments, d, 3).prop_map(move |inc| Path::new(d, inc).unwrap())
    })
}

/// Square matrices with nonzero determinant, as rows.
pub fn invertible_strategy(d: usize) -> impl Strategy<Value = sigtensor::Matrix> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, d), d)
        .prop_map(|rows| sigtensor::Matrix::from_rows(rows.iter().map(|r| ints(r)).collect()).unwrap())
        .prop_filter("invertible", move |m| m.rank() == d)
}

/// Every permutation of `0..k`, lexicographically.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}
