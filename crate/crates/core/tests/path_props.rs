mod common;

use common::*;
use proptest::prelude::*;
use sigtensor::exact::scalar::{frac, int, inv_factorial};
use sigtensor::path::{
    chen_concat, iterated_integral_entry, pwl_signature, segment_level, segment_signature,
    time_series_to_path,
};
use sigtensor::symmetry::is_symmetric;
use sigtensor::{Path, Tensor, Word};

fn concat(a: &Path, b: &Path) -> Path {
    Path::new(a.dim(), [a.increments(), b.increments()].concat()).unwrap()
}

fn same_dim_paths(n: usize) -> impl Strategy<Value = Vec<Path>> {
    (1usize..=3).prop_flat_map(move |d| {
        prop::collection::vec(
            vectors_strategy(1..=2, d, 3).prop_map(move |inc| Path::new(d, inc).unwrap()),
            n,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chen_matches_iterated_integrals(p in path_strategy(3, 3)) {
        let sig = pwl_signature(&p, 3);
        for k in 0..=3 {
            for w in Word::all(p.dim(), k) {
                prop_assert_eq!(sig.entry(&w).unwrap(), &iterated_integral_entry(&p, &w).unwrap());
            }
        }
    }

    #[test]
    fn chen_product_is_associative(ps in same_dim_paths(3)) {
        let s: Vec<_> = ps.iter().map(|p| pwl_signature(p, 4)).collect();
        let left = chen_concat(&chen_concat(&s[0], &s[1]).unwrap(), &s[2]).unwrap();
        let right = chen_concat(&s[0], &chen_concat(&s[1], &s[2]).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, pwl_signature(&concat(&concat(&ps[0], &ps[1]), &ps[2]), 4));
    }

    #[test]
    fn segment_levels_are_rank_one_and_symmetric(v in prop::collection::vec(-3i64..=3, 1..=3), k in 1usize..=4) {
        let v = ints(&v);
        let s = segment_signature(&v, 4);
        let level = s.level(k);
        prop_assert!(is_symmetric(level));
        if k >= 2 {
            for r in 1..k {
                let rows: Vec<usize> = (0..r).collect();
                prop_assert!(level.flatten(&rows).unwrap().rank() <= 1);
            }
        }
        // v^k/k! entry by entry
        for w in Word::all(v.len(), k) {
            let expected: sigtensor::Scalar = w.letters().iter().map(|&i| v[i - 1].clone()).product::<sigtensor::Scalar>()
                * inv_factorial(k);
            prop_assert_eq!(s.entry(&w).unwrap(), &expected);
        }
    }

    #[test]
    fn signatures_are_gl_equivariant(
        (p, a) in (1usize..=3).prop_flat_map(|d| (
            vectors_strategy(1..=3, d, 3).prop_map(move |inc| Path::new(d, inc).unwrap()),
            invertible_strategy(d),
        ))
    ) {
        let moved = pwl_signature(&p.transform(&a).unwrap(), 3);
        let sig = pwl_signature(&p, 3);
        for k in 1..=3 {
            prop_assert_eq!(moved.level(k), &sig.level(k).gl_act(&a).unwrap());
        }
    }

    #[test]
    fn first_level_is_total_increment(p in path_strategy(4, 5)) {
        let sig = pwl_signature(&p, 2);
        let total: Vec<_> = (0..p.dim())
            .map(|i| p.increments().iter().map(|v| v[i].clone()).sum())
            .collect();
        prop_assert_eq!(sig.level(1), &Tensor::from_vector(&total));
        prop_assert_eq!(sig.constant(), &int(1));
        // the symmetric part of level 2 is half the square of level 1
        let sym = &(sig.level(2) + &sig.level(2).permute_modes(&[1, 0]).unwrap()).scale(&frac(1, 2));
        prop_assert_eq!(sym, &segment_level(&total, 2));
    }
}

#[test]
fn time_series_become_increments() {
    let samples = vec![ints(&[0, 0]), ints(&[1, 2]), ints(&[1, 5])];
    let p = time_series_to_path(&samples).unwrap();
    assert_eq!(p.increments(), &[ints(&[1, 2]), ints(&[0, 3])]);
    assert!(time_series_to_path(&samples[..1]).is_err());
    assert!(time_series_to_path(&[ints(&[0, 0]), ints(&[1])]).is_err());
}

#[test]
fn unit_square_has_area_one() {
    // counterclockwise around the unit square: the Lévy area is 1
    let p = Path::from_integers(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]).unwrap();
    let sig = pwl_signature(&p, 2);
    let (a, b) = (
        sig.entry(&"12".parse().unwrap()).unwrap(),
        sig.entry(&"21".parse().unwrap()).unwrap(),
    );
    assert_eq!(a - b, int(2));
    assert!(sig.level(1).is_zero());
}
