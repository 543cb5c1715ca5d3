//! Seeded random inputs and a reproducible property-check battery.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exact::scalar::int;
use crate::exact::{Matrix, Scalar, Subspace, Tensor};
use crate::lie::{exp_log_signature, f_lambda, log_signature, lyndon_basis, LogSignature, Partition};
use crate::path::{iterated_integral_entry, pwl_signature, segment_signature, Path};
use crate::rank::{certify_rank, decompose_path, decompose_s_k_alpha, rank_bound_formula, s_k_alpha};
use crate::symmetry::{
    divisor_propagation_check, hyperplane_recovery, skew_impossibility_check,
    verify_partial_symmetry_consequences,
};
use crate::words::{check_shuffle_identity, Word};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer entries drawn uniformly from `[-range, range]`.
pub fn random_int_vector(rng: &mut impl Rng, d: usize, range: i64) -> Vec<Scalar> {
    (0..d).map(|_| int(rng.random_range(-range..=range))).collect()
}

pub fn random_vectors(rng: &mut impl Rng, m: usize, d: usize, range: i64) -> Vec<Vec<Scalar>> {
    (0..m).map(|_| random_int_vector(rng, d, range)).collect()
}

pub fn random_path(rng: &mut impl Rng, d: usize, m: usize, range: i64) -> Path {
    Path::new(d, random_vectors(rng, m, d, range)).expect("d ≥ 1 and m ≥ 1")
}

/// A path inside an affine hyperplane `{x_1 = c}` whose increments span
/// `{x_1 = 0}`, with no zero increment and no segment immediately retraced
/// by the next one (a retrace would be invisible to the signature).
/// Needs `d ≥ 2` and `m ≥ d − 1`.
pub fn random_hyperplane_path(rng: &mut impl Rng, d: usize, m: usize, range: i64) -> Path {
    assert!(
        d >= 2 && m + 1 >= d,
        "increments must be able to span the hyperplane"
    );
    loop {
        let inc: Vec<Vec<Scalar>> = (0..m)
            .map(|_| {
                let mut v = random_int_vector(rng, d, range);
                v[0] = int(0);
                v
            })
            .collect();
        if Subspace::span(d, &inc).expect("consistent lengths").dim() == d - 1 && !backtracks(&inc) {
            return Path::new(d, inc).expect("nonempty");
        }
    }
}

fn backtracks(inc: &[Vec<Scalar>]) -> bool {
    let is_zero = |v: &[Scalar]| v.iter().all(|x| x == &int(0));
    inc.iter().any(|v| is_zero(v))
        || inc.windows(2).any(|w| {
            let dot: Scalar = w[0].iter().zip(&w[1]).map(|(a, b)| a * b).sum();
            let pair = Matrix::from_rows(w.to_vec()).expect("same length");
            pair.rank() == 1 && dot < int(0)
        })
}

/// A nonzero element of `Lie^k(Q^d)` as an integer combination of bracketed Lyndon words.
pub fn random_lie_element(rng: &mut impl Rng, d: usize, k: usize, range: i64) -> Tensor {
    let basis = lyndon_basis(d, k);
    assert!(!basis.is_empty(), "Lie^{k}(Q^{d}) is zero");
    loop {
        let mut t = Tensor::zeros(k, d);
        for b in &basis {
            let c = int(rng.random_range(-range..=range));
            t.add_scaled(&c, b).expect("same shape");
        }
        if !t.is_zero() {
            return t;
        }
    }
}

/// Each level is zero with probability 1/4, otherwise a random Lie element.
pub fn random_log_signature(rng: &mut impl Rng, d: usize, max_level: usize, range: i64) -> LogSignature {
    let levels = (1..=max_level)
        .map(|k| {
            if rng.random_range(0..4) == 0 || lyndon_basis(d, k).is_empty() {
                Tensor::zeros(k, d)
            } else {
                random_lie_element(rng, d, k, range)
            }
        })
        .collect();
    LogSignature::new(d, levels).expect("levels are Lie elements")
}

pub fn random_skew_matrix(rng: &mut impl Rng, d: usize, range: i64) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in i + 1..d {
            let x = int(rng.random_range(-range..=range));
            m.set(i, j, x.clone());
            m.set(j, i, -x);
        }
    }
    m
}

pub fn random_invertible_matrix(rng: &mut impl Rng, d: usize, range: i64) -> Matrix {
    loop {
        let rows = random_vectors(rng, d, d, range);
        let m = Matrix::from_rows(rows).expect("square");
        if m.rank() == d {
            return m;
        }
    }
}

/// A log-signature whose nonzero levels are exactly the distinct parts of `lam`.
pub fn thrall_witness(rng: &mut impl Rng, lam: &Partition, d: usize, range: i64) -> LogSignature {
    let k = lam.sum();
    let levels = (1..=k)
        .map(|i| {
            if lam.multiplicity(i) > 0 {
                random_lie_element(rng, d, i, range)
            } else {
                Tensor::zeros(i, d)
            }
        })
        .collect();
    LogSignature::new(d, levels).expect("levels are Lie elements")
}

/// Whether level `|λ|` of `exp(ℓ)` lies in the Thrall module `W_λ`, i.e. every
/// other component `f_μ(ℓ)` vanishes.
pub fn in_thrall_module(l: &LogSignature, lam: &Partition) -> Result<bool> {
    for mu in Partition::all(lam.sum()) {
        if &mu != lam && !f_lambda(l, &mu)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub size: usize,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

struct Check {
    outcome: CheckOutcome,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            outcome: CheckOutcome {
                name: name.to_string(),
                trials: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn record(&mut self, ok: Result<bool>, context: impl FnOnce() -> String) {
        self.outcome.trials += 1;
        let failure = match ok {
            Ok(true) => None,
            Ok(false) => Some(context()),
            Err(e) => Some(format!("{}: {e}", context())),
        };
        if let Some(msg) = failure {
            self.outcome.failures += 1;
            self.outcome.first_failure.get_or_insert(msg);
        }
    }
}

/// Run the property battery with `size` trials per check. Identical
/// `(seed, size)` give identical reports.
pub fn verify(seed: u64, size: usize) -> VerifyReport {
    let mut rng = seeded_rng(seed);
    let mut checks = Vec::new();

    let mut oracle = Check::new("signature_matches_iterated_integrals");
    let mut shuffle = Check::new("shuffle_identity");
    let mut gl = Check::new("gl_equivariance");
    let mut certs = Check::new("certificate_lower_le_upper");
    for i in 0..size {
        let d = rng.random_range(1..=3);
        let m = rng.random_range(1..=4);
        let p = random_path(&mut rng, d, m, 3);
        let sig = pwl_signature(&p, 4);
        oracle.record(
            (|| {
                for k in 1..=4 {
                    for w in Word::all(d, k) {
                        if sig.entry(&w)? != &iterated_integral_entry(&p, &w)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            })(),
            || format!("path #{i}"),
        );
        shuffle.record(check_shuffle_identity(&sig, 4).map(|v| v.holds()), || {
            format!("path #{i}")
        });
        let a = random_invertible_matrix(&mut rng, d, 2);
        gl.record(
            (|| {
                let moved = pwl_signature(&p.transform(&a)?, 3);
                Ok(moved.level(3) == &sig.level(3).gl_act(&a)?)
            })(),
            || format!("path #{i}"),
        );
        certs.record(
            (|| {
                let k = rng.random_range(2..=4);
                let c = certify_rank(sig.level(k), &decompose_path(&p, k)?)?;
                Ok(c.lower <= c.upper)
            })(),
            || format!("path #{i}"),
        );
    }
    checks.extend([oracle, shuffle, gl, certs].map(|c| c.outcome));

    let mut decomp = Check::new("s_k_alpha_decomposition");
    for i in 0..size {
        let d = rng.random_range(1..=3);
        let m = rng.random_range(1..=5);
        let k = rng.random_range(2..=4);
        let alpha = rng.random_range(0..=2);
        let vs = random_vectors(&mut rng, m, d, 3);
        decomp.record(
            (|| {
                let dec = decompose_s_k_alpha(&vs, k, alpha)?;
                Ok(
                    dec.realize() == s_k_alpha(&vs, k, alpha)?
                        && dec.len() as u64 <= rank_bound_formula(k, m),
                )
            })(),
            || format!("trial #{i}: m={m} k={k} alpha={alpha}"),
        );
    }
    checks.push(decomp.outcome);

    let mut roundtrip = Check::new("log_exp_round_trip");
    let mut thrall = Check::new("thrall_components_sum_to_level");
    let mut skew = Check::new("no_skew_signatures");
    let mut partial = Check::new("partial_symmetry_consequences");
    for i in 0..size {
        let d = rng.random_range(2..=3);
        let l = random_log_signature(&mut rng, d, 4, 2);
        let sig = exp_log_signature(&l);
        roundtrip.record(log_signature(&sig).map(|back| back == l), || {
            format!("trial #{i}")
        });
        thrall.record(
            (|| {
                for k in 1..=4 {
                    let mut acc = Tensor::zeros(k, d);
                    for lam in Partition::all(k) {
                        acc = &acc + &f_lambda(&l, &lam)?;
                    }
                    if &acc != sig.level(k) {
                        return Ok(false);
                    }
                }
                Ok(true)
            })(),
            || format!("trial #{i}"),
        );
        skew.record(
            (3..=4).try_fold(true, |ok, k| Ok(ok && skew_impossibility_check(&l, k)?)),
            || format!("trial #{i}"),
        );
        partial.record(
            verify_partial_symmetry_consequences(&l, 4).map(|r| r.passed),
            || format!("trial #{i}"),
        );
    }
    checks.extend([roundtrip, thrall, skew, partial].map(|c| c.outcome));

    let mut recovery = Check::new("hyperplane_recovery");
    let mut divisors = Check::new("divisor_propagation");
    for i in 0..size {
        let d = rng.random_range(2..=4);
        let m = rng.random_range(d - 1..=4);
        let p = random_hyperplane_path(&mut rng, d, m, 3);
        let sig = pwl_signature(&p, 4);
        let w = Subspace::coordinate_hyperplane(d, 0);
        recovery.record(hyperplane_recovery(&sig).map(|r| r.as_ref() == Some(&w)), || {
            format!("trial #{i}")
        });
        divisors.record(divisor_propagation_check(&sig, 4, &w), || format!("trial #{i}"));
    }
    checks.extend([recovery, divisors].map(|c| c.outcome));

    let mut segments = Check::new("segment_levels_are_symmetric_powers");
    for i in 0..size {
        let d = rng.random_range(1..=3);
        let v = random_int_vector(&mut rng, d, 3);
        let s = segment_signature(&v, 4);
        segments.record(
            Ok((1..=4).all(|k| crate::symmetry::is_symmetric(s.level(k)))),
            || format!("trial #{i}"),
        );
    }
    checks.push(segments.outcome);

    let passed = checks.iter().all(|c| c.failures == 0);
    VerifyReport {
        seed,
        size,
        passed,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::is_lie_element;

    #[test]
    fn generators_are_reproducible() {
        let a = random_path(&mut seeded_rng(7), 3, 4, 3);
        let b = random_path(&mut seeded_rng(7), 3, 4, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn generated_objects_have_their_shape() {
        let mut rng = seeded_rng(1);
        let t = random_lie_element(&mut rng, 2, 4, 2);
        assert!(is_lie_element(&t).unwrap() && !t.is_zero());
        let s = random_skew_matrix(&mut rng, 3, 2);
        assert_eq!(s.transpose(), Matrix::from_fn(3, 3, |i, j| -s.get(i, j).clone()));
        assert_eq!(random_invertible_matrix(&mut rng, 3, 1).rank(), 3);
        let p = random_hyperplane_path(&mut rng, 4, 3, 2);
        assert!(p.increments().iter().all(|v| v[0] == int(0)));
    }

    #[test]
    fn thrall_witness_support() {
        let mut rng = seeded_rng(3);
        let lam = Partition::new(vec![2, 2]).unwrap();
        let l = thrall_witness(&mut rng, &lam, 2, 2);
        assert!(l.level(1).is_zero() && !l.level(2).is_zero());
        assert!(in_thrall_module(&l, &lam).unwrap());
    }

    #[test]
    fn verify_is_deterministic_and_passes() {
        let a = verify(11, 3);
        assert!(a.passed, "{a:?}");
        assert_eq!(a, verify(11, 3));
    }
}
