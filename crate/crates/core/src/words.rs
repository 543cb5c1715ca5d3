//! Words over `{1..d}`, integer word sums, and the shuffle product.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::path::TruncatedSignature;

/// A word; letters are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l == 0) {
            return Err(Error::LetterOutOfRange { letter: bad, dim: 0 });
        }
        Ok(Self(letters))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&self, letter: usize) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l > dim) {
            Some(&letter) => Err(Error::LetterOutOfRange { letter, dim }),
            None => Ok(()),
        }
    }

    /// 0-based tensor index of this word.
    pub fn index(&self) -> Vec<usize> {
        self.0.iter().map(|l| l - 1).collect()
    }

    /// All words of length `len` over `{1..dim}` in lexicographic order.
    pub fn all(dim: usize, len: usize) -> impl Iterator<Item = Word> {
        let total = dim.pow(len as u32);
        (0..total).map(move |mut off| {
            let mut letters = vec![0; len];
            for slot in letters.iter_mut().rev() {
                *slot = off % dim + 1;
                off /= dim;
            }
            Word(letters)
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l <= 9) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Digit strings (`"1324"`) for alphabets up to 9, comma lists (`"1,10,2"`) otherwise.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let letters: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad letter {p:?} in word {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad letter {c:?} in word {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Word::new(letters)
    }
}

/// A homogeneous formal integer combination of words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WordSum {
    terms: BTreeMap<Word, BigInt>,
    degree: Option<usize>,
}

impl WordSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(w: Word) -> Self {
        let mut s = Self::new();
        s.add_term(w, BigInt::one()).expect("single word is homogeneous");
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, BigInt)>) -> Result<Self> {
        let mut s = Self::new();
        for (w, c) in terms {
            s.add_term(w, c)?;
        }
        Ok(s)
    }

    /// Add `c·w`; rejects words whose length differs from the existing terms.
    pub fn add_term(&mut self, w: Word, c: BigInt) -> Result<()> {
        match self.degree {
            Some(deg) if deg != w.len() => {
                return Err(Error::Precondition(format!(
                    "word sum is homogeneous of degree {deg}, got word of length {}",
                    w.len()
                )))
            }
            _ => self.degree = Some(w.len()),
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_mass(&self) -> BigInt {
        self.terms.values().sum()
    }

    fn append_letter(&self, letter: usize) -> WordSum {
        WordSum {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.push(letter), c.clone()))
                .collect(),
            degree: self.degree.map(|d| d + 1),
        }
    }

    fn merge(mut self, other: WordSum) -> WordSum {
        for (w, c) in other.terms {
            self.add_term(w, c).expect("shuffle terms are homogeneous");
        }
        self
    }
}

impl Serialize for WordSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            // Coefficients fit comfortably in i64 for any word pair we can tabulate.
            let n: i64 = c.try_into().map_err(serde::ser::Error::custom)?;
            map.serialize_entry(&w.to_string(), &n)?;
        }
        map.end()
    }
}

/// The shuffle product, by the last-letter recursion
/// `(v·i) ⧢ (w·j) = (v ⧢ (w·j))·i + ((v·i) ⧢ w)·j`.
pub fn shuffle(v: &Word, w: &Word) -> WordSum {
    if v.is_empty() {
        return WordSum::single(w.clone());
    }
    if w.is_empty() {
        return WordSum::single(v.clone());
    }
    let (vi, i) = split_last(v);
    let (wj, j) = split_last(w);
    let left = shuffle(&vi, w).append_letter(i);
    let right = shuffle(v, &wj).append_letter(j);
    left.merge(right)
}

fn split_last(w: &Word) -> (Word, usize) {
    let (last, init) = w.0.split_last().expect("nonempty word");
    (Word(init.to_vec()), *last)
}

/// `σ_ws = Σ coeff · σ_word`.
pub fn eval(sig: &TruncatedSignature, ws: &WordSum) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (w, c) in ws.terms() {
        let x = sig.entry(w)?;
        acc += x * Scalar::from_integer(c.clone());
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ShuffleVerdict {
    Holds,
    Counterexample { v: String, w: String },
}

impl ShuffleVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ShuffleVerdict::Holds)
    }
}

/// Check `σ_v·σ_w == σ_{v⧢w}` for all nonempty words with `|v|+|w| ≤ max_level`.
///
/// Pairs are scanned by total length, then `|v|`, then lexicographically in
/// `v` and `w`; the first failure is reported. A constant term other than 1
/// is reported as the pair of empty words.
pub fn check_shuffle_identity(sig: &TruncatedSignature, max_level: usize) -> Result<ShuffleVerdict> {
    if max_level > sig.max_level() {
        return Err(Error::LevelExceeded {
            needed: max_level,
            available: sig.max_level(),
        });
    }
    if !sig.level(0).entries()[0].is_one() {
        return Ok(ShuffleVerdict::Counterexample {
            v: String::new(),
            w: String::new(),
        });
    }
    let d = sig.dim();
    for total in 2..=max_level {
        for len_v in 1..total {
            let len_w = total - len_v;
            for v in Word::all(d, len_v) {
                let sv = sig.entry(&v)?;
                for w in Word::all(d, len_w) {
                    let lhs = sv * sig.entry(&w)?;
                    let rhs = eval(sig, &shuffle(&v, &w))?;
                    if lhs != rhs {
                        return Ok(ShuffleVerdict::Counterexample {
                            v: v.to_string(),
                            w: w.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(ShuffleVerdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{frac, int};
    use crate::exact::Tensor;
    use crate::path::segment_signature;
    use num_integer::binomial;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn shuffle_of_12_and_34() {
        let s = shuffle(&w("12"), &w("34"));
        let expected: Vec<&str> = vec!["1234", "1324", "1342", "3124", "3142", "3412"];
        assert_eq!(s.len(), 6);
        for e in expected {
            assert_eq!(s.coefficient(&w(e)), BigInt::one(), "{e}");
        }
    }

    #[test]
    fn empty_word_is_unit() {
        assert_eq!(shuffle(&Word::empty(), &w("213")), WordSum::single(w("213")));
        assert_eq!(shuffle(&w("213"), &Word::empty()), WordSum::single(w("213")));
    }

    #[test]
    fn one_shuffle_one() {
        let s = shuffle(&w("1"), &w("1"));
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&w("11")), BigInt::from(2));
    }

    #[test]
    fn homogeneity_is_enforced() {
        let mut s = WordSum::single(w("12"));
        assert!(s.add_term(w("1"), BigInt::one()).is_err());
        s.add_term(w("12"), BigInt::from(-1)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn word_parsing() {
        assert_eq!(w("1324").letters(), &[1, 3, 2, 4]);
        assert_eq!(w("1,10,2").letters(), &[1, 10, 2]);
        assert_eq!(w("1,10,2").to_string(), "1,10,2");
        assert!("1a".parse::<Word>().is_err());
        assert!("10".parse::<Word>().is_err());
    }

    #[test]
    fn eval_examples() {
        let sig = segment_signature(&[int(1), int(0)], 3);
        assert_eq!(eval(&sig, &WordSum::single(Word::empty())).unwrap(), int(1));
        assert_eq!(eval(&sig, &WordSum::single(w("11"))).unwrap(), frac(1, 2));
        assert!(matches!(
            eval(&sig, &WordSum::single(w("1111"))),
            Err(Error::LevelExceeded { .. })
        ));
    }

    #[test]
    fn shuffle_identity_detects_violation() {
        let mut levels = vec![Tensor::scalar(int(1), 1)];
        levels.push(Tensor::new(1, 1, vec![int(1)]).unwrap());
        levels.push(Tensor::zeros(2, 1));
        let sig = TruncatedSignature::new(1, levels).unwrap();
        assert_eq!(
            check_shuffle_identity(&sig, 2).unwrap(),
            ShuffleVerdict::Counterexample {
                v: "1".into(),
                w: "1".into()
            }
        );
    }

    #[test]
    fn trivial_element_satisfies_identity() {
        let sig = TruncatedSignature::trivial(3, 4);
        assert!(check_shuffle_identity(&sig, 4).unwrap().holds());
        assert!(check_shuffle_identity(&sig, 5).is_err());
    }

    #[test]
    fn coefficient_mass_matches_binomial() {
        for d in 1..=3 {
            for a in 0..=4 {
                for b in 0..=4 {
                    let v = Word::all(d, a).last().unwrap();
                    let u = Word::all(d, b).next().unwrap();
                    let s = shuffle(&v, &u);
                    assert_eq!(s.total_mass(), BigInt::from(binomial(a + b, a)));
                    assert_eq!(s.degree(), Some(a + b));
                }
            }
        }
    }

    #[test]
    fn serializes_as_object() {
        let s = serde_json::to_string(&shuffle(&w("1"), &w("2"))).unwrap();
        assert_eq!(s, r#"{"12":1,"21":1}"#);
    }
}
