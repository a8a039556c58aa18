//! Words over single-character letters and the distance measure on pairs of words.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use serde::{Serialize, Serializer};

/// A finite word. The empty word is `Word::empty()`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<char>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<char>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn push(&mut self, letter: char) {
        self.0.push(letter);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    /// `self` repeated `times` times.
    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn into_letters(self) -> Vec<char> {
        self.0
    }
}

impl Deref for Word {
    type Target = [char];

    fn deref(&self) -> &[char] {
        &self.0
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.chars().collect())
    }
}

impl From<String> for Word {
    fn from(s: String) -> Self {
        Word::from(s.as_str())
    }
}

impl From<char> for Word {
    fn from(c: char) -> Self {
        Word(vec![c])
    }
}

impl FromIterator<char> for Word {
    fn from_iter<I: IntoIterator<Item = char>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinite,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(v) => Some(v),
            ExtNat::Infinite => None,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
            (ExtNat::Finite(_), ExtNat::Infinite) => Ordering::Less,
            (ExtNat::Infinite, ExtNat::Finite(_)) => Ordering::Greater,
            (ExtNat::Infinite, ExtNat::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinite => write!(f, "INF"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(v) => serializer.serialize_u64(*v),
            ExtNat::Infinite => serializer.serialize_none(),
        }
    }
}

/// Number of mismatching positions of two equal-length words, infinite otherwise.
pub fn hamming_distance(u: &[char], v: &[char]) -> ExtNat {
    if u.len() != v.len() {
        return ExtNat::Infinite;
    }
    ExtNat::Finite(u.iter().zip(v).filter(|(a, b)| a != b).count() as u64)
}

/// Whether `u` is conjugate to `v` by `n`: the words are rotations of each other and every
/// pair of positions `(i, j)` with `j - i ≡ n (mod |u|)` carries equal letters.
pub fn conjugate_by(u: &[char], v: &[char], n: i64) -> bool {
    if u.len() != v.len() {
        return false;
    }
    let len = u.len();
    if len == 0 {
        return true;
    }
    let offset = n.rem_euclid(len as i64) as usize;
    // Each i has exactly one partner j = i + offset (mod len). Agreement on all of them makes
    // v a rotation of u, so conjugacy needs no separate check.
    (0..len).all(|i| u[i] == v[(i + offset) % len])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    /// Direct transcription of the definition over all position pairs.
    fn conjugate_by_pairs(u: &[char], v: &[char], n: i64) -> bool {
        if u.len() != v.len() {
            return false;
        }
        let len = u.len() as i64;
        if len == 0 {
            return true;
        }
        let rotation = (0..len as usize).any(|k| {
            let (a, b) = u.split_at(k);
            let mut zw = b.to_vec();
            zw.extend_from_slice(a);
            zw == v
        });
        rotation
            && (0..len).all(|i| {
                (0..len).all(|j| (j - i - n).rem_euclid(len) != 0 || u[i as usize] == v[j as usize])
            })
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&w("abc"), &w("abc")), ExtNat::Finite(0));
        assert_eq!(
            hamming_distance(&w("1001110000"), &w("0110001111")),
            ExtNat::Finite(10)
        );
        assert_eq!(hamming_distance(&w("ab"), &w("abc")), ExtNat::Infinite);
        assert_eq!(hamming_distance(&w(""), &w("")), ExtNat::Finite(0));
    }

    #[test]
    fn conjugate_examples() {
        assert!(conjugate_by(&w("ab"), &w("ba"), 1));
        assert!(conjugate_by(&w("ab"), &w("ab"), 0));
        assert!(!conjugate_by(&w("ab"), &w("ab"), 1));
        assert!(conjugate_by(&w(""), &w(""), 7));
        assert!(!conjugate_by(&w("a"), &w("ab"), 0));
        for (u, v, n) in [("ab", "ba", 1), ("ab", "ab", 0), ("ab", "ab", 1)] {
            assert_eq!(conjugate_by(&w(u), &w(v), n), conjugate_by_pairs(&w(u), &w(v), n));
        }
    }

    #[test]
    fn negative_offsets_wrap() {
        assert!(conjugate_by(&w("abc"), &w("cab"), 1));
        assert!(conjugate_by(&w("abc"), &w("cab"), -2));
        assert!(conjugate_by(&w("abc"), &w("cab"), 4));
    }

    #[test]
    fn ext_nat_order() {
        assert!(ExtNat::Finite(u64::MAX) < ExtNat::Infinite);
        assert!(ExtNat::Finite(3) > ExtNat::Finite(2));
        assert_eq!(ExtNat::Infinite.to_string(), "INF");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = Vec<char>> {
            prop::collection::vec(prop::sample::select(vec!['a', 'b', 'c']), 0..7)
        }

        proptest! {
            #[test]
            fn hamming_symmetric(u in word(), v in word()) {
                prop_assert_eq!(hamming_distance(&u, &v), hamming_distance(&v, &u));
                prop_assert_eq!(hamming_distance(&u, &u), ExtNat::Finite(0));
            }

            #[test]
            fn conjugacy_matches_pairwise_definition(u in word(), v in word(), n in -8i64..8) {
                prop_assert_eq!(conjugate_by(&u, &v, n), conjugate_by_pairs(&u, &v, n));
            }

            #[test]
            fn conjugacy_symmetric(u in word(), v in word(), n in -8i64..8) {
                prop_assume!(!u.is_empty());
                let len = u.len() as i64;
                prop_assert_eq!(
                    conjugate_by(&u, &v, n),
                    conjugate_by(&v, &u, (len - n).rem_euclid(len))
                );
            }
        }
    }
}
