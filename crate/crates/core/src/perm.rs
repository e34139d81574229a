//! Permutations of {1, ..., n} in one-line notation.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A permutation w of {1, ..., n}. Internally 0-indexed: `images[i]` is
/// w(i+1) - 1. Ordering and hashing follow the one-line word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// The longest element (the reversal n, n-1, ..., 1).
    pub fn longest(n: usize) -> Self {
        Permutation { images: (0..n).rev().collect() }
    }

    /// From 1-indexed one-line notation, e.g. [3, 2, 1, 4].
    pub fn from_one_line(word: &[usize]) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &v in word {
            if v < 1 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!("{word:?}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images: word.iter().map(|&v| v - 1).collect() })
    }

    /// From 0-indexed images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses "3214" (single digits) or "3,2,1,4". Words of length 10 or more
    /// must use the comma form.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPermutation(s.to_string());
        let word: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        if word.is_empty() {
            return Err(bad());
        }
        Self::from_one_line(&word)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// w(i) in 0-indexed coordinates.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// 1-indexed one-line word.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// Function composition: (self.compose(other))(i) = self(other(i)).
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Inversion positions: 0-indexed pairs (i, j) with i < j and w(i) > w(j).
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut len = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    len += 1;
                }
            }
        }
        len
    }

    /// All permutations of {1, ..., n} in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        loop {
            out.push(Permutation { images: cur.clone() });
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

/// In-place lexicographic successor; false once `a` is the last word.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    /// One-line word: digits run together for n <= 9, comma-separated beyond.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = self.one_line();
        if self.n() <= 9 {
            for v in word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = word.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["123", "321", "3214", "213"] {
            assert_eq!(Permutation::parse(s).unwrap().to_string(), s);
        }
        let long = Permutation::longest(12);
        assert_eq!(long.to_string(), "12,11,10,9,8,7,6,5,4,3,2,1");
        assert_eq!(Permutation::parse(&long.to_string()).unwrap(), long);
    }

    #[test]
    fn rejects_non_bijections() {
        for s in ["122", "134", "0", "13", "a21", ""] {
            assert!(Permutation::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn length_counts_inversions() {
        assert_eq!(Permutation::parse("123").unwrap().length(), 0);
        assert_eq!(Permutation::parse("213").unwrap().length(), 1);
        assert_eq!(Permutation::parse("132").unwrap().length(), 1);
        assert_eq!(Permutation::parse("231").unwrap().length(), 2);
        assert_eq!(Permutation::parse("312").unwrap().length(), 2);
        assert_eq!(Permutation::parse("321").unwrap().length(), 3);
        assert_eq!(Permutation::longest(6).length(), 15);
        for w in Permutation::all(5) {
            assert_eq!(w.length(), w.inversions().len());
        }
    }

    #[test]
    fn inverse_and_compose() {
        for w in Permutation::all(5) {
            let winv = w.inverse();
            assert!(w.compose(&winv).is_identity());
            assert!(winv.compose(&w).is_identity());
            assert_eq!(w.length(), winv.length());
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        for pair in all.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        assert_eq!(all[0], Permutation::identity(4));
        assert_eq!(all[23], Permutation::longest(4));
    }
}
