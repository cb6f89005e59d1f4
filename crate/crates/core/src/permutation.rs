//! Permutations in one-line notation.
//!
//! Positions and values are 1-based throughout the public API, so `w.at(1)`
//! is the first letter of the word. Transpositions act on the right: applying
//! the link `(i, j)` swaps the letters in positions `i` and `j`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::statistics::ExponentVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("empty permutation text")]
    Empty,
    #[error("malformed permutation text {0:?}")]
    Malformed(String),
    #[error("value {value} is out of range for a permutation of size {n}")]
    OutOfRange { value: usize, n: usize },
    #[error("value {0} appears more than once")]
    Repeated(usize),
    #[error("permutation size must be positive")]
    ZeroSize,
    #[error("link ({i},{j}) is not valid in S_{n}")]
    BadLink { i: usize, j: usize, n: usize },
    #[error("position {pos} is out of range for S_{n}")]
    BadPosition { pos: usize, n: usize },
}

/// A pair of positions `(i, j)` with `i < j`, naming the transposition `t_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Link {
    pub i: usize,
    pub j: usize,
}

impl Link {
    /// Panics if `i >= j`; use [`Link::try_new`] for untrusted input.
    pub fn new(i: usize, j: usize) -> Self {
        assert!(i < j, "link ({i},{j}) must satisfy i < j");
        Link { i, j }
    }

    pub fn try_new(i: usize, j: usize) -> Option<Self> {
        (i >= 1 && i < j).then_some(Link { i, j })
    }

    /// The image of a position under the transposition `t_ij`.
    pub fn transpose(&self, p: usize) -> usize {
        if p == self.i {
            self.j
        } else if p == self.j {
            self.i
        } else {
            p
        }
    }
}

impl From<Link> for [usize; 2] {
    fn from(l: Link) -> Self {
        [l.i, l.j]
    }
}

impl TryFrom<[usize; 2]> for Link {
    type Error = String;

    fn try_from([i, j]: [usize; 2]) -> Result<Self, Self::Error> {
        Link::try_new(i, j).ok_or_else(|| format!("invalid link ({i},{j})"))
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// A box of a Rothe diagram, in matrix coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

/// A permutation of `[n]` stored as its one-line word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self, PermutationError> {
        let n = word.len();
        if n == 0 {
            return Err(PermutationError::ZeroSize);
        }
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n {
                return Err(PermutationError::OutOfRange { value: v, n });
            }
            if seen[v] {
                return Err(PermutationError::Repeated(v));
            }
            seen[v] = true;
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "S_0 is not supported");
        Permutation {
            word: (1..=n).collect(),
        }
    }

    /// The longest element `n n-1 ... 1` of `S_n`.
    pub fn longest(n: usize) -> Result<Self, PermutationError> {
        if n == 0 {
            return Err(PermutationError::ZeroSize);
        }
        Ok(Permutation {
            word: (1..=n).rev().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// `w(pos)`, 1-based.
    pub fn at(&self, pos: usize) -> usize {
        self.word[pos - 1]
    }

    /// `w^{-1}(value)`, 1-based.
    pub fn position_of(&self, value: usize) -> usize {
        self.word.iter().position(|&v| v == value).expect("value in range") + 1
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (p, &v) in self.word.iter().enumerate() {
            inv[v - 1] = p + 1;
        }
        Permutation { word: inv }
    }

    pub fn is_longest(&self) -> bool {
        self.first_unsettled().is_none()
    }

    /// The smallest position `k` with `w(k) != n + 1 - k`, or `None` for `w0`.
    pub fn first_unsettled(&self) -> Option<usize> {
        let n = self.n();
        (1..=n).find(|&k| self.at(k) != n + 1 - k)
    }

    fn check_link(&self, l: Link) -> Result<(), PermutationError> {
        if l.i == 0 || l.i >= l.j || l.j > self.n() {
            return Err(PermutationError::BadLink {
                i: l.i,
                j: l.j,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// `w * t_ij`: the letters in positions `i` and `j` exchanged.
    pub fn apply_transposition(&self, l: Link) -> Result<Permutation, PermutationError> {
        self.check_link(l)?;
        Ok(self.swapped(l))
    }

    /// Unchecked version of [`Permutation::apply_transposition`] for links
    /// already known to be in range.
    pub(crate) fn swapped(&self, l: Link) -> Permutation {
        let mut word = self.word.clone();
        word.swap(l.i - 1, l.j - 1);
        Permutation { word }
    }

    /// `w * s_j`.
    pub fn swap_adjacent(&self, j: usize) -> Permutation {
        self.swapped(Link::new(j, j + 1))
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.word;
        (0..w.len())
            .map(|i| w[i + 1..].iter().filter(|&&v| v < w[i]).count())
            .sum()
    }

    pub fn rothe_diagram(&self) -> BTreeSet<Cell> {
        let n = self.n();
        let inv = self.inverse();
        let mut cells = BTreeSet::new();
        for row in 1..=n {
            for col in 1..=n {
                if self.at(row) > col && inv.at(col) > row {
                    cells.insert(Cell { row, col });
                }
            }
        }
        cells
    }

    pub fn lehmer_code(&self) -> ExponentVector {
        let w = &self.word;
        ExponentVector::from(
            (0..w.len())
                .map(|i| w[i + 1..].iter().filter(|&&v| v < w[i]).count() as u32)
                .collect::<Vec<_>>(),
        )
    }

    /// Whether `w ⋖ w t_ij` in Bruhat order. Out-of-range links are never covers.
    pub fn is_bruhat_cover(&self, l: Link) -> bool {
        if self.check_link(l).is_err() {
            return false;
        }
        let (lo, hi) = (self.at(l.i), self.at(l.j));
        lo < hi && (l.i + 1..l.j).all(|k| !(lo < self.at(k) && self.at(k) < hi))
    }

    /// Ascending positions `j > i` with `w ⋖ w t_ij`.
    pub fn cover_candidates(&self, i: usize) -> Vec<usize> {
        if i == 0 || i > self.n() {
            return Vec::new();
        }
        // Covers from i are the successive record-lows among values above w(i).
        let base = self.at(i);
        let mut ceiling = usize::MAX;
        let mut out = Vec::new();
        for j in i + 1..=self.n() {
            let v = self.at(j);
            if v > base && v < ceiling {
                out.push(j);
                ceiling = v;
            }
        }
        out
    }

    /// Ascents `j` with `w(j) < w(j+1)`, ascending.
    pub fn ascents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&j| self.at(j) < self.at(j + 1)).collect()
    }

    /// All of `S_n` in lexicographic order of one-line words.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some(Permutation::identity(n)),
        }
    }
}

/// Lexicographic iterator over `S_n`.
pub struct AllPermutations {
    next: Option<Permutation>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut w = current.word.clone();
        let n = w.len();
        if let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1]) {
            let j = (i + 1..n).rev().find(|&j| w[j] > w[i]).unwrap();
            w.swap(i, j);
            w[i + 1..].reverse();
            self.next = Some(Permutation { word: w });
        }
        Some(current)
    }
}

impl FromStr for Permutation {
    type Err = PermutationError;

    /// Accepts either a bare digit string (`"31452"`, only for `n <= 9`) or
    /// comma-separated values (`"10,2,1,..."`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PermutationError::Empty);
        }
        let word = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| PermutationError::Malformed(s.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?
        } else {
            if s.len() > 9 || !s.bytes().all(|b| (b'1'..=b'9').contains(&b)) {
                return Err(PermutationError::Malformed(s.to_string()));
            }
            s.bytes().map(|b| (b - b'0') as usize).collect()
        };
        Permutation::new(word)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for v in &self.word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(p("31452").word(), &[3, 1, 4, 5, 2]);
        assert_eq!(p("1").word(), &[1]);
        assert_eq!(p("2,5,6,3,4,1"), p("256341"));
        let big = p("10,2,1,3,4,5,6,7,8,9");
        assert_eq!(big.n(), 10);
        assert_eq!(big.to_string(), "10,2,1,3,4,5,6,7,8,9");
    }

    #[test]
    fn rejects_bad_text() {
        assert_eq!("".parse::<Permutation>(), Err(PermutationError::Empty));
        assert!(matches!(
            "3145".parse::<Permutation>(),
            Err(PermutationError::OutOfRange { value: 5, n: 4 })
        ));
        assert_eq!("3143".parse::<Permutation>(), Err(PermutationError::Repeated(3)));
        assert!(matches!("3a1".parse::<Permutation>(), Err(PermutationError::Malformed(_))));
        assert!(matches!("0123".parse::<Permutation>(), Err(PermutationError::Malformed(_))));
        // ten-letter digit strings are ambiguous and must use commas
        assert!(matches!(
            "1234567891".parse::<Permutation>(),
            Err(PermutationError::Malformed(_))
        ));
        assert!(matches!("1,,2".parse::<Permutation>(), Err(PermutationError::Malformed(_))));
    }

    #[test]
    fn longest_element() {
        assert_eq!(Permutation::longest(3).unwrap(), p("321"));
        assert_eq!(Permutation::longest(1).unwrap(), p("1"));
        assert_eq!(Permutation::longest(6).unwrap(), p("654321"));
        assert_eq!(Permutation::longest(0), Err(PermutationError::ZeroSize));
    }

    #[test]
    fn transpositions() {
        assert_eq!(p("256341").apply_transposition(Link::new(1, 4)).unwrap(), p("356241"));
        assert_eq!(
            Permutation::identity(4).apply_transposition(Link::new(1, 2)).unwrap(),
            p("2134")
        );
        assert_eq!(p("5721463").apply_transposition(Link::new(1, 6)).unwrap(), p("6721453"));
        assert!(p("123").apply_transposition(Link { i: 2, j: 4 }).is_err());
        assert!(p("123").apply_transposition(Link { i: 2, j: 2 }).is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(p("31452").length(), 4);
        assert_eq!(Permutation::identity(5).length(), 0);
        assert_eq!(Permutation::longest(6).unwrap().length(), 15);
    }

    #[test]
    fn rothe_diagrams() {
        let expected: BTreeSet<Cell> = [(1, 1), (1, 2), (3, 2), (4, 2)]
            .into_iter()
            .map(|(row, col)| Cell { row, col })
            .collect();
        assert_eq!(p("31452").rothe_diagram(), expected);
        assert!(Permutation::identity(4).rothe_diagram().is_empty());
        let staircase: BTreeSet<Cell> = (1..=4)
            .flat_map(|row| (1..=4).map(move |col| Cell { row, col }))
            .filter(|c| c.row + c.col <= 4)
            .collect();
        assert_eq!(p("4321").rothe_diagram(), staircase);
    }

    #[test]
    fn lehmer_codes() {
        assert_eq!(p("31452").lehmer_code().as_slice(), &[2, 0, 1, 1, 0]);
        assert_eq!(p("4321").lehmer_code().as_slice(), &[3, 2, 1, 0]);
        assert_eq!(p("5721463").lehmer_code().as_slice(), &[4, 5, 1, 0, 1, 1, 0]);
    }

    #[test]
    fn covers() {
        let w = p("31452");
        let covers: Vec<(usize, usize)> = (1..=5)
            .flat_map(|i| (i + 1..=5).map(move |j| (i, j)))
            .filter(|&(i, j)| w.is_bruhat_cover(Link::new(i, j)))
            .collect();
        assert_eq!(covers, vec![(1, 3), (2, 3), (2, 5), (3, 4)]);
        let w0 = Permutation::longest(5).unwrap();
        assert!((1..5).all(|i| (i + 1..=5).all(|j| !w0.is_bruhat_cover(Link::new(i, j)))));
        assert!(!p("256341").is_bruhat_cover(Link::new(1, 3)));
    }

    #[test]
    fn candidates() {
        assert_eq!(p("256341").cover_candidates(1), vec![2, 4]);
        assert_eq!(p("356241").cover_candidates(1), vec![2, 5]);
        let w0 = Permutation::longest(6).unwrap();
        assert!((1..6).all(|i| w0.cover_candidates(i).is_empty()));
    }

    #[test]
    fn candidates_match_cover_test() {
        for n in 1..=6 {
            for w in Permutation::all(n) {
                for i in 1..n {
                    let brute: Vec<usize> = (i + 1..=n)
                        .filter(|&j| w.is_bruhat_cover(Link::new(i, j)))
                        .collect();
                    assert_eq!(w.cover_candidates(i), brute, "{w} row {i}");
                }
            }
        }
    }

    #[test]
    fn enumerates_symmetric_group() {
        let all: Vec<Permutation> = Permutation::all(4).collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all.first().unwrap(), &p("1234"));
        assert_eq!(all.last().unwrap(), &p("4321"));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Permutation::all(1).count(), 1);
    }

    #[test]
    fn exhaustive_identities() {
        for n in 1..=6 {
            for w in Permutation::all(n) {
                let code = w.lehmer_code();
                assert_eq!(w.rothe_diagram().len(), w.length());
                assert_eq!(code.total() as usize, w.length());
                for (k, &c) in code.iter().enumerate() {
                    assert!(c as usize <= n - (k + 1));
                }
                for i in 1..=n {
                    for j in i + 1..=n {
                        let l = Link::new(i, j);
                        let v = w.swapped(l);
                        assert_eq!(v.swapped(l), w);
                        if w.is_bruhat_cover(l) {
                            assert_eq!(v.length(), w.length() + 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn render_round_trip_s7() {
        for w in Permutation::all(7) {
            assert_eq!(w.to_string().parse::<Permutation>().unwrap(), w);
        }
    }

    #[test]
    fn link_json() {
        let l = Link::new(2, 5);
        assert_eq!(serde_json::to_string(&l).unwrap(), "[2,5]");
        assert_eq!(serde_json::from_str::<Link>("[2,5]").unwrap(), l);
        assert!(serde_json::from_str::<Link>("[5,2]").is_err());
    }
}
