//! Permutation statistics built from increasing subsequences: `orr(w)`, the
//! Rajchgot code `r(w)`, the sequence `leads(w)` and the highest nesting
//! length `h(w)`.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permutation::{Link, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatisticsError {
    #[error("position {q} is out of range for S_{n}")]
    PositionOutOfRange { q: usize, n: usize },
    #[error("entry {k} of {vector} exceeds n - k and has no nonnegative complement")]
    NoComplement { vector: ExponentVector, k: usize },
}

/// A length-`n` vector of nonnegative integers: monomial exponents, codes and
/// chain weights all share this shape. Index `k` (1-based) belongs to `x_k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// `(n-1, n-2, ..., 1, 0)`, the exponent of `x_1^{n-1} ... x_{n-1}`.
    pub fn staircase(n: usize) -> Self {
        ExponentVector((0..n).rev().map(|e| e as u32).collect())
    }

    /// The standard basis vector `e_k` (1-based).
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k - 1] = 1;
        v
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// Entry `k`, 1-based.
    pub fn get(&self, k: usize) -> u32 {
        self.0[k - 1]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// `self + e_k` (1-based).
    pub fn bumped(&self, k: usize) -> Self {
        let mut v = self.clone();
        v.0[k - 1] += 1;
        v
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.n() == other.n() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// The vector complement `v̄_k = n - k - v_k`.
    pub fn complement(&self) -> Result<Self, StatisticsError> {
        let n = self.n();
        self.0
            .iter()
            .enumerate()
            .map(|(idx, &v)| {
                let bound = (n - idx - 1) as u32;
                bound.checked_sub(v).ok_or_else(|| StatisticsError::NoComplement {
                    vector: self.clone(),
                    k: idx + 1,
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl Deref for ExponentVector {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Free function form of [`ExponentVector::complement`].
pub fn vector_complement(v: &ExponentVector) -> Result<ExponentVector, StatisticsError> {
    v.complement()
}

fn check_position(w: &Permutation, q: usize) -> Result<(), StatisticsError> {
    if q == 0 || q > w.n() {
        return Err(StatisticsError::PositionOutOfRange { q, n: w.n() });
    }
    Ok(())
}

/// All longest increasing subsequences of `w` starting at position `q`, by
/// exhaustive search. Exponential in the worst case; meant as an oracle.
pub fn lis_set(w: &Permutation, q: usize) -> Result<Vec<Vec<usize>>, StatisticsError> {
    check_position(w, q)?;
    let suffix = suffix_lis_lengths(w);
    let mut out = Vec::new();
    let mut path = vec![q];
    collect_lis(w, &suffix, &mut path, &mut out);
    Ok(out)
}

fn collect_lis(w: &Permutation, suffix: &[usize], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().unwrap();
    let remaining = suffix[last - 1] - 1;
    if remaining == 0 {
        out.push(path.clone());
        return;
    }
    for next in last + 1..=w.n() {
        // prune branches that cannot reach the maximal length
        if w.at(next) > w.at(last) && suffix[next - 1] == remaining {
            path.push(next);
            collect_lis(w, suffix, path, out);
            path.pop();
        }
    }
}

/// `suffix[p-1]` is the length of a longest increasing subsequence starting at `p`.
fn suffix_lis_lengths(w: &Permutation) -> Vec<usize> {
    let n = w.n();
    let mut len = vec![1usize; n];
    for p in (1..=n).rev() {
        for r in p + 1..=n {
            if w.at(r) > w.at(p) {
                len[p - 1] = len[p - 1].max(len[r - 1] + 1);
            }
        }
    }
    len
}

/// The lexicographically last longest increasing subsequence from `q`.
pub fn lex_last_lis(w: &Permutation, q: usize) -> Result<Vec<usize>, StatisticsError> {
    check_position(w, q)?;
    let suffix = suffix_lis_lengths(w);
    let mut seq = vec![q];
    let mut cur = q;
    while suffix[cur - 1] > 1 {
        let need = suffix[cur - 1] - 1;
        cur = (cur + 1..=w.n())
            .rev()
            .find(|&r| w.at(r) > w.at(cur) && suffix[r - 1] == need)
            .expect("suffix lengths are consistent");
        seq.push(cur);
    }
    Ok(seq)
}

/// `orr(w)_i`: length of a longest increasing subsequence from `i`, minus one.
pub fn orr(w: &Permutation) -> ExponentVector {
    ExponentVector(suffix_lis_lengths(w).into_iter().map(|l| (l - 1) as u32).collect())
}

pub fn rajchgot_code(w: &Permutation) -> ExponentVector {
    orr(w).complement().expect("orr(w)_k <= n - k")
}

pub fn rajchgot_index(w: &Permutation) -> u64 {
    rajchgot_code(w).total()
}

/// `|orr(w)|`, the minimum number of minimal markings over climbing chains of `w`.
pub fn orr_index(w: &Permutation) -> u64 {
    orr(w).total()
}

/// `(L_w(0), ..., L_w(d))` with `d = raj(w) - ℓ(w)`: start from the Lehmer
/// code and raise the rightmost entry still below the Rajchgot code.
pub fn leads(w: &Permutation) -> Vec<ExponentVector> {
    let target = rajchgot_code(w);
    let mut cur = w.lehmer_code();
    let d = target.total() - cur.total();
    let mut out = Vec::with_capacity(d as usize + 1);
    out.push(cur.clone());
    for _ in 0..d {
        let j = (1..=cur.n())
            .rev()
            .find(|&j| cur.get(j) < target.get(j))
            .expect("r(w) dominates c(w)");
        cur = cur.bumped(j);
        out.push(cur.clone());
    }
    out
}

/// The number of highest nested hooks below the first unsettled row.
pub fn highest_nesting_length(w: &Permutation) -> usize {
    let Some(q0) = w.first_unsettled() else {
        return 0;
    };
    let mut v = w.clone();
    let mut prev = q0;
    let mut steps = 0;
    while let Some(p) = v.cover_candidates(q0).into_iter().find(|&p| p > prev) {
        v = v.swapped(Link::new(q0, p));
        prev = p;
        steps += 1;
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::from(v.to_vec())
    }

    /// Every increasing subsequence from `q`, no pruning.
    fn brute_lis(w: &Permutation, q: usize) -> Vec<Vec<usize>> {
        fn grow(w: &Permutation, path: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
            all.push(path.clone());
            let last = *path.last().unwrap();
            for r in last + 1..=w.n() {
                if w.at(r) > w.at(last) {
                    path.push(r);
                    grow(w, path, all);
                    path.pop();
                }
            }
        }
        let mut all = Vec::new();
        grow(w, &mut vec![q], &mut all);
        let best = all.iter().map(Vec::len).max().unwrap();
        all.retain(|s| s.len() == best);
        all.sort();
        all
    }

    #[test]
    fn lis_examples() {
        assert_eq!(
            lis_set(&p("48513726"), 4).unwrap(),
            vec![vec![4, 5, 6], vec![4, 5, 8], vec![4, 7, 8]]
        );
        assert_eq!(lis_set(&p("54321"), 3).unwrap(), vec![vec![3]]);
        assert_eq!(
            lis_set(&p("265143"), 1).unwrap(),
            vec![vec![1, 2], vec![1, 3], vec![1, 5], vec![1, 6]]
        );
        assert!(matches!(
            lis_set(&p("123"), 4),
            Err(StatisticsError::PositionOutOfRange { q: 4, n: 3 })
        ));
        assert!(lex_last_lis(&p("123"), 0).is_err());
    }

    #[test]
    fn lex_last_examples() {
        assert_eq!(lex_last_lis(&p("265143"), 1).unwrap(), vec![1, 6]);
        assert_eq!(lex_last_lis(&p("4321"), 1).unwrap(), vec![1]);
        assert_eq!(lex_last_lis(&p("256341"), 1).unwrap(), vec![1, 4, 5]);
    }

    #[test]
    fn lis_matches_brute_force_up_to_s7() {
        for n in 1..=7 {
            for w in Permutation::all(n) {
                for q in 1..=n {
                    let oracle = brute_lis(&w, q);
                    let fast = lis_set(&w, q).unwrap();
                    assert_eq!(fast, oracle, "{w} from {q}");
                    assert_eq!(&lex_last_lis(&w, q).unwrap(), oracle.last().unwrap());
                    assert_eq!(orr(&w).get(q) as usize + 1, oracle[0].len());
                }
            }
        }
    }

    #[test]
    fn orr_and_rajchgot_examples() {
        assert_eq!(orr(&p("48513726")), ev(&[2, 0, 1, 2, 1, 0, 1, 0]));
        assert_eq!(orr(&p("654321")), ExponentVector::zeros(6));
        assert_eq!(orr(&p("256341")), ev(&[2, 1, 0, 1, 0, 0]));
        assert_eq!(rajchgot_code(&p("48513726")), ev(&[5, 6, 4, 2, 2, 2, 0, 0]));
        assert_eq!(rajchgot_code(&p("54321")), ExponentVector::staircase(5));
        assert_eq!(rajchgot_code(&p("5721463")), ev(&[5, 5, 2, 1, 1, 1, 0]));
        assert_eq!(rajchgot_index(&p("48513726")), 21);
        assert_eq!(rajchgot_index(&p("654321")), 15);
        assert_eq!(rajchgot_index(&p("5721463")), 15);
        assert_eq!(orr_index(&p("48513726")), 7);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(
            ev(&[2, 0, 1, 2, 1, 0, 1, 0]).complement().unwrap(),
            ev(&[5, 6, 4, 2, 2, 2, 0, 0])
        );
        assert_eq!(ExponentVector::zeros(4).complement().unwrap(), ev(&[3, 2, 1, 0]));
        assert!(matches!(
            ev(&[0, 0, 1]).complement(),
            Err(StatisticsError::NoComplement { k: 3, .. })
        ));
    }

    #[test]
    fn leads_examples() {
        assert_eq!(
            leads(&p("5721463")),
            vec![
                ev(&[4, 5, 1, 0, 1, 1, 0]),
                ev(&[4, 5, 1, 1, 1, 1, 0]),
                ev(&[4, 5, 2, 1, 1, 1, 0]),
                ev(&[5, 5, 2, 1, 1, 1, 0]),
            ]
        );
        assert_eq!(leads(&p("4321")), vec![ExponentVector::staircase(4)]);
        // c(31452) = (2,0,1,1,0); r(31452) from the brute-force LIS oracle
        let r = ExponentVector::zeros(5).complement().unwrap();
        let orr_oracle: Vec<u32> = (1..=5)
            .map(|q| brute_lis(&p("31452"), q)[0].len() as u32 - 1)
            .collect();
        let r_oracle: Vec<u32> = r.iter().zip(&orr_oracle).map(|(a, b)| a - b).collect();
        assert_eq!(r_oracle, vec![2, 1, 1, 1, 0]);
        assert_eq!(
            leads(&p("31452")),
            vec![ev(&[2, 0, 1, 1, 0]), ev(&[2, 1, 1, 1, 0])]
        );
    }

    #[test]
    fn nesting_length_examples() {
        assert_eq!(highest_nesting_length(&p("1465273")), 3);
        assert_eq!(highest_nesting_length(&p("54321")), 0);
        assert_eq!(highest_nesting_length(&p("256341")), 2);
    }

    #[test]
    fn exhaustive_statistics_invariants() {
        for n in 1..=6 {
            for w in Permutation::all(n) {
                let c = w.lehmer_code();
                let o = orr(&w);
                let r = rajchgot_code(&w);
                assert!(c.divides(&r), "{w}: c = {c}, r = {r}");
                assert_eq!(r.complement().unwrap(), o);
                for k in 1..=n {
                    assert!(o.get(k) as usize <= n - k);
                }
                let l = leads(&w);
                assert_eq!(l.len() as u64, rajchgot_index(&w) - w.length() as u64 + 1);
                assert_eq!(l.first().unwrap(), &c);
                assert_eq!(l.last().unwrap(), &r);
                for pair in l.windows(2) {
                    let diff: Vec<i64> = pair[1]
                        .iter()
                        .zip(pair[0].iter())
                        .map(|(a, b)| *a as i64 - *b as i64)
                        .collect();
                    assert_eq!(diff.iter().sum::<i64>(), 1);
                    assert!(diff.iter().all(|&d| d == 0 || d == 1));
                }
                if let Some(q0) = w.first_unsettled() {
                    assert!(highest_nesting_length(&w) as u32 <= o.get(q0));
                } else {
                    assert_eq!(highest_nesting_length(&w), 0);
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn complement_is_involution(raw in proptest::collection::vec(0u32..100, 1..10)) {
            let n = raw.len();
            let v = ExponentVector::from(
                raw.iter().enumerate().map(|(i, x)| x % (n - i) as u32).collect::<Vec<_>>(),
            );
            proptest::prop_assert_eq!(v.complement().unwrap().complement().unwrap(), v);
        }
    }
}
