//! Exact sparse polynomials in `x_1, ..., x_n` with integer coefficients,
//! divided-difference operators, and the Schubert/Grothendieck recursions.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permutation::Permutation;
use crate::statistics::ExponentVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolynomialError {
    #[error("integer overflow in polynomial arithmetic")]
    Overflow,
    #[error("operator index {j} is out of range for {n} variables")]
    IndexOutOfRange { j: usize, n: usize },
    #[error("the zero polynomial has no degree or leading monomial")]
    Zero,
    #[error("exponent vectors of lengths {0} and {1} cannot be compared")]
    LengthMismatch(usize, usize),
}

type Coeff = i64;

/// Which variable a term order treats as largest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `x_1 < x_2 < ... < x_n`
    Ascending,
    /// `x_1 > x_2 > ... > x_n`
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    Lex,
    DegLex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermOrder {
    pub direction: Direction,
    pub mode: OrderMode,
}

impl TermOrder {
    pub const ASCENDING_LEX: TermOrder = TermOrder {
        direction: Direction::Ascending,
        mode: OrderMode::Lex,
    };
    pub const DESCENDING_LEX: TermOrder = TermOrder {
        direction: Direction::Descending,
        mode: OrderMode::Lex,
    };
    pub const ASCENDING_DEGLEX: TermOrder = TermOrder {
        direction: Direction::Ascending,
        mode: OrderMode::DegLex,
    };
    pub const DESCENDING_DEGLEX: TermOrder = TermOrder {
        direction: Direction::Descending,
        mode: OrderMode::DegLex,
    };

    pub fn compare(&self, a: &ExponentVector, b: &ExponentVector) -> Result<Ordering, PolynomialError> {
        if a.n() != b.n() {
            return Err(PolynomialError::LengthMismatch(a.n(), b.n()));
        }
        Ok(self.cmp_same_len(a, b))
    }

    fn cmp_same_len(&self, a: &ExponentVector, b: &ExponentVector) -> Ordering {
        let by_degree = match self.mode {
            OrderMode::Lex => Ordering::Equal,
            OrderMode::DegLex => a.total().cmp(&b.total()),
        };
        by_degree.then_with(|| match self.direction {
            Direction::Descending => a.as_slice().cmp(b.as_slice()),
            Direction::Ascending => a.iter().rev().cmp(b.iter().rev()),
        })
    }
}

impl FromStr for TermOrder {
    type Err = String;

    /// `asc`, `desc`, `asc-deglex`, `desc-deglex`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "asc" | "asc-lex" => Ok(TermOrder::ASCENDING_LEX),
            "desc" | "desc-lex" => Ok(TermOrder::DESCENDING_LEX),
            "asc-deglex" => Ok(TermOrder::ASCENDING_DEGLEX),
            "desc-deglex" => Ok(TermOrder::DESCENDING_DEGLEX),
            other => Err(format!("unknown term order {other:?}")),
        }
    }
}

/// Free function form of [`TermOrder::compare`].
pub fn compare_monomials(
    a: &ExponentVector,
    b: &ExponentVector,
    order: TermOrder,
) -> Result<Ordering, PolynomialError> {
    order.compare(a, b)
}

/// A polynomial in `n` variables, stored as exponent vector → nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    n: usize,
    terms: BTreeMap<ExponentVector, Coeff>,
}

fn add_term(
    terms: &mut BTreeMap<ExponentVector, Coeff>,
    exp: ExponentVector,
    coeff: Coeff,
) -> Result<(), PolynomialError> {
    if coeff == 0 {
        return Ok(());
    }
    match terms.entry(exp) {
        Entry::Vacant(e) => {
            e.insert(coeff);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().checked_add(coeff).ok_or(PolynomialError::Overflow)?;
            if sum == 0 {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
    Ok(())
}

impl IntPolynomial {
    pub fn zero(n: usize) -> Self {
        IntPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(ExponentVector::zeros(n), 1)
    }

    pub fn monomial(exp: ExponentVector, coeff: i64) -> Self {
        let mut p = Self::zero(exp.n());
        if coeff != 0 {
            p.terms.insert(exp, coeff);
        }
        p
    }

    /// Sums the given terms, combining repeated exponents.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, PolynomialError>
    where
        I: IntoIterator<Item = (ExponentVector, i64)>,
    {
        let mut p = Self::zero(n);
        for (exp, c) in terms {
            if exp.n() != n {
                return Err(PolynomialError::LengthMismatch(n, exp.n()));
            }
            add_term(&mut p.terms, exp, c)?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, i64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exp: &ExponentVector) -> i64 {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolynomialError> {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            add_term(&mut out.terms, e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolynomialError> {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            add_term(&mut out.terms, e.clone(), c.checked_neg().ok_or(PolynomialError::Overflow)?)?;
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolynomialError> {
        let mut out = Self::zero(self.n);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let exp: Vec<u32> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
                let c = ca.checked_mul(cb).ok_or(PolynomialError::Overflow)?;
                add_term(&mut out.terms, exp.into(), c)?;
            }
        }
        Ok(out)
    }

    /// `f(..., x_{j+1}, x_j, ...)`, i.e. `s_j · f`.
    pub fn swap_variables(&self, j: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut v = e.clone().into_vec();
                v.swap(j - 1, j);
                (ExponentVector::from(v), c)
            })
            .collect();
        IntPolynomial { n: self.n, terms }
    }

    /// `x_k · f`.
    pub fn times_variable(&self, k: usize) -> Self {
        let terms = self.terms.iter().map(|(e, &c)| (e.bumped(k), c)).collect();
        IntPolynomial { n: self.n, terms }
    }

    pub fn degree(&self) -> Result<u64, PolynomialError> {
        self.terms.keys().map(|e| e.total()).max().ok_or(PolynomialError::Zero)
    }

    pub fn min_degree(&self) -> Result<u64, PolynomialError> {
        self.terms.keys().map(|e| e.total()).min().ok_or(PolynomialError::Zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.total());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    pub fn homogeneous_component(&self, k: u64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.total() == k)
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        IntPolynomial { n: self.n, terms }
    }

    /// The highest-degree homogeneous component.
    pub fn top_component(&self) -> Result<Self, PolynomialError> {
        Ok(self.homogeneous_component(self.degree()?))
    }

    /// The lowest-degree homogeneous component.
    pub fn bottom_component(&self) -> Result<Self, PolynomialError> {
        Ok(self.homogeneous_component(self.min_degree()?))
    }

    pub fn leading_monomial(&self, order: TermOrder) -> Result<ExponentVector, PolynomialError> {
        self.terms
            .keys()
            .max_by(|a, b| order.cmp_same_len(a, b))
            .cloned()
            .ok_or(PolynomialError::Zero)
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: TermOrder) -> Vec<(ExponentVector, i64)> {
        let mut v: Vec<(ExponentVector, i64)> =
            self.terms.iter().map(|(e, &c)| (e.clone(), c)).collect();
        v.sort_by(|a, b| order.cmp_same_len(&b.0, &a.0));
        v
    }

    pub fn to_json_terms(&self, order: TermOrder) -> Vec<TermJson> {
        self.sorted_terms(order)
            .into_iter()
            .map(|(exp, coeff)| TermJson { exp, coeff })
            .collect()
    }

    /// `x1^2*x2 - 3*x1 + 1` style, largest term first.
    pub fn pretty(&self, order: TermOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (exp, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let mono = format_monomial(&exp);
            let mag = c.unsigned_abs();
            if idx == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            match (mag, mono.is_empty()) {
                (_, true) => out.push_str(&mag.to_string()),
                (1, false) => out.push_str(&mono),
                (_, false) => out.push_str(&format!("{mag}*{mono}")),
            }
        }
        out
    }
}

fn format_monomial(exp: &ExponentVector) -> String {
    exp.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty(TermOrder::ASCENDING_DEGLEX))
    }
}

/// One entry of the JSON form of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: ExponentVector,
    pub coeff: i64,
}

fn check_index(f: &IntPolynomial, j: usize) -> Result<(), PolynomialError> {
    if j == 0 || j >= f.n {
        return Err(PolynomialError::IndexOutOfRange { j, n: f.n });
    }
    Ok(())
}

/// `∂_j f = (f - s_j f) / (x_j - x_{j+1})`, computed monomial by monomial.
///
/// For `a > b`, `∂_j(x_j^a x_{j+1}^b) = (x_j x_{j+1})^b (x_j^{a-b-1} + x_j^{a-b-2} x_{j+1} + ... + x_{j+1}^{a-b-1})`,
/// the case `a < b` is the negative of the mirrored sum, and `a = b` gives zero.
pub fn divided_difference(f: &IntPolynomial, j: usize) -> Result<IntPolynomial, PolynomialError> {
    check_index(f, j)?;
    let mut out = BTreeMap::new();
    for (exp, &c) in &f.terms {
        let (a, b) = (exp[j - 1], exp[j]);
        if a == b {
            continue;
        }
        let (low, gap, coeff) = if a > b {
            (b, a - b, c)
        } else {
            (a, b - a, c.checked_neg().ok_or(PolynomialError::Overflow)?)
        };
        let mut v = exp.clone().into_vec();
        for t in 0..gap {
            v[j - 1] = low + gap - 1 - t;
            v[j] = low + t;
            add_term(&mut out, ExponentVector::from(v.clone()), coeff)?;
        }
    }
    Ok(IntPolynomial { n: f.n, terms: out })
}

/// `∂̄_j f = ∂_j(f - x_{j+1} f)`.
pub fn isobaric_divided_difference(f: &IntPolynomial, j: usize) -> Result<IntPolynomial, PolynomialError> {
    check_index(f, j)?;
    let shifted = f.checked_sub(&f.times_variable(j + 1))?;
    divided_difference(&shifted, j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolynomialKind {
    Schubert,
    Grothendieck,
}

impl PolynomialKind {
    /// The operator that steps down from `w s_j` to `w`.
    pub fn apply(self, f: &IntPolynomial, j: usize) -> Result<IntPolynomial, PolynomialError> {
        match self {
            PolynomialKind::Schubert => divided_difference(f, j),
            PolynomialKind::Grothendieck => isobaric_divided_difference(f, j),
        }
    }
}

/// `x_1^{n-1} x_2^{n-2} ... x_{n-1}`, the common value at `w0`.
pub fn top_staircase_monomial(n: usize) -> IntPolynomial {
    IntPolynomial::monomial(ExponentVector::staircase(n), 1)
}

fn recurse_from_top(w: &Permutation, kind: PolynomialKind) -> Result<IntPolynomial, PolynomialError> {
    // Walk up to w0 via smallest ascents, then apply the operators on the way back.
    let mut steps = Vec::new();
    let mut cur = w.clone();
    while let Some(&j) = cur.ascents().first() {
        steps.push(j);
        cur = cur.swap_adjacent(j);
    }
    let mut f = top_staircase_monomial(w.n());
    for &j in steps.iter().rev() {
        f = kind.apply(&f, j)?;
    }
    Ok(f)
}

pub fn schubert(w: &Permutation) -> Result<IntPolynomial, PolynomialError> {
    recurse_from_top(w, PolynomialKind::Schubert)
}

pub fn grothendieck(w: &Permutation) -> Result<IntPolynomial, PolynomialError> {
    recurse_from_top(w, PolynomialKind::Grothendieck)
}

/// Memoized polynomials for a set of permutations in one `S_n`, keyed by
/// one-line word. Built level by level in Bruhat length, top down, with each
/// level computed in parallel.
#[derive(Debug, Clone)]
pub struct PolynomialTable {
    kind: PolynomialKind,
    n: usize,
    polys: HashMap<Permutation, IntPolynomial>,
}

impl PolynomialTable {
    /// Every permutation of `S_n`.
    pub fn full(n: usize, kind: PolynomialKind) -> Result<Self, PolynomialError> {
        Self::covering(n, kind, Permutation::all(n))
    }

    /// The given permutations plus everything on their smallest-ascent paths to `w0`.
    pub fn covering<I>(n: usize, kind: PolynomialKind, targets: I) -> Result<Self, PolynomialError>
    where
        I: IntoIterator<Item = Permutation>,
    {
        let mut needed: HashSet<Permutation> = HashSet::new();
        for w in targets {
            let mut cur = w;
            while needed.insert(cur.clone()) {
                match cur.ascents().first() {
                    Some(&j) => cur = cur.swap_adjacent(j),
                    None => break,
                }
            }
        }
        let max_len = n * (n - 1) / 2;
        let mut levels: Vec<Vec<Permutation>> = vec![Vec::new(); max_len + 1];
        for w in needed {
            levels[w.length()].push(w);
        }
        let mut polys = HashMap::new();
        let w0 = Permutation::longest(n).expect("n >= 1");
        polys.insert(w0, top_staircase_monomial(n));
        for level in levels.iter_mut().rev().skip(1) {
            level.sort();
            let computed: Vec<(Permutation, IntPolynomial)> = level
                .par_iter()
                .map(|w| {
                    let j = w.ascents()[0];
                    let f = kind.apply(&polys[&w.swap_adjacent(j)], j)?;
                    Ok((w.clone(), f))
                })
                .collect::<Result<_, PolynomialError>>()?;
            polys.extend(computed);
        }
        Ok(PolynomialTable { kind, n, polys })
    }

    pub fn kind(&self) -> PolynomialKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn get(&self, w: &Permutation) -> Option<&IntPolynomial> {
        self.polys.get(w)
    }
}
