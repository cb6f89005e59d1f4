//! Climbing chains: saturated Bruhat chains from `w` up to `w0` whose links
//! have weakly increasing first components, together with markings, weights,
//! the signed chain expansion of Grothendieck polynomials, and the greedy,
//! nested, leaping, staircase and interpolating constructions.

use std::fmt;
use std::ops::Range;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::permutation::{Link, Permutation};
use crate::polynomial::{IntPolynomial, PolynomialError};
use crate::statistics::{lex_last_lis, orr, orr_index, ExponentVector};

/// Environment variable overriding [`EnumerationGuard::default`].
pub const GUARD_ENV_VAR: &str = "SCHUBERT_CHAIN_GUARD";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("link {link} at step {step} is out of range or does not satisfy i < j")]
    BadLink { step: usize, link: Link },
    #[error("first components decrease at step {step}")]
    NotClimbing { step: usize },
    #[error("link {link} at step {step} is not a Bruhat cover of {from}")]
    NotACover { step: usize, link: Link, from: Permutation },
    #[error("chain ends at {0}, not at the longest element")]
    DoesNotReachTop(Permutation),
    #[error("marking index {0} is out of range")]
    MarkOutOfRange(usize),
    #[error("marking omits minimal marking at index {0}")]
    MissingMinimalMark(usize),
    #[error("enumeration would exceed the guard of {limit} marked chains")]
    GuardExceeded { limit: u64 },
    #[error("{0} is undefined for the longest element")]
    UndefinedAtTop(&'static str),
    #[error("index {k} is out of range 0..={m}")]
    IndexOutOfRange { k: usize, m: usize },
    #[error(transparent)]
    Polynomial(#[from] PolynomialError),
}

/// A climbing chain of `source`. Construction through [`ClimbingChain::new`]
/// validates every defining condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClimbingChain {
    source: Permutation,
    links: Vec<Link>,
}

impl ClimbingChain {
    pub fn new(source: Permutation, links: Vec<Link>) -> Result<Self, ChainError> {
        let n = source.n();
        let mut cur = source.clone();
        for (step, &link) in links.iter().enumerate() {
            if link.i == 0 || link.i >= link.j || link.j > n {
                return Err(ChainError::BadLink { step, link });
            }
            if step > 0 && links[step - 1].i > link.i {
                return Err(ChainError::NotClimbing { step });
            }
            if !cur.is_bruhat_cover(link) {
                return Err(ChainError::NotACover {
                    step,
                    link,
                    from: cur,
                });
            }
            cur = cur.swapped(link);
        }
        if !cur.is_longest() {
            return Err(ChainError::DoesNotReachTop(cur));
        }
        Ok(ClimbingChain { source, links })
    }

    /// Builds a chain from the text form `"1,3;1,2;..."`. An empty string is
    /// the empty chain.
    pub fn parse(source: Permutation, text: &str) -> Result<Self, String> {
        let mut links = Vec::new();
        for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (i, j) = part
                .split_once(',')
                .ok_or_else(|| format!("link {part:?} is not of the form i,j"))?;
            let i: usize = i.trim().parse().map_err(|_| format!("bad position in {part:?}"))?;
            let j: usize = j.trim().parse().map_err(|_| format!("bad position in {part:?}"))?;
            links.push(Link::try_new(i, j).ok_or_else(|| format!("link ({i},{j}) needs 1 <= i < j"))?);
        }
        ClimbingChain::new(source, links).map_err(|e| e.to_string())
    }

    pub(crate) fn from_trusted(source: Permutation, links: Vec<Link>) -> Self {
        debug_assert!(ClimbingChain::new(source.clone(), links.clone()).is_ok());
        ClimbingChain { source, links }
    }

    pub fn source(&self) -> &Permutation {
        &self.source
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    /// `w^(0), w^(1), ..., w^(m)`: the source followed by each intermediate permutation.
    pub fn permutations(&self) -> Vec<Permutation> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(self.source.clone());
        for &l in &self.links {
            let next = out.last().unwrap().swapped(l);
            out.push(next);
        }
        out
    }

    /// `w →(i,j) w' →(k,l) ...`
    pub fn arrow_notation(&self) -> String {
        let perms = self.permutations();
        let mut s = perms[0].to_string();
        for (l, v) in self.links.iter().zip(&perms[1..]) {
            s.push_str(&format!(" →{l} {v}"));
        }
        s
    }
}

impl fmt::Display for ClimbingChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.links.iter().map(Link::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for ClimbingChain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.links.serialize(s)
    }
}

/// Indices (0-based) of the minimal markings `M(C)`.
pub fn minimal_markings(chain: &ClimbingChain) -> Vec<usize> {
    let links = chain.links();
    (0..links.len())
        .filter(|&p| {
            p == 0 || {
                let (prev, cur) = (links[p - 1], links[p]);
                prev.i < cur.i || (prev.i == cur.i && prev.j < cur.j)
            }
        })
        .collect()
}

/// A climbing chain with a marking `M(C) ⊆ U ⊆ C`, stored as sorted link
/// indices rather than link values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedChain {
    chain: ClimbingChain,
    marked: Vec<usize>,
}

impl MarkedChain {
    pub fn new(chain: ClimbingChain, mut marked: Vec<usize>) -> Result<Self, ChainError> {
        marked.sort_unstable();
        marked.dedup();
        if let Some(&bad) = marked.iter().find(|&&p| p >= chain.len()) {
            return Err(ChainError::MarkOutOfRange(bad));
        }
        if let Some(missing) = minimal_markings(&chain)
            .into_iter()
            .find(|p| marked.binary_search(p).is_err())
        {
            return Err(ChainError::MissingMinimalMark(missing));
        }
        Ok(MarkedChain { chain, marked })
    }

    pub fn minimal(chain: ClimbingChain) -> Self {
        let marked = minimal_markings(&chain);
        MarkedChain { chain, marked }
    }

    pub fn full(chain: ClimbingChain) -> Self {
        let marked = (0..chain.len()).collect();
        MarkedChain { chain, marked }
    }

    pub fn chain(&self) -> &ClimbingChain {
        &self.chain
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn num_marked(&self) -> usize {
        self.marked.len()
    }

    /// `(-1)^(ℓ(C) - #U)`.
    pub fn sign(&self) -> i64 {
        if (self.chain.len() - self.marked.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn dual_weight(&self) -> ExponentVector {
        let mut v = vec![0u32; self.chain.n()];
        for &p in &self.marked {
            v[self.chain.links[p].i - 1] += 1;
        }
        ExponentVector::from(v)
    }

    pub fn weight(&self) -> ExponentVector {
        self.dual_weight()
            .complement()
            .expect("marked links from row k number at most n - k")
    }
}

impl fmt::Display for MarkedChain {
    /// Marked links are wrapped in brackets: `([1,4],(1,2),[1,3])`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .chain
            .links
            .iter()
            .enumerate()
            .map(|(p, l)| {
                if self.marked.binary_search(&p).is_ok() {
                    format!("[{},{}]", l.i, l.j)
                } else {
                    l.to_string()
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for MarkedChain {
    /// `{"links": [[i,j],...], "marked": [1-based indices]}`
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MarkedChain", 2)?;
        st.serialize_field("links", &self.chain.links)?;
        let one_based: Vec<usize> = self.marked.iter().map(|p| p + 1).collect();
        st.serialize_field("marked", &one_based)?;
        st.end()
    }
}

pub fn dual_weight(mc: &MarkedChain) -> ExponentVector {
    mc.dual_weight()
}

pub fn weight(mc: &MarkedChain) -> ExponentVector {
    mc.weight()
}

/// Upper bound on the number of marked chains an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationGuard {
    pub max_marked_chains: u64,
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        EnumerationGuard {
            max_marked_chains: 10_000_000,
        }
    }
}

impl EnumerationGuard {
    pub fn new(max_marked_chains: u64) -> Self {
        EnumerationGuard { max_marked_chains }
    }

    /// The default, unless [`GUARD_ENV_VAR`] holds a valid integer.
    pub fn from_env() -> Self {
        std::env::var(GUARD_ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(EnumerationGuard::new)
            .unwrap_or_default()
    }
}

/// Depth-first walk over every climbing chain of `w`. The first component
/// of each link is forced to be the first unsettled position; only the
/// second component branches.
fn visit_chains<F>(w: &Permutation, guard: EnumerationGuard, mut visit: F) -> Result<(), ChainError>
where
    F: FnMut(&ClimbingChain),
{
    fn walk<F: FnMut(&ClimbingChain)>(
        source: &Permutation,
        cur: &Permutation,
        links: &mut Vec<Link>,
        budget: &mut u64,
        limit: u64,
        visit: &mut F,
    ) -> Result<(), ChainError> {
        let Some(a) = cur.first_unsettled() else {
            let chain = ClimbingChain {
                source: source.clone(),
                links: links.clone(),
            };
            let free = chain.len() - minimal_markings(&chain).len();
            *budget = budget.saturating_add(1u64.checked_shl(free as u32).unwrap_or(u64::MAX));
            if *budget > limit {
                return Err(ChainError::GuardExceeded { limit });
            }
            visit(&chain);
            return Ok(());
        };
        for j in cur.cover_candidates(a) {
            let link = Link::new(a, j);
            links.push(link);
            walk(source, &cur.swapped(link), links, budget, limit, visit)?;
            links.pop();
        }
        Ok(())
    }
    let mut budget = 0u64;
    walk(w, w, &mut Vec::new(), &mut budget, guard.max_marked_chains, &mut visit)
}

/// Every climbing chain of `w`, in lexicographic order of second components.
pub fn enumerate_chains(w: &Permutation, guard: EnumerationGuard) -> Result<Vec<ClimbingChain>, ChainError> {
    let mut out = Vec::new();
    visit_chains(w, guard, |c| out.push(c.clone()))?;
    Ok(out)
}

/// Every marking `U ⊇ M(C)` of `chain`, in binary counting order over the
/// unforced links.
pub fn markings_of(chain: &ClimbingChain) -> impl Iterator<Item = MarkedChain> + '_ {
    let minimal = minimal_markings(chain);
    let free: Vec<usize> = (0..chain.len()).filter(|p| !minimal.contains(p)).collect();
    (0u64..1 << free.len()).map(move |mask| {
        let mut marked = minimal.clone();
        marked.extend(
            free.iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &p)| p),
        );
        marked.sort_unstable();
        MarkedChain {
            chain: chain.clone(),
            marked,
        }
    })
}

pub fn enumerate_marked_chains(w: &Permutation, guard: EnumerationGuard) -> Result<Vec<MarkedChain>, ChainError> {
    let mut out = Vec::new();
    visit_chains(w, guard, |c| out.extend(markings_of(c)))?;
    Ok(out)
}

/// `Σ sign(ξ) x^wt(ξ)` over all marked climbing chains of `w`.
pub fn grothendieck_via_chains(w: &Permutation, guard: EnumerationGuard) -> Result<IntPolynomial, ChainError> {
    let n = w.n();
    let mut terms: Vec<(ExponentVector, i64)> = Vec::new();
    visit_chains(w, guard, |c| {
        let minimal = minimal_markings(c);
        let base = MarkedChain::minimal(c.clone()).dual_weight().into_vec();
        let free_rows: Vec<usize> = (0..c.len())
            .filter(|p| !minimal.contains(p))
            .map(|p| c.links[p].i)
            .collect();
        for mask in 0u64..1 << free_rows.len() {
            let mut dwt = base.clone();
            let mut extra = 0;
            for (bit, &row) in free_rows.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    dwt[row - 1] += 1;
                    extra += 1;
                }
            }
            let unmarked = free_rows.len() - extra;
            let sign = if unmarked.is_multiple_of(2) { 1 } else { -1 };
            let wt = ExponentVector::from(dwt).complement().expect("dual weight is bounded");
            terms.push((wt, sign));
        }
    })?;
    Ok(IntPolynomial::from_terms(n, terms)?)
}

/// `Σ x^wt(C,C)` over all climbing chains of `w`.
pub fn schubert_via_chains(w: &Permutation, guard: EnumerationGuard) -> Result<IntPolynomial, ChainError> {
    let mut terms = Vec::new();
    visit_chains(w, guard, |c| terms.push((MarkedChain::full(c.clone()).weight(), 1)))?;
    Ok(IntPolynomial::from_terms(w.n(), terms)?)
}

/// `(a, w^{-1}(w(a) + 1))` with `a` the first unsettled position.
pub fn greedy_pair(w: &Permutation) -> Option<Link> {
    let a = w.first_unsettled()?;
    Some(Link::new(a, w.position_of(w.at(a) + 1)))
}

/// The first two entries of the lexicographically last longest increasing
/// subsequence from the first unsettled position.
pub fn nested_pair(w: &Permutation) -> Option<Link> {
    let q = w.first_unsettled()?;
    let alpha = lex_last_lis(w, q).expect("q is a valid position");
    Some(Link::new(alpha[0], alpha[1]))
}

/// `(a, b)` with `b` the smallest position giving a cover from `a`.
pub fn leap_pair(w: &Permutation) -> Option<Link> {
    let a = w.first_unsettled()?;
    Some(Link::new(a, w.cover_candidates(a)[0]))
}

fn chain_by_pairs(w: &Permutation, pair: fn(&Permutation) -> Option<Link>) -> ClimbingChain {
    let mut links = Vec::new();
    let mut cur = w.clone();
    while let Some(l) = pair(&cur) {
        cur = cur.swapped(l);
        links.push(l);
    }
    ClimbingChain::from_trusted(w.clone(), links)
}

pub fn greedy_chain(w: &Permutation) -> ClimbingChain {
    chain_by_pairs(w, greedy_pair)
}

pub fn nested_chain(w: &Permutation) -> ClimbingChain {
    chain_by_pairs(w, nested_pair)
}

pub fn leaping_chain(w: &Permutation) -> ClimbingChain {
    chain_by_pairs(w, leap_pair)
}

/// The staircase block of `w`: links `(a, k)` for the selected cover
/// positions `k`, in decreasing order of `k`.
pub fn stair_block(w: &Permutation) -> Result<Vec<Link>, ChainError> {
    let a = w.first_unsettled().ok_or(ChainError::UndefinedAtTop("staircase"))?;
    let o = orr(w);
    let mut below = w.cover_candidates(a);
    let mut selected: Vec<usize> = Vec::new();
    // Each group takes the largest orr value among the candidates left of
    // the previous group, so the block always ends at the smallest candidate.
    while let Some(best) = below.iter().map(|&k| o.get(k)).max() {
        let group: Vec<usize> = below.iter().copied().filter(|&k| o.get(k) == best).collect();
        let low = *group.iter().min().expect("best is attained");
        selected.extend(&group);
        below.retain(|&k| k < low);
    }
    selected.sort_unstable_by(|x, y| y.cmp(x));
    assert!(
        selected.windows(2).all(|p| p[0] > p[1]),
        "staircase second components must strictly decrease"
    );
    Ok(selected.into_iter().map(|k| Link::new(a, k)).collect())
}

pub fn staircase_chain(w: &Permutation) -> ClimbingChain {
    let mut links = Vec::new();
    let mut cur = w.clone();
    while !cur.is_longest() {
        for l in stair_block(&cur).expect("not the longest element") {
            cur = cur.swapped(l);
            links.push(l);
        }
    }
    ClimbingChain::from_trusted(w.clone(), links)
}

/// `ℓ(w0) - ℓ(w)`, the common length of every climbing chain of `w`.
pub fn chain_length(w: &Permutation) -> usize {
    w.n() * (w.n() - 1) / 2 - w.length()
}

/// `I^k(w)`: `m - k` greedy links followed by `k` nested links.
pub fn interpolating_chain(w: &Permutation, k: usize) -> Result<ClimbingChain, ChainError> {
    let m = chain_length(w);
    if k > m {
        return Err(ChainError::IndexOutOfRange { k, m });
    }
    let mut links = Vec::with_capacity(m);
    let mut cur = w.clone();
    for _ in 0..m - k {
        let l = greedy_pair(&cur).expect("chain not yet complete");
        cur = cur.swapped(l);
        links.push(l);
    }
    links.extend_from_slice(nested_chain(&cur).links());
    Ok(ClimbingChain::from_trusted(w.clone(), links))
}

/// `ξ_w(p) = (I^p(w), U^p(w))`: all links marked for `p = 0`, otherwise the
/// minimal markings together with the first `m - p + 1` links.
pub fn interpolating_marked(w: &Permutation, p: usize) -> Result<MarkedChain, ChainError> {
    let chain = interpolating_chain(w, p)?;
    if p == 0 {
        return Ok(MarkedChain::full(chain));
    }
    let m = chain.len();
    let mut marked = minimal_markings(&chain);
    marked.extend(0..m - p + 1);
    MarkedChain::new(chain, marked)
}

/// Whether `#M(C) = |orr(w)|`, the fewest minimal markings any chain of `w` can have.
pub fn is_heavy(chain: &ClimbingChain) -> bool {
    minimal_markings(chain).len() as u64 == orr_index(chain.source())
}

/// The runs of a chain: maximal consecutive blocks of link indices, each
/// starting at a minimal marking.
pub fn runs(chain: &ClimbingChain) -> Vec<Range<usize>> {
    let starts = minimal_markings(chain);
    starts
        .iter()
        .enumerate()
        .map(|(idx, &s)| s..starts.get(idx + 1).copied().unwrap_or(chain.len()))
        .collect()
}
