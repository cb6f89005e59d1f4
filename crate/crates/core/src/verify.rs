//! Sweeps over `S_n` that check the leading-term and chain results
//! permutation by permutation and collect the failures in a report.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::audit::{check_invariants, run_audit};
use crate::chains::{
    enumerate_chains, grothendieck_via_chains, greedy_chain, interpolating_marked, is_heavy, leaping_chain,
    minimal_markings, nested_chain, schubert_via_chains, staircase_chain, ChainError, EnumerationGuard, MarkedChain,
};
use crate::permutation::Permutation;
use crate::polynomial::{IntPolynomial, PolynomialError, PolynomialKind, PolynomialTable, TermOrder};
use crate::statistics::{leads, orr, rajchgot_code, rajchgot_index, ExponentVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// `deg G_w = raj(w)`.
    Degree,
    /// The ascending leading monomial of the top component of `G_w` is `x^r(w)`.
    TopLeading,
    /// Ascending leading monomials of every homogeneous component follow `leads(w)`.
    Hafner,
    /// The descending leading monomial of `S_w` is the fully marked leaping chain weight.
    SchubertDescending,
    /// The descending leading monomial of the top component of `G_w` is the
    /// minimally marked staircase chain weight.
    Staircase,
    /// Descending leading monomials of the components of `G_w` climb from the
    /// Schubert leading monomial towards the staircase weight, lowest index first.
    ReverseInterpolating,
    /// Chain expansions agree with divided differences for `G_w` and `S_w`.
    Equivalence,
    /// Every chain of `w` passes the Ψ/Ω audit invariants.
    Audit,
    /// The staircase chain is heavy.
    StaircaseHeavy,
    /// Interpolating chain weights are exactly `leads(w)`.
    Interpolating,
    /// The fully marked greedy chain has weight `c(w)`.
    Greedy,
    /// The minimally marked nested chain has dual weight `orr(w)`.
    Nested,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Theorem,
    Conjecture,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Theorem => "theorem",
            CheckKind::Conjecture => "conjecture",
        }
    }
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::Degree,
        Check::TopLeading,
        Check::Hafner,
        Check::SchubertDescending,
        Check::Staircase,
        Check::ReverseInterpolating,
        Check::Equivalence,
        Check::Audit,
        Check::StaircaseHeavy,
        Check::Interpolating,
        Check::Greedy,
        Check::Nested,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Degree => "degree",
            Check::TopLeading => "top-leading",
            Check::Hafner => "hafner",
            Check::SchubertDescending => "schubert-descending",
            Check::Staircase => "staircase",
            Check::ReverseInterpolating => "reverse-interpolating",
            Check::Equivalence => "equivalence",
            Check::Audit => "audit",
            Check::StaircaseHeavy => "staircase-heavy",
            Check::Interpolating => "interpolating",
            Check::Greedy => "greedy",
            Check::Nested => "nested",
        }
    }

    pub fn kind(self) -> CheckKind {
        match self {
            Check::Staircase | Check::ReverseInterpolating => CheckKind::Conjecture,
            _ => CheckKind::Theorem,
        }
    }

    /// Whether the check enumerates chains rather than only computing polynomials.
    pub fn enumerates_chains(self) -> bool {
        matches!(self, Check::Equivalence | Check::Audit)
    }

    fn needs(self, kind: PolynomialKind) -> bool {
        match kind {
            PolynomialKind::Grothendieck => matches!(
                self,
                Check::Degree
                    | Check::TopLeading
                    | Check::Hafner
                    | Check::Staircase
                    | Check::ReverseInterpolating
                    | Check::Equivalence
            ),
            PolynomialKind::Schubert => matches!(self, Check::SchubertDescending | Check::Equivalence),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
                format!("unknown check {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("n must be at least 1")]
    ZeroSize,
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Polynomial(#[from] PolynomialError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub n: usize,
    /// Number of permutations to sample once `n!` exceeds `exhaustive_threshold`.
    pub sample: Option<usize>,
    pub seed: u64,
    pub exhaustive_threshold: usize,
    pub guard: EnumerationGuard,
}

impl SweepConfig {
    pub fn exhaustive(n: usize) -> Self {
        SweepConfig {
            n,
            sample: None,
            seed: 0,
            exhaustive_threshold: 720,
            guard: EnumerationGuard::from_env(),
        }
    }

    pub fn sampled(n: usize, sample: usize, seed: u64) -> Self {
        SweepConfig {
            sample: Some(sample),
            seed,
            ..SweepConfig::exhaustive(n)
        }
    }

    fn is_sampled(&self) -> bool {
        self.sample.is_some() && factorial(self.n) > self.exhaustive_threshold as u128
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub permutation: Permutation,
    pub expected: String,
    pub actual: String,
}

impl Failure {
    fn new(w: &Permutation, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        Failure {
            permutation: w.clone(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}

/// Outcome of one sweep. The elapsed time is kept out of the JSON so
/// repeated runs serialize identically.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub kind: CheckKind,
    pub n: usize,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub permutations_checked: usize,
    pub status: Status,
    pub conjecture_counterexample: bool,
    pub failures: Vec<Failure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// A theorem check that failed; conjecture counterexamples do not count.
    pub fn is_theorem_failure(&self) -> bool {
        self.kind == CheckKind::Theorem && !self.passed()
    }

    pub const CSV_HEADER: &'static str = "check,kind,n,mode,seed,permutations_checked,status,failures";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.check,
            self.kind.as_str(),
            self.n,
            self.mode.as_str(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.permutations_checked,
            if self.passed() { "pass" } else { "fail" },
            self.failures.len()
        )
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} n={} ({}, {} permutations): {} in {:.2?}",
            self.check,
            self.n,
            self.mode.as_str(),
            self.permutations_checked,
            match (self.status, self.kind) {
                (Status::Pass, _) => "pass".to_string(),
                (Status::Fail, CheckKind::Theorem) => format!("FAIL ({} failures)", self.failures.len()),
                (Status::Fail, CheckKind::Conjecture) => {
                    format!("COUNTEREXAMPLE FOUND ({} permutations)", self.failures.len())
                }
            },
            self.elapsed
        );
        for f in self.failures.iter().take(10) {
            s.push_str(&format!("\n  {}: expected {}, got {}", f.permutation, f.expected, f.actual));
        }
        s
    }
}

/// The permutations a sweep visits, sorted by one-line word.
pub fn sweep_permutations(config: &SweepConfig) -> Vec<Permutation> {
    if !config.is_sampled() {
        return Permutation::all(config.n).collect();
    }
    let want = config.sample.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut picked = BTreeSet::new();
    let mut word: Vec<usize> = (1..=config.n).collect();
    while picked.len() < want {
        word.shuffle(&mut rng);
        picked.insert(Permutation::new(word.clone()).expect("a shuffle of 1..=n"));
    }
    picked.into_iter().collect()
}

struct Tables {
    grothendieck: Option<PolynomialTable>,
    schubert: Option<PolynomialTable>,
}

impl Tables {
    fn build(check: Check, n: usize, perms: &[Permutation], exhaustive: bool) -> Result<Self, VerifyError> {
        let make = |kind| -> Result<Option<PolynomialTable>, PolynomialError> {
            if !check.needs(kind) {
                return Ok(None);
            }
            if exhaustive {
                PolynomialTable::full(n, kind).map(Some)
            } else {
                PolynomialTable::covering(n, kind, perms.iter().cloned()).map(Some)
            }
        };
        Ok(Tables {
            grothendieck: make(PolynomialKind::Grothendieck)?,
            schubert: make(PolynomialKind::Schubert)?,
        })
    }

    fn grothendieck(&self, w: &Permutation) -> &IntPolynomial {
        self.grothendieck.as_ref().and_then(|t| t.get(w)).expect("table covers the sweep")
    }

    fn schubert(&self, w: &Permutation) -> &IntPolynomial {
        self.schubert.as_ref().and_then(|t| t.get(w)).expect("table covers the sweep")
    }
}

pub fn run_check(check: Check, config: &SweepConfig) -> Result<CheckReport, VerifyError> {
    if config.n == 0 {
        return Err(VerifyError::ZeroSize);
    }
    let start = Instant::now();
    let sampled = config.is_sampled();
    let perms = sweep_permutations(config);
    let tables = Tables::build(check, config.n, &perms, !sampled)?;
    let per_perm: Result<Vec<Vec<Failure>>, VerifyError> = perms
        .par_iter()
        .map(|w| check_permutation(check, w, &tables, config.guard))
        .collect();
    let mut failures: Vec<Failure> = per_perm?.into_iter().flatten().collect();
    failures.sort();
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    Ok(CheckReport {
        check: check.name().to_string(),
        kind: check.kind(),
        n: config.n,
        mode: if sampled { Mode::Sampled } else { Mode::Exhaustive },
        seed: sampled.then_some(config.seed),
        permutations_checked: perms.len(),
        status,
        conjecture_counterexample: check.kind() == CheckKind::Conjecture && status == Status::Fail,
        failures,
        elapsed: start.elapsed(),
    })
}

/// `x^c(w)` times successive `x_p`, with `p` the largest index keeping the
/// product a divisor of `x^r(w)`.
pub fn hafner_recursion(w: &Permutation) -> Vec<ExponentVector> {
    let target = rajchgot_code(w);
    let mut cur = w.lehmer_code();
    let mut out = vec![cur.clone()];
    while let Some(p) = (1..=w.n()).rev().find(|&p| cur.bumped(p).divides(&target)) {
        cur = cur.bumped(p);
        out.push(cur.clone());
    }
    out
}

/// The conjectured descending leading monomials of the components of
/// `G_w` in degrees `ℓ(w), ℓ(w)+1, ...`: start from the fully marked
/// leaping chain weight and multiply by the lowest-index variable that keeps
/// a divisor of the staircase weight. Stops early if no variable fits.
pub fn reverse_interpolating_prediction(w: &Permutation) -> Vec<ExponentVector> {
    let target = MarkedChain::minimal(staircase_chain(w)).weight();
    let mut cur = MarkedChain::full(leaping_chain(w)).weight();
    let steps = rajchgot_index(w) - w.length() as u64;
    let mut out = vec![cur.clone()];
    for _ in 0..steps {
        let Some(p) = (1..=w.n()).find(|&p| cur.bumped(p).divides(&target)) else {
            break;
        };
        cur = cur.bumped(p);
        out.push(cur.clone());
    }
    out
}

/// Leading monomials of the components of `f` in degrees `lo..=hi`.
fn component_leaders(f: &IntPolynomial, lo: u64, hi: u64, order: TermOrder) -> Result<Vec<ExponentVector>, PolynomialError> {
    (lo..=hi).map(|k| f.homogeneous_component(k).leading_monomial(order)).collect()
}

fn show(v: &[ExponentVector]) -> String {
    let parts: Vec<String> = v.iter().map(ExponentVector::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Heaviest minimal-marking weight among heavy chains, in descending order.
pub fn max_heavy_weight(w: &Permutation, guard: EnumerationGuard) -> Result<ExponentVector, VerifyError> {
    let mut best: Option<ExponentVector> = None;
    for c in enumerate_chains(w, guard)? {
        if !is_heavy(&c) {
            continue;
        }
        let wt = MarkedChain::minimal(c).weight();
        if best
            .as_ref()
            .is_none_or(|b| TermOrder::DESCENDING_LEX.compare(&wt, b).map(|o| o.is_gt()).unwrap_or(false))
        {
            best = Some(wt);
        }
    }
    Ok(best.expect("the nested chain is heavy"))
}

fn check_permutation(
    check: Check,
    w: &Permutation,
    tables: &Tables,
    guard: EnumerationGuard,
) -> Result<Vec<Failure>, VerifyError> {
    let mut out = Vec::new();
    let ell = w.length() as u64;
    let raj = rajchgot_index(w);
    match check {
        Check::Degree => {
            let deg = tables.grothendieck(w).degree()?;
            if deg != raj {
                out.push(Failure::new(w, raj, deg));
            }
        }
        Check::TopLeading => {
            let lm = tables.grothendieck(w).top_component()?.leading_monomial(TermOrder::ASCENDING_LEX)?;
            let r = rajchgot_code(w);
            if lm != r {
                out.push(Failure::new(w, r, lm));
            }
        }
        Check::Hafner => {
            let g = tables.grothendieck(w);
            let actual = component_leaders(g, ell, raj, TermOrder::ASCENDING_LEX)?;
            let recursion = hafner_recursion(w);
            let expected = leads(w);
            if actual != expected || recursion != expected {
                out.push(Failure::new(
                    w,
                    show(&expected),
                    format!("components {} recursion {}", show(&actual), show(&recursion)),
                ));
            }
        }
        Check::SchubertDescending => {
            let lm = tables.schubert(w).leading_monomial(TermOrder::DESCENDING_LEX)?;
            let wt = MarkedChain::full(leaping_chain(w)).weight();
            if lm != wt {
                out.push(Failure::new(w, wt, lm));
            }
        }
        Check::Staircase => {
            let lm = tables.grothendieck(w).top_component()?.leading_monomial(TermOrder::DESCENDING_LEX)?;
            let wt = MarkedChain::minimal(staircase_chain(w)).weight();
            if lm != wt {
                out.push(Failure::new(w, &wt, format!("top component leads with {lm}")));
            }
            if w.n() <= 5 {
                let best = max_heavy_weight(w, guard)?;
                if best != wt {
                    out.push(Failure::new(w, wt, format!("heaviest heavy chain weight {best}")));
                }
            }
        }
        Check::ReverseInterpolating => {
            let actual = component_leaders(tables.grothendieck(w), ell, raj, TermOrder::DESCENDING_LEX)?;
            let predicted = reverse_interpolating_prediction(w);
            if actual != predicted {
                out.push(Failure::new(w, show(&predicted), show(&actual)));
            }
        }
        Check::Equivalence => {
            let g = grothendieck_via_chains(w, guard)?;
            if &g != tables.grothendieck(w) {
                out.push(Failure::new(w, tables.grothendieck(w), format!("chains give {g}")));
            }
            let s = schubert_via_chains(w, guard)?;
            if &s != tables.schubert(w) {
                out.push(Failure::new(w, tables.schubert(w), format!("chains give {s}")));
            }
        }
        Check::Audit => {
            for c in enumerate_chains(w, guard)? {
                let violations = check_invariants(&run_audit(&c));
                if !violations.is_empty() {
                    let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
                    out.push(Failure::new(w, format!("clean audit of {c}"), text.join("; ")));
                }
            }
        }
        Check::StaircaseHeavy => {
            let c = staircase_chain(w);
            if !is_heavy(&c) {
                out.push(Failure::new(
                    w,
                    format!("{} minimal markings", crate::statistics::orr_index(w)),
                    format!("{} in {c}", minimal_markings(&c).len()),
                ));
            }
        }
        Check::Interpolating => {
            let m = crate::chains::chain_length(w);
            let weights: BTreeSet<ExponentVector> = (0..=m)
                .map(|p| interpolating_marked(w, p).map(|x| x.weight()))
                .collect::<Result<_, _>>()?;
            let expected: BTreeSet<ExponentVector> = leads(w).into_iter().collect();
            if weights != expected {
                let e: Vec<ExponentVector> = expected.into_iter().collect();
                let a: Vec<ExponentVector> = weights.into_iter().collect();
                out.push(Failure::new(w, show(&e), show(&a)));
            }
        }
        Check::Greedy => {
            let wt = MarkedChain::full(greedy_chain(w)).weight();
            let c = w.lehmer_code();
            if wt != c {
                out.push(Failure::new(w, c, wt));
            }
        }
        Check::Nested => {
            let dwt = MarkedChain::minimal(nested_chain(w)).dual_weight();
            let o = orr(w);
            if dwt != o {
                out.push(Failure::new(w, o, dwt));
            }
        }
    }
    Ok(out)
}
