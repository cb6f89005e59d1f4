//! The Ψ/Ω audit of a climbing chain: a state machine that walks the links
//! of a chain with transfer, adjust and pass steps, together with checks of
//! the invariants every trace must satisfy.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::chains::{enumerate_chains, minimal_markings, runs, ChainError, ClimbingChain, EnumerationGuard};
use crate::permutation::{Link, Permutation};
use crate::statistics::{lex_last_lis, orr_index};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Initial,
    Transfer,
    Adjust,
    Pass,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Initial => "initial",
            StepKind::Transfer => "transfer",
            StepKind::Adjust => "adjust",
            StepKind::Pass => "pass",
        })
    }
}

/// `(Ψ_k, Ω_k)` and how they were reached. Pairs in `psi` are stored as
/// [`Link`] values but are not guaranteed to satisfy `i < j`; the structure
/// check reports it if they do not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditState {
    pub psi: BTreeSet<Link>,
    pub omega: BTreeSet<Link>,
    pub kind: StepKind,
    /// Pairs of `Ψ_{k-1}` that triggered an adjust step.
    pub culprits: Vec<Link>,
}

/// `Ψ_0`: for each `q`, the pairs `(q, α_2), ..., (q, α_k)` read off the
/// lexicographically last longest increasing subsequence from `q`.
pub fn initial_psi(w: &Permutation) -> BTreeSet<Link> {
    let mut psi = BTreeSet::new();
    for q in 1..w.n() {
        let alpha = lex_last_lis(w, q).expect("q is a valid position");
        psi.extend(alpha[1..].iter().map(|&b| Link::new(q, b)));
    }
    psi
}

pub fn initial_state(w: &Permutation) -> AuditState {
    AuditState {
        psi: initial_psi(w),
        omega: BTreeSet::new(),
        kind: StepKind::Initial,
        culprits: Vec::new(),
    }
}

/// One step of the audit. `current` is the permutation after `link` has
/// been applied.
pub fn audit_step(state: &AuditState, link: Link, current: &Permutation) -> AuditState {
    if state.psi.contains(&link) {
        let mut psi = state.psi.clone();
        psi.remove(&link);
        let mut omega = state.omega.clone();
        omega.insert(link);
        return AuditState {
            psi,
            omega,
            kind: StepKind::Transfer,
            culprits: Vec::new(),
        };
    }
    let culprits: Vec<Link> = state
        .psi
        .iter()
        .copied()
        .filter(|p| current.at(p.i) > current.at(p.j))
        .collect();
    if culprits.is_empty() {
        return AuditState {
            kind: StepKind::Pass,
            culprits,
            ..state.clone()
        };
    }
    let psi = state
        .psi
        .iter()
        .map(|p| Link {
            i: link.transpose(p.i),
            j: p.j,
        })
        .collect();
    AuditState {
        psi,
        omega: state.omega.clone(),
        kind: StepKind::Adjust,
        culprits,
    }
}

/// The full sequence of states `(Ψ_0, Ω_0), ..., (Ψ_m, Ω_m)` for a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditTrace {
    pub states: Vec<AuditState>,
    pub chain: ClimbingChain,
}

impl AuditTrace {
    pub fn terminal(&self) -> &AuditState {
        self.states.last().expect("a trace always has an initial state")
    }
}

pub fn run_audit(chain: &ClimbingChain) -> AuditTrace {
    let perms = chain.permutations();
    let mut states = vec![initial_state(chain.source())];
    for (k, &link) in chain.links().iter().enumerate() {
        let next = audit_step(&states[k], link, &perms[k + 1]);
        states.push(next);
    }
    AuditTrace {
        states,
        chain: chain.clone(),
    }
}

struct StepJson<'a> {
    k: usize,
    link: Option<Link>,
    state: &'a AuditState,
}

impl Serialize for StepJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs = |set: &BTreeSet<Link>| set.iter().map(|l| [l.i, l.j]).collect::<Vec<_>>();
        let mut st = s.serialize_struct("Step", 5)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("link", &self.link)?;
        st.serialize_field("kind", &self.state.kind)?;
        st.serialize_field("psi", &pairs(&self.state.psi))?;
        st.serialize_field("omega", &pairs(&self.state.omega))?;
        st.end()
    }
}

impl Serialize for AuditTrace {
    /// `{"permutation", "chain", "steps": [{k, link, kind, psi, omega}, ...]}`
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let steps: Vec<StepJson> = self
            .states
            .iter()
            .enumerate()
            .map(|(k, state)| StepJson {
                k,
                link: k.checked_sub(1).map(|p| self.chain.links()[p]),
                state,
            })
            .collect();
        let mut st = s.serialize_struct("AuditTrace", 3)?;
        st.serialize_field("permutation", self.chain.source())?;
        st.serialize_field("chain", &self.chain)?;
        st.serialize_field("steps", &steps)?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    /// `Ω_0 = ∅ ⊆ Ω_1 ⊆ ... ⊆ Ω_m ⊆ C`.
    OmegaMonotone,
    /// `Ω_k` only holds links among the first `k`.
    OmegaPrefix,
    /// A link in `Ω_m` entered through a transfer at its own step.
    TransferIdentity,
    /// `#Ψ_k + #Ω_k = |orr(w)|`.
    CountConserved,
    /// `Ψ_m = ∅` and `#Ω_m = |orr(w)|`.
    TerminalPsiEmpty,
    /// Within each row `q` of `Ψ_k`, `q < β_1` and the values under `w^(k)` increase.
    PsiStructure,
    /// An adjust step's culprit `(a', b')` has `a' = i_k` and `b' > j_k`.
    CulpritShape,
    /// Each run holds at most one link of `Ω_m`.
    OnePerRun,
    /// `#M(C) >= |orr(w)|`.
    MarkingLowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: Invariant,
    pub step: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(k) => write!(f, "{:?} at step {k}: {}", self.invariant, self.detail),
            None => write!(f, "{:?}: {}", self.invariant, self.detail),
        }
    }
}

pub fn markings_lower_bound_check(chain: &ClimbingChain) -> bool {
    minimal_markings(chain).len() as u64 >= orr_index(chain.source())
}

/// Every invariant violated by `trace`; empty when the trace is sound.
pub fn check_invariants(trace: &AuditTrace) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut flag = |invariant, step, detail: String| out.push(Violation { invariant, step, detail });
    let links = trace.chain.links();
    let perms = trace.chain.permutations();
    let total = orr_index(trace.chain.source());
    let m = links.len();

    if !trace.states[0].omega.is_empty() {
        flag(Invariant::OmegaMonotone, Some(0), "Ω_0 is not empty".into());
    }
    for (k, state) in trace.states.iter().enumerate() {
        if k > 0 && !trace.states[k - 1].omega.is_subset(&state.omega) {
            flag(Invariant::OmegaMonotone, Some(k), "Ω shrank".into());
        }
        if let Some(stray) = state.omega.iter().find(|l| !links[..k].contains(l)) {
            flag(Invariant::OmegaPrefix, Some(k), format!("{stray} is not among the first {k} links"));
        }
        let count = (state.psi.len() + state.omega.len()) as u64;
        if count != total {
            flag(Invariant::CountConserved, Some(k), format!("#Ψ + #Ω = {count}, expected {total}"));
        }
        let mut rows: Vec<usize> = state.psi.iter().map(|l| l.i).collect();
        rows.dedup();
        for q in rows {
            let betas: Vec<usize> = state.psi.iter().filter(|l| l.i == q).map(|l| l.j).collect();
            let w = &perms[k];
            let values: Vec<usize> = std::iter::once(q).chain(betas.iter().copied()).map(|p| w.at(p)).collect();
            if q >= betas[0] || values.windows(2).any(|v| v[0] >= v[1]) {
                flag(Invariant::PsiStructure, Some(k), format!("row {q} holds {betas:?}"));
            }
        }
        if state.kind == StepKind::Adjust {
            let link = links[k - 1];
            for c in &state.culprits {
                if c.i != link.i || c.j <= link.j {
                    flag(Invariant::CulpritShape, Some(k), format!("culprit {c} for link {link}"));
                }
            }
        }
    }
    let last = trace.terminal();
    if !last.psi.is_empty() || last.omega.len() as u64 != total {
        flag(
            Invariant::TerminalPsiEmpty,
            Some(m),
            format!("#Ψ_m = {}, #Ω_m = {}, |orr| = {total}", last.psi.len(), last.omega.len()),
        );
    }
    for (p, link) in links.iter().enumerate() {
        if !last.omega.contains(link) {
            continue;
        }
        let (before, after) = (&trace.states[p], &trace.states[p + 1]);
        let mut grown = before.omega.clone();
        grown.insert(*link);
        let mut shrunk = before.psi.clone();
        let removed = shrunk.remove(link);
        if after.kind != StepKind::Transfer || after.omega != grown || !removed || after.psi != shrunk {
            flag(Invariant::TransferIdentity, Some(p + 1), format!("{link} did not enter by transfer"));
        }
    }
    for run in runs(&trace.chain) {
        let hits = links[run.clone()].iter().filter(|l| last.omega.contains(l)).count();
        if hits > 1 {
            flag(Invariant::OnePerRun, None, format!("run {run:?} holds {hits} links of Ω_m"));
        }
    }
    if !markings_lower_bound_check(&trace.chain) {
        flag(
            Invariant::MarkingLowerBound,
            None,
            format!("#M(C) = {} < {total}", minimal_markings(&trace.chain).len()),
        );
    }
    out
}

/// Chains that failed the audit, each with its violations.
pub type FailedChains = Vec<(ClimbingChain, Vec<Violation>)>;

/// Audits every climbing chain of `w` in parallel, returning the chains
/// that violate some invariant, in enumeration order.
pub fn audit_all_chains(
    w: &Permutation,
    guard: EnumerationGuard,
) -> Result<(usize, FailedChains), ChainError> {
    let chains = enumerate_chains(w, guard)?;
    let bad = chains
        .par_iter()
        .filter_map(|c| {
            let v = check_invariants(&run_audit(c));
            (!v.is_empty()).then(|| (c.clone(), v))
        })
        .collect();
    Ok((chains.len(), bad))
}
