//! Classification of `(r, n, d, g)` queries with derivation traces.
//!
//! Every General verdict carries a trace: a chain of rule applications
//! ending in a ledger axiom. The rules are
//!
//! * `AddLine`: `(d-1, g) -> (d, g)` for `r >= 3`;
//! * `AddCanonical`: `(d-6, g-8) -> (d, g)` for `(3, 2)` and
//!   `(d-8, g-10) -> (d, g)` for `(4, 1)`;
//! * `Downgrade`: `(3, 2, d, g) -> (3, 1, d, g)`;
//!
//! tried in that order, with the ledger last.

mod exceptional;
pub mod ledger;

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use exceptional::{exceptional_descriptor, exceptional_descriptors, ExceptionalDescriptor};
pub use ledger::{
    composite_invariants, glue_side_conditions, side_condition_check, unquoted_entries, CasePattern, Glue,
    Inequality, JustificationTag, Ledger, LedgerEntry, LedgerError, QuoteTable, Relation, SideConditionReport,
};

use crate::numerology::{rho, BnIndex};

/// The `(r, n)` pairs for which a general hypersurface section can be
/// general at all.
pub const SUPPORTED_PAIRS: [(i64, i64); 5] = [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)];

/// Largest degree or genus accepted by [`Engine::classify`]; traces grow
/// linearly in `d`.
pub const MAX_QUERY: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Case {
    pub r: i64,
    pub n: i64,
    pub d: i64,
    pub g: i64,
}

impl Case {
    pub fn new(r: i64, n: i64, d: i64, g: i64) -> Self {
        Self { r, n, d, g }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, n={}, d={}, g={})", self.r, self.n, self.d, self.g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvalidReason {
    UnsupportedPair { r: i64, n: i64 },
    BadIndex { d: i64, g: i64 },
    /// Serialized as a decimal string; rho is unbounded.
    NegativeRho {
        #[serde(serialize_with = "decimal")]
        rho: BigInt,
    },
}

fn decimal<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::UnsupportedPair { r, n } => write!(f, "(r, n) = ({r}, {n}) is not a supported pair"),
            InvalidReason::BadIndex { d, g } => write!(f, "need d >= 1 and g >= 0 (d={d}, g={g})"),
            InvalidReason::NegativeRho { rho } => write!(f, "rho = {rho} < 0"),
        }
    }
}

/// `Ok` iff `c` is a Brill–Noether case for a supported pair.
pub fn domain_check(c: &Case) -> Result<(), InvalidReason> {
    if !SUPPORTED_PAIRS.contains(&(c.r, c.n)) {
        return Err(InvalidReason::UnsupportedPair { r: c.r, n: c.n });
    }
    let ix = BnIndex::new(c.r, c.d, c.g).map_err(|_| InvalidReason::BadIndex { d: c.d, g: c.g })?;
    let value = rho(&ix);
    if value < BigInt::from(0) {
        return Err(InvalidReason::NegativeRho { rho: value });
    }
    Ok(())
}

pub fn in_domain(c: &Case) -> bool {
    domain_check(c).is_ok()
}

/// In the domain and not on the exceptional list.
pub fn is_candidate(c: &Case) -> bool {
    in_domain(c) && exceptional_descriptor(c).is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    AddLine,
    AddCanonical,
    Downgrade,
    LedgerBase,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::AddLine => "AddLine",
            Rule::AddCanonical => "AddCanonical",
            Rule::Downgrade => "Downgrade",
            Rule::LedgerBase => "LedgerBase",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceNode {
    pub id: usize,
    pub case: Case,
    pub rule: Rule,
    pub children: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<LedgerEntry>,
}

/// Flat proof tree; node 0 is the root and children always have larger ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    pub root: usize,
    pub nodes: Vec<TraceNode>,
}

impl DerivationTrace {
    pub fn root_case(&self) -> Case {
        self.nodes[self.root].case
    }

    /// Citations of the ledger leaves, deduplicated, in trace order.
    pub fn citations(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for n in &self.nodes {
            if let Some(e) = &n.ledger {
                if !out.contains(&e.citation) {
                    out.push(e.citation.clone());
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Invalid { reason: InvalidReason },
    General { trace: DerivationTrace },
    Exceptional { descriptor: ExceptionalDescriptor },
}

/// Cheap summary of a classification; `General` carries the rule used at
/// the root of the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Invalid,
    Exceptional,
    General(Rule),
    Underivable,
    TooLarge,
}

impl Status {
    /// One-character cell code used by sweep tables.
    pub fn symbol(self) -> char {
        match self {
            Status::Invalid => '.',
            Status::Exceptional => 'X',
            Status::General(Rule::AddLine) => 'L',
            Status::General(Rule::AddCanonical) => 'C',
            Status::General(Rule::Downgrade) => 'D',
            Status::General(Rule::LedgerBase) => 'B',
            Status::Underivable => '!',
            Status::TooLarge => '?',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("incomplete ledger: no derivation for {0}")]
    IncompleteLedger(Case),
    #[error("query {0} exceeds the supported size (d, g <= {MAX_QUERY})")]
    TooLarge(Case),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace is empty or its root is not node 0")]
    BadRoot,
    #[error("node {0}: id does not match its position")]
    BadId(usize),
    #[error("node {0}: child id out of range or not larger than the parent")]
    BadChild(usize),
    #[error("node {0}: not reachable from the root")]
    Unreachable(usize),
    #[error("node {0}: {1} is not in the domain or is exceptional")]
    NotCandidate(usize, Case),
    #[error("node {0}: {1} premise has the wrong shape")]
    BadPremise(usize, Rule),
    #[error("node {0}: ledger leaf does not match any ledger entry")]
    UnknownLedgerLeaf(usize),
    #[error("node {0}: termination witness does not decrease")]
    NoProgress(usize),
}

// Cell codes; the numeric order is irrelevant.
const EXCEPTIONAL: u8 = 1;
const UNDERIVABLE: u8 = 2;
const VIA_ADD_LINE: u8 = 3;
const VIA_ADD_CANONICAL: u8 = 4;
const VIA_DOWNGRADE: u8 = 5;
const VIA_LEDGER: u8 = 6;
const OUT_OF_DOMAIN: u8 = 7;

fn is_general(code: u8) -> bool {
    matches!(code, VIA_ADD_LINE | VIA_ADD_CANONICAL | VIA_DOWNGRADE | VIA_LEDGER)
}

/// `(d, g)` shift of the AddCanonical premise, if the pair has the rule.
pub fn canonical_shift(r: i64, n: i64) -> Option<(i64, i64)> {
    match (r, n) {
        (3, 2) => Some((6, 8)),
        (4, 1) => Some((8, 10)),
        _ => None,
    }
}

/// Smallest degree with `rho >= 0` in genus `g`.
pub fn min_degree(r: i64, g: i64) -> i64 {
    let num = r * g + r * (r + 1);
    let den = r + 1;
    ((num + den - 1) / den).max(1)
}

/// One genus of one `(r, n)` pair. Cells are stored for
/// `d_min..=horizon`; every degree above the horizon is derived by
/// `AddLine` if `tail_general`, and underivable otherwise.
#[derive(Debug, Clone)]
struct Row {
    d_min: i64,
    cells: Vec<u8>,
    tail_general: bool,
}

impl Row {
    fn horizon(&self) -> i64 {
        self.d_min + self.cells.len() as i64 - 1
    }

    fn get(&self, d: i64) -> u8 {
        if d < self.d_min {
            OUT_OF_DOMAIN
        } else if d <= self.horizon() {
            self.cells[(d - self.d_min) as usize]
        } else if self.tail_general {
            VIA_ADD_LINE
        } else {
            UNDERIVABLE
        }
    }
}

#[derive(Debug, Default)]
struct Table {
    rows: HashMap<(i64, i64), Vec<Row>>,
}

/// Classifier over an immutable ledger. Derivability rows are computed
/// on demand and cached; all methods take `&self` and are thread-safe.
#[derive(Debug)]
pub struct Engine {
    ledger: Ledger,
    table: Mutex<Table>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(Ledger::bundled())
    }
}

impl Engine {
    pub fn new(ledger: Ledger) -> Self {
        Self { ledger, table: Mutex::new(Table::default()) }
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }

    pub fn classify(&self, q: Case) -> Result<Verdict, EngineError> {
        if let Err(reason) = domain_check(&q) {
            return Ok(Verdict::Invalid { reason });
        }
        if let Some(descriptor) = exceptional_descriptor(&q) {
            return Ok(Verdict::Exceptional { descriptor });
        }
        if q.d > MAX_QUERY || q.g > MAX_QUERY {
            return Err(EngineError::TooLarge(q));
        }
        let mut table = self.table.lock().unwrap_or_else(|p| p.into_inner());
        self.ensure(&mut table, q.r, q.n, q.g);
        if !is_general(self.code(&table, &q)) {
            return Err(EngineError::IncompleteLedger(q));
        }
        Ok(Verdict::General { trace: self.build_trace(&table, q) })
    }

    /// Verdict kind and first rule, without building a trace.
    pub fn status(&self, q: Case) -> Status {
        if !in_domain(&q) {
            return Status::Invalid;
        }
        if exceptional_descriptor(&q).is_some() {
            return Status::Exceptional;
        }
        if q.d > MAX_QUERY || q.g > MAX_QUERY {
            return Status::TooLarge;
        }
        let mut table = self.table.lock().unwrap_or_else(|p| p.into_inner());
        self.ensure(&mut table, q.r, q.n, q.g);
        match self.code(&table, &q) {
            VIA_ADD_LINE => Status::General(Rule::AddLine),
            VIA_ADD_CANONICAL => Status::General(Rule::AddCanonical),
            VIA_DOWNGRADE => Status::General(Rule::Downgrade),
            VIA_LEDGER => Status::General(Rule::LedgerBase),
            _ => Status::Underivable,
        }
    }

    /// In-domain, non-exceptional cases in the box with no derivation.
    pub fn completeness_audit(&self, r: i64, n: i64, d_max: i64, g_max: i64) -> Vec<Case> {
        let d_max = d_max.min(MAX_QUERY);
        let g_max = g_max.min(MAX_QUERY);
        if !SUPPORTED_PAIRS.contains(&(r, n)) || g_max < 0 {
            return Vec::new();
        }
        let mut table = self.table.lock().unwrap_or_else(|p| p.into_inner());
        self.ensure(&mut table, r, n, g_max);
        let mut out = Vec::new();
        for g in 0..=g_max {
            for d in min_degree(r, g)..=d_max {
                let c = Case::new(r, n, d, g);
                if self.code(&table, &c) == UNDERIVABLE {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Minimal-degree cases that no generic rule reaches, sorted by `(g, d)`.
    ///
    /// A case is minimal if it is a candidate and `(d-1, g)` is not. It is
    /// dropped if AddCanonical or Downgrade has a candidate premise, or if a
    /// generic ledger entry covers it; what remains needs a dedicated
    /// argument.
    pub fn frontier(&self, r: i64, n: i64, g_max: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        if !SUPPORTED_PAIRS.contains(&(r, n)) {
            return out;
        }
        for g in 0..=g_max.min(MAX_QUERY) {
            let d_min = min_degree(r, g);
            let top = exceptional::max_exceptional_degree(r, n, g).map_or(d_min, |e| e.max(d_min - 1) + 1);
            for d in d_min..=top {
                let c = Case::new(r, n, d, g);
                if !is_candidate(&c) || is_candidate(&Case::new(r, n, d - 1, g)) {
                    continue;
                }
                if self.canonical_premise(&c).is_some() {
                    continue;
                }
                if (r, n) == (3, 1) && is_candidate(&Case::new(3, 2, d, g)) {
                    continue;
                }
                if self.ledger.lookup(&c).is_some_and(|e| e.tag.is_generic()) {
                    continue;
                }
                out.push((d, g));
            }
        }
        out
    }

    /// The AddCanonical premise of `c`, if the rule applies: a candidate
    /// case, or an aux ledger configuration.
    fn canonical_premise(&self, c: &Case) -> Option<Case> {
        let (dd, dg) = canonical_shift(c.r, c.n)?;
        let p = Case::new(c.r, c.n, c.d - dd, c.g - dg);
        if is_candidate(&p) || self.ledger.lookup_aux(&p).is_some() {
            Some(p)
        } else {
            None
        }
    }

    fn code(&self, table: &Table, c: &Case) -> u8 {
        if !in_domain(c) {
            return OUT_OF_DOMAIN;
        }
        if c.r == 2 {
            return if self.ledger.lookup(c).is_some() { VIA_LEDGER } else { UNDERIVABLE };
        }
        table.rows[&(c.r, c.n)][c.g as usize].get(c.d)
    }

    /// Makes rows `0..=g` available for `(r, n)` and its dependencies.
    fn ensure(&self, table: &mut Table, r: i64, n: i64, g: i64) {
        if r == 2 || g < 0 {
            return;
        }
        if (r, n) == (3, 1) {
            self.ensure(table, 3, 2, g);
        }
        let have = table.rows.get(&(r, n)).map_or(0, Vec::len) as i64;
        for gi in have..=g {
            let row = self.compute_row(table, r, n, gi);
            table.rows.entry((r, n)).or_default().push(row);
        }
    }

    fn compute_row(&self, table: &Table, r: i64, n: i64, g: i64) -> Row {
        let d_min = min_degree(r, g);
        // past the horizon nothing changes: no exceptional cells, no ledger
        // seeds, and every dependency row is already in its tail
        let mut horizon = d_min;
        if let Some(e) = exceptional::max_exceptional_degree(r, n, g) {
            horizon = horizon.max(e + 1);
        }
        for seed in self.ledger.seeds_in_row(r, n, g) {
            horizon = horizon.max(seed.unwrap_or(d_min));
        }
        if let Some((dd, dg)) = canonical_shift(r, n) {
            if g >= dg {
                horizon = horizon.max(table.rows[&(r, n)][(g - dg) as usize].horizon() + dd);
            }
            for aux in self.ledger.aux_cases() {
                if aux.r == r && aux.n == n && aux.g + dg == g {
                    horizon = horizon.max(aux.d + dd);
                }
            }
        }
        if (r, n) == (3, 1) {
            horizon = horizon.max(table.rows[&(3, 2)][g as usize].horizon());
        }

        let mut row = Row { d_min, cells: Vec::with_capacity((horizon - d_min + 1) as usize), tail_general: false };
        for d in d_min..=horizon {
            let c = Case::new(r, n, d, g);
            let code = if exceptional_descriptor(&c).is_some() {
                EXCEPTIONAL
            } else if d > d_min && is_general(row.get(d - 1)) {
                VIA_ADD_LINE
            } else if self.canonical_premise(&c).is_some_and(|p| p.g < 0 || self.premise_general(table, &p)) {
                VIA_ADD_CANONICAL
            } else if (r, n) == (3, 1) && is_general(table.rows[&(3, 2)][g as usize].get(d)) {
                VIA_DOWNGRADE
            } else if self.ledger.lookup(&c).is_some() {
                VIA_LEDGER
            } else {
                UNDERIVABLE
            };
            row.cells.push(code);
        }
        row.tail_general = is_general(row.get(horizon));
        row
    }

    fn premise_general(&self, table: &Table, p: &Case) -> bool {
        if self.ledger.lookup_aux(p).is_some() {
            return true;
        }
        in_domain(p) && is_general(table.rows[&(p.r, p.n)][p.g as usize].get(p.d))
    }

    fn build_trace(&self, table: &Table, root: Case) -> DerivationTrace {
        let mut nodes = Vec::new();
        let mut cur = Some(root);
        while let Some(c) = cur.take() {
            let id = nodes.len();
            let aux = self.ledger.lookup_aux(&c).filter(|_| !in_domain(&c));
            let (rule, next, ledger) = match aux {
                Some(entry) => (Rule::LedgerBase, None, Some(entry.clone())),
                None => match self.code(table, &c) {
                    VIA_ADD_LINE => (Rule::AddLine, Some(Case::new(c.r, c.n, c.d - 1, c.g)), None),
                    VIA_ADD_CANONICAL => (Rule::AddCanonical, self.canonical_premise(&c), None),
                    VIA_DOWNGRADE => (Rule::Downgrade, Some(Case::new(3, 2, c.d, c.g)), None),
                    VIA_LEDGER => (Rule::LedgerBase, None, self.ledger.lookup(&c).cloned()),
                    other => unreachable!("trace reached non-general cell {c} (code {other})"),
                },
            };
            let children = if next.is_some() { vec![id + 1] } else { Vec::new() };
            nodes.push(TraceNode { id, case: c, rule, children, ledger });
            cur = next;
        }
        DerivationTrace { root: 0, nodes }
    }

    /// Replays a trace independently of the cached table.
    pub fn check_trace(&self, trace: &DerivationTrace) -> Result<(), TraceError> {
        if trace.root != 0 || trace.nodes.is_empty() {
            return Err(TraceError::BadRoot);
        }
        let count = trace.nodes.len();
        let mut reached = vec![false; count];
        reached[0] = true;
        for (i, node) in trace.nodes.iter().enumerate() {
            if node.id != i {
                return Err(TraceError::BadId(i));
            }
            if node.children.iter().any(|&ch| ch <= i || ch >= count) {
                return Err(TraceError::BadChild(i));
            }
            if !reached[i] {
                return Err(TraceError::Unreachable(i));
            }
            for &ch in &node.children {
                reached[ch] = true;
            }
            let c = node.case;
            let is_aux_leaf = node.rule == Rule::LedgerBase && self.ledger.lookup_aux(&c).is_some();
            if !is_aux_leaf && !is_candidate(&c) {
                return Err(TraceError::NotCandidate(i, c));
            }
            let kids: Vec<Case> = node.children.iter().map(|&ch| trace.nodes[ch].case).collect();
            let premise_ok = match node.rule {
                Rule::AddLine => c.r >= 3 && kids == [Case::new(c.r, c.n, c.d - 1, c.g)],
                Rule::AddCanonical => match canonical_shift(c.r, c.n) {
                    Some((dd, dg)) => kids == [Case::new(c.r, c.n, c.d - dd, c.g - dg)],
                    None => false,
                },
                Rule::Downgrade => (c.r, c.n) == (3, 1) && kids == [Case::new(3, 2, c.d, c.g)],
                Rule::LedgerBase => {
                    let entry = if is_aux_leaf { self.ledger.lookup_aux(&c) } else { self.ledger.lookup(&c) };
                    if entry.is_none() || entry != node.ledger.as_ref() {
                        return Err(TraceError::UnknownLedgerLeaf(i));
                    }
                    kids.is_empty()
                }
            };
            if !premise_ok {
                return Err(TraceError::BadPremise(i, node.rule));
            }
            // (d, n-level) decreases: degree drops, or Downgrade moves n=1 to n=2
            for k in &kids {
                let progress = k.d < c.d || (k.d == c.d && c.n == 1 && k.n == 2);
                if !progress {
                    return Err(TraceError::NoProgress(i));
                }
            }
        }
        Ok(())
    }
}
