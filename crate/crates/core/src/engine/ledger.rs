//! Base-case ledger: loading, validation and glue side conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::Case;
use crate::numerology::{rho, BnIndex};

pub const BUNDLED_LEDGER: &str = include_str!("../../data/ledger.toml");
pub const BUNDLED_QUOTES: &str = include_str!("../../data/quotes.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("ledger is not valid TOML: {0}")]
    Syntax(String),
    #[error("entry {index}: cannot parse case {text:?}")]
    BadCase { index: usize, text: String },
    #[error("entry {index} ({case}): unsupported (r, n) pair")]
    UnsupportedPair { index: usize, case: String },
    #[error("entry {index} ({case}): rho < 0 but the entry is not flagged aux")]
    NegativeRho { index: usize, case: String },
    #[error("entry {index} ({case}): wildcard entries cannot be aux")]
    AuxWildcard { index: usize, case: String },
    #[error("entry {index} ({case}): duplicate of an earlier entry")]
    Duplicate { index: usize, case: String },
    #[error("entry {index} ({case}): empty citation or quote")]
    MissingCitation { index: usize, case: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum JustificationTag {
    PlaneCurve,
    FromInter,
    Genus2,
    SkewLinesBase,
    CubicScroll,
    DelPezzoSurface,
    PlaneCurveStep,
    HyperplaneGlue,
    HyperplaneStep,
    TwoSecantLine,
}

impl JustificationTag {
    /// Tags that discharge every minimal-degree case of their kind, as
    /// opposed to seeding one specific frontier case.
    pub fn is_generic(self) -> bool {
        matches!(self, JustificationTag::PlaneCurve | JustificationTag::FromInter | JustificationTag::Genus2)
    }
}

/// `r n d g` with `*` allowed in the `d` and `g` slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CasePattern {
    pub r: i64,
    pub n: i64,
    pub d: Option<i64>,
    pub g: Option<i64>,
}

impl CasePattern {
    pub fn matches(&self, c: &Case) -> bool {
        self.r == c.r && self.n == c.n && self.d.is_none_or(|d| d == c.d) && self.g.is_none_or(|g| g == c.g)
    }

    pub fn is_exact(&self) -> bool {
        self.d.is_some() && self.g.is_some()
    }

    pub fn exact(&self) -> Option<Case> {
        Some(Case { r: self.r, n: self.n, d: self.d?, g: self.g? })
    }
}

impl fmt::Display for CasePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slot = |v: Option<i64>| v.map_or("*".to_string(), |x| x.to_string());
        write!(f, "{} {} {} {}", self.r, self.n, slot(self.d), slot(self.g))
    }
}

impl FromStr for CasePattern {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let [r, n, d, g] = parts.as_slice() else {
            return Err(());
        };
        let num = |t: &str| t.parse::<i64>().map_err(|_| ());
        let slot = |t: &str| if t == "*" { Ok(None) } else { num(t).map(Some) };
        Ok(Self { r: num(r)?, n: num(n)?, d: slot(d)?, g: slot(g)? })
    }
}

impl Serialize for CasePattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CasePattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(|()| serde::de::Error::custom(format!("bad case pattern {text:?}")))
    }
}

/// Curve of degree `d2` and genus `g2` in a hyperplane, attached through
/// `n` points, with the normal bundle twisted by `O(-k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Glue {
    pub d2: i64,
    pub g2: i64,
    pub n: i64,
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub case: CasePattern,
    pub tag: JustificationTag,
    pub citation: String,
    pub quote: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Case>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub aux: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glue: Option<Glue>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLedger {
    #[serde(default)]
    entry: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    case: String,
    tag: JustificationTag,
    citation: String,
    quote: String,
    #[serde(default)]
    premises: Vec<String>,
    #[serde(default)]
    aux: bool,
    note: Option<String>,
    glue: Option<Glue>,
}

/// Immutable set of ledger entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ledger {
    entries: Vec<LedgerEntry>,
}

fn parse_case(index: usize, text: &str) -> Result<Case, LedgerError> {
    let bad = || LedgerError::BadCase { index, text: text.to_string() };
    CasePattern::from_str(text).map_err(|_| bad())?.exact().ok_or_else(bad)
}

impl Ledger {
    pub fn bundled() -> Self {
        Self::from_toml_str(BUNDLED_LEDGER).expect("bundled ledger is valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self, LedgerError> {
        let raw: RawLedger = toml::from_str(text).map_err(|e| LedgerError::Syntax(e.to_string()))?;
        let mut entries = Vec::with_capacity(raw.entry.len());
        let mut seen = BTreeSet::new();
        for (index, e) in raw.entry.into_iter().enumerate() {
            let case = CasePattern::from_str(&e.case)
                .map_err(|_| LedgerError::BadCase { index, text: e.case.clone() })?;
            let label = case.to_string();
            if !super::SUPPORTED_PAIRS.contains(&(case.r, case.n)) {
                return Err(LedgerError::UnsupportedPair { index, case: label });
            }
            if e.citation.trim().is_empty() || e.quote.trim().is_empty() {
                return Err(LedgerError::MissingCitation { index, case: label });
            }
            match case.exact() {
                Some(c) if !e.aux => {
                    let in_range = BnIndex::new(c.r, c.d, c.g).map(|ix| rho(&ix) >= BigInt::from(0));
                    if in_range != Ok(true) {
                        return Err(LedgerError::NegativeRho { index, case: label });
                    }
                }
                None if e.aux => return Err(LedgerError::AuxWildcard { index, case: label }),
                _ => {}
            }
            if !seen.insert(case) {
                return Err(LedgerError::Duplicate { index, case: label });
            }
            let premises = e.premises.iter().map(|p| parse_case(index, p)).collect::<Result<Vec<_>, _>>()?;
            entries.push(LedgerEntry {
                case,
                tag: e.tag,
                citation: e.citation,
                quote: e.quote,
                premises,
                aux: e.aux,
                note: e.note,
                glue: e.glue,
            });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    /// Exact entries win over wildcard ones; aux entries are excluded.
    pub fn lookup(&self, c: &Case) -> Option<&LedgerEntry> {
        self.lookup_with(c, false)
    }

    pub fn lookup_aux(&self, c: &Case) -> Option<&LedgerEntry> {
        self.lookup_with(c, true)
    }

    fn lookup_with(&self, c: &Case, aux: bool) -> Option<&LedgerEntry> {
        let mut best: Option<&LedgerEntry> = None;
        for e in self.entries.iter().filter(|e| e.aux == aux && e.case.matches(c)) {
            if e.case.is_exact() {
                return Some(e);
            }
            best = best.or(Some(e));
        }
        best
    }

    /// Degrees in row `(r, n, g)` at which some non-aux entry applies; a
    /// wildcard degree is reported as `None`.
    pub(crate) fn seeds_in_row(&self, r: i64, n: i64, g: i64) -> Vec<Option<i64>> {
        self.entries
            .iter()
            .filter(|e| !e.aux && e.case.r == r && e.case.n == n && e.case.g.is_none_or(|x| x == g))
            .map(|e| e.case.d)
            .collect()
    }

    pub(crate) fn aux_cases(&self) -> impl Iterator<Item = Case> + '_ {
        self.entries.iter().filter(|e| e.aux).filter_map(|e| e.case.exact())
    }

    /// Returns a copy without entries matching `pred`, for fault injection.
    pub fn without(&self, pred: impl Fn(&LedgerEntry) -> bool) -> Self {
        Self { entries: self.entries.iter().filter(|e| !pred(e)).cloned().collect() }
    }
}

/// The accepted quote fragments, one per non-comment line.
#[derive(Debug, Clone)]
pub struct QuoteTable {
    quotes: BTreeSet<String>,
}

impl QuoteTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_QUOTES)
    }

    pub fn parse(text: &str) -> Self {
        let quotes = text
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect();
        Self { quotes }
    }

    pub fn contains(&self, quote: &str) -> bool {
        self.quotes.contains(quote)
    }
}

/// Ledger entries whose quote is missing from the table.
pub fn unquoted_entries<'a>(ledger: &'a Ledger, table: &QuoteTable) -> Vec<&'a LedgerEntry> {
    ledger.entries().iter().filter(|e| !table.contains(&e.quote)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub name: &'static str,
    pub lhs: i64,
    pub relation: Relation,
    pub rhs: i64,
    pub holds: bool,
}

impl Inequality {
    fn new(name: &'static str, lhs: i64, relation: Relation, rhs: i64) -> Self {
        let holds = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        };
        Self { name, lhs, relation, rhs, holds }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        let verdict = if self.holds { "ok" } else { "FAILS" };
        write!(f, "{}: {} {} {} ({})", self.name, self.lhs, rel, self.rhs, verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideConditionReport {
    pub r: i64,
    pub glue: Glue,
    /// `(r-2) n <= r d2 - (r-4)(g2-1) - k (r-2) d2`.
    pub chi_bound: Inequality,
    /// `n >= g2` for `k = 1`, else `n >= g2 - 1 + (k-1) d2`.
    pub twist_bound: Inequality,
    /// `n >= g2 - d2 + r`.
    pub smoothable: Inequality,
}

impl SideConditionReport {
    pub fn passes(&self) -> bool {
        self.chi_bound.holds && self.twist_bound.holds && self.smoothable.holds
    }
}

pub fn glue_side_conditions(r: i64, glue: Glue) -> SideConditionReport {
    let Glue { d2, g2, n, k } = glue;
    let chi_bound = Inequality::new("chi", (r - 2) * n, Relation::Le, r * d2 - (r - 4) * (g2 - 1) - k * (r - 2) * d2);
    let needed = if k == 1 { g2 } else { g2 - 1 + (k - 1) * d2 };
    let twist_bound = Inequality::new("h1", n, Relation::Ge, needed);
    let smoothable = Inequality::new("smoothable", n, Relation::Ge, g2 - d2 + r);
    SideConditionReport { r, glue, chi_bound, twist_bound, smoothable }
}

/// Side conditions of a glue-carrying entry; `None` for other entries.
pub fn side_condition_check(entry: &LedgerEntry) -> Option<SideConditionReport> {
    entry.glue.map(|glue| glue_side_conditions(entry.case.r, glue))
}

/// Degree and genus of `C` glued to a `(d2, g2)` curve through `n` points.
pub fn composite_invariants(f1: (i64, i64), d2: i64, g2: i64, n: i64) -> (i64, i64) {
    (f1.0 + d2, f1.1 + g2 + n - 1)
}

/// Ledger entries grouped by `(r, n)`, in file order.
pub fn entries_by_pair(ledger: &Ledger) -> BTreeMap<(i64, i64), Vec<&LedgerEntry>> {
    let mut out: BTreeMap<(i64, i64), Vec<&LedgerEntry>> = BTreeMap::new();
    for e in ledger.entries() {
        out.entry((e.case.r, e.case.n)).or_default().push(e);
    }
    out
}
