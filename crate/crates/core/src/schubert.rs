//! Schubert calculus on the Grassmannian of lines `G(1,n)` in `P^n`.
//!
//! Classes are indexed by two-row partitions `n-1 >= a >= b >= 0`;
//! multiplication reduces to Pieri via the two-row Giambelli identity
//! `s[a,b] = s[a] s[b] - s[a+1] s[b-1]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchubertError {
    #[error("G(1,{0}) needs n >= 1")]
    InvalidAmbient(i64),
    #[error("partition ({a},{b}) does not fit G(1,{n})")]
    InvalidPartition { n: i64, a: i64, b: i64 },
    #[error("Pieri factor s[{p}] needs 1 <= p <= {max}")]
    InvalidPieri { p: i64, max: i64 },
    #[error("ambient mismatch: G(1,{0}) vs G(1,{1})")]
    AmbientMismatch(i64, i64),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoRowPartition {
    pub a: i64,
    pub b: i64,
}

impl TwoRowPartition {
    pub fn new(n: i64, a: i64, b: i64) -> Result<Self, SchubertError> {
        if !(n > a && a >= b && b >= 0) {
            return Err(SchubertError::InvalidPartition { n, a, b });
        }
        Ok(Self { a, b })
    }

    pub fn size(&self) -> i64 {
        self.a + self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertCycle {
    ambient_n: i64,
    #[serde(with = "term_list")]
    terms: BTreeMap<TwoRowPartition, i64>,
}

mod term_list {
    use super::TwoRowPartition;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    #[derive(Serialize, Deserialize)]
    struct Term {
        a: i64,
        b: i64,
        coeff: i64,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<TwoRowPartition, i64>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Term> = m.iter().rev().map(|(p, &coeff)| Term { a: p.a, b: p.b, coeff }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<TwoRowPartition, i64>, D::Error> {
        let v = Vec::<Term>::deserialize(d)?;
        let mut m = BTreeMap::new();
        for t in v {
            if t.coeff != 0 {
                *m.entry(TwoRowPartition { a: t.a, b: t.b }).or_insert(0) += t.coeff;
            }
        }
        m.retain(|_, c| *c != 0);
        Ok(m)
    }
}

impl SchubertCycle {
    pub fn zero(n: i64) -> Result<Self, SchubertError> {
        if n < 1 {
            return Err(SchubertError::InvalidAmbient(n));
        }
        Ok(Self { ambient_n: n, terms: BTreeMap::new() })
    }

    pub fn one(n: i64) -> Result<Self, SchubertError> {
        Self::sigma(n, 0, 0)
    }

    pub fn sigma(n: i64, a: i64, b: i64) -> Result<Self, SchubertError> {
        let mut c = Self::zero(n)?;
        c.terms.insert(TwoRowPartition::new(n, a, b)?, 1);
        Ok(c)
    }

    /// The point class `s[n-1,n-1]`.
    pub fn point(n: i64) -> Result<Self, SchubertError> {
        Self::sigma(n, n - 1, n - 1)
    }

    pub fn ambient_n(&self) -> i64 {
        self.ambient_n
    }

    pub fn terms(&self) -> impl Iterator<Item = (TwoRowPartition, i64)> + '_ {
        self.terms.iter().map(|(p, c)| (*p, *c))
    }

    pub fn coefficient(&self, a: i64, b: i64) -> i64 {
        self.terms.get(&TwoRowPartition { a, b }).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, p: TwoRowPartition, c: i64) {
        let e = self.terms.entry(p).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    fn add_scaled(&mut self, other: &SchubertCycle, scale: i64) {
        for (p, c) in &other.terms {
            self.add_term(*p, scale * c);
        }
    }

    pub fn add(&self, other: &SchubertCycle) -> Result<SchubertCycle, SchubertError> {
        same_ambient(self, other)?;
        let mut out = self.clone();
        out.add_scaled(other, 1);
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> SchubertCycle {
        let mut out = SchubertCycle { ambient_n: self.ambient_n, terms: BTreeMap::new() };
        out.add_scaled(self, k);
        out
    }
}

fn same_ambient(x: &SchubertCycle, y: &SchubertCycle) -> Result<(), SchubertError> {
    if x.ambient_n != y.ambient_n {
        return Err(SchubertError::AmbientMismatch(x.ambient_n, y.ambient_n));
    }
    Ok(())
}

/// Multiplication by `s[p]`, with `s[0] = 1` and `s[p] = 0` past the
/// top row length.
fn pieri_raw(p: i64, c: &SchubertCycle) -> SchubertCycle {
    let n = c.ambient_n;
    let mut out = SchubertCycle { ambient_n: n, terms: BTreeMap::new() };
    if p < 0 || p > n - 1 {
        return out;
    }
    for (lam, coeff) in &c.terms {
        let (a, b) = (lam.a, lam.b);
        for a2 in a..=n - 1 {
            let b2 = a + b + p - a2;
            if b2 < b {
                break;
            }
            if b2 <= a {
                out.add_term(TwoRowPartition { a: a2, b: b2 }, *coeff);
            }
        }
    }
    out
}

/// Horizontal-strip rule: `s[p] * s[a,b] = sum s[a',b']` over
/// `a'+b' = a+b+p`, `n-1 >= a' >= a >= b' >= b`.
pub fn pieri(n: i64, p: i64, c: &SchubertCycle) -> Result<SchubertCycle, SchubertError> {
    if c.ambient_n != n {
        return Err(SchubertError::AmbientMismatch(n, c.ambient_n));
    }
    if !(1..=n - 1).contains(&p) {
        return Err(SchubertError::InvalidPieri { p, max: n - 1 });
    }
    Ok(pieri_raw(p, c))
}

pub fn multiply(x: &SchubertCycle, y: &SchubertCycle) -> Result<SchubertCycle, SchubertError> {
    same_ambient(x, y)?;
    let mut out = SchubertCycle { ambient_n: x.ambient_n, terms: BTreeMap::new() };
    for (lam, coeff) in &x.terms {
        let (a, b) = (lam.a, lam.b);
        let main = pieri_raw(a, &pieri_raw(b, y));
        let correction = pieri_raw(a + 1, &pieri_raw(b - 1, y));
        out.add_scaled(&main, *coeff);
        out.add_scaled(&correction, -*coeff);
    }
    Ok(out)
}

pub fn power(x: &SchubertCycle, e: u32) -> Result<SchubertCycle, SchubertError> {
    let mut acc = SchubertCycle::one(x.ambient_n)?;
    for _ in 0..e {
        acc = multiply(&acc, x)?;
    }
    Ok(acc)
}

/// Coefficient of the point class.
pub fn top_degree(c: &SchubertCycle) -> i64 {
    c.coefficient(c.ambient_n - 1, c.ambient_n - 1)
}

impl fmt::Display for SchubertCycle {
    /// Largest partitions first, e.g. `s[3,1] + s[2,2]`; `s[a]` when `b = 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            let abs = c.unsigned_abs();
            match (i, *c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_one = p.a == 0 && p.b == 0;
            if abs != 1 || is_one {
                write!(f, "{abs}")?;
                if !is_one {
                    f.write_str("*")?;
                }
            }
            if is_one {
                continue;
            }
            if p.b == 0 {
                write!(f, "s[{}]", p.a)?;
            } else {
                write!(f, "s[{},{}]", p.a, p.b)?;
            }
        }
        Ok(())
    }
}

/// Parses expressions such as `s[2]^3`, `s[1]*s[2,1]` or `2*s[3,1] - s[2,2]`
/// in `G(1,n)`.
pub fn parse_cycle(n: i64, input: &str) -> Result<SchubertCycle, SchubertError> {
    let err = |reason: &str| SchubertError::Parse { input: input.to_string(), reason: reason.to_string() };
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty expression"));
    }
    let mut total = SchubertCycle::zero(n)?;
    // split into signed summands at top-level '+' / '-'
    let mut summands: Vec<(i64, String)> = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    let mut depth = 0;
    for ch in compact.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            if !cur.is_empty() {
                summands.push((sign, std::mem::take(&mut cur)));
            } else if !summands.is_empty() {
                return Err(err("empty summand"));
            }
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(err("trailing operator"));
    }
    summands.push((sign, cur));

    for (sign, summand) in summands {
        let mut term = SchubertCycle::one(n)?;
        let mut scalar = sign;
        for factor in summand.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                None => (factor, 1),
            };
            if let Ok(k) = base.parse::<i64>() {
                scalar = scalar
                    .checked_mul(k.checked_pow(exp).ok_or_else(|| err("scalar overflow"))?)
                    .ok_or_else(|| err("scalar overflow"))?;
                continue;
            }
            let inner = base
                .strip_prefix("s[")
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| err("expected s[a] or s[a,b]"))?;
            let parts: Vec<&str> = inner.split(',').collect();
            let num = |t: &str| t.parse::<i64>().map_err(|_| err("bad partition entry"));
            let cls = match parts.as_slice() {
                [a] => SchubertCycle::sigma(n, num(a)?, 0)?,
                [a, b] => SchubertCycle::sigma(n, num(a)?, num(b)?)?,
                _ => return Err(err("partition has more than two rows")),
            };
            term = multiply(&term, &power(&cls, exp)?)?;
        }
        total.add_scaled(&term, scalar);
    }
    Ok(total)
}
