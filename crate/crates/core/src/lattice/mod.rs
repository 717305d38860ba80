//! Divisor-class arithmetic on polarized integer lattices.
//!
//! A [`SurfaceModel`] carries the Gram matrix of the intersection pairing in
//! a named basis, together with the canonical class. The supported models
//! are the blowups of `P^2` at 2..=6 general points (del Pezzo surfaces),
//! `P^1 x P^1`, the cubic scroll `Bl_1 P^2`, and arbitrary polarized
//! lattices supplied by the caller (rational or K3).

mod bpf;
mod positivity;

pub use bpf::{bpf_decompose, bpf_generators};
pub use positivity::{
    enumerate_lines, h0_certificate, h0_rational, kv_vanishing_certificate, positivity,
    H0Certificate, Positivity,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("class has {got} coefficients but the lattice has rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("malformed class {class}: C^2 + C.K = {value} is odd")]
    ParityViolation { class: String, value: i64 },
    #[error("{op} is not supported on {kind}")]
    Unsupported { op: &'static str, kind: String },
    #[error("invalid surface model: {0}")]
    InvalidSurface(String),
    #[error("cannot parse class {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("no vanishing certificate for the nef part of {class}")]
    Uncertified { class: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizedKind {
    RationalSurface,
    K3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceKind {
    DelPezzoBlowup { points: usize },
    QuadricSurface,
    ScrollLattice,
    GeneralPolarized { tag: PolarizedKind },
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::DelPezzoBlowup { points } => write!(f, "blowup of P^2 at {points} points"),
            SurfaceKind::QuadricSurface => f.write_str("P^1 x P^1"),
            SurfaceKind::ScrollLattice => f.write_str("cubic scroll lattice"),
            SurfaceKind::GeneralPolarized { tag: PolarizedKind::K3 } => f.write_str("K3 lattice"),
            SurfaceKind::GeneralPolarized { tag: PolarizedKind::RationalSurface } => {
                f.write_str("polarized rational lattice")
            }
        }
    }
}

/// Integer coefficient vector in the basis of some [`SurfaceModel`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass {
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        Self { coeffs: vec![0; rank] }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl From<Vec<i64>> for DivisorClass {
    fn from(coeffs: Vec<i64>) -> Self {
        Self::new(coeffs)
    }
}

fn zip_with(a: &DivisorClass, b: &DivisorClass, op: impl Fn(i64, i64) -> i64) -> DivisorClass {
    assert_eq!(a.rank(), b.rank(), "adding classes of different rank");
    DivisorClass::new(a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| op(x, y)).collect())
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass::new(rhs.coeffs.iter().map(|c| self * c).collect())
    }
}

/// A class together with a signed count of marked points on a curve, used
/// for degree bookkeeping of restrictions such as `O_C(3L - E + p + q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointTwistedClass {
    pub class: DivisorClass,
    pub point_shift: i64,
}

impl Add for &PointTwistedClass {
    type Output = PointTwistedClass;
    fn add(self, rhs: &PointTwistedClass) -> PointTwistedClass {
        PointTwistedClass {
            class: &self.class + &rhs.class,
            point_shift: self.point_shift + rhs.point_shift,
        }
    }
}

/// Deserialization runs [`SurfaceModel::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSurfaceModel")]
pub struct SurfaceModel {
    kind: SurfaceKind,
    gram: Vec<Vec<i64>>,
    canonical: DivisorClass,
    basis: Vec<String>,
}

#[derive(Deserialize)]
struct RawSurfaceModel {
    kind: SurfaceKind,
    gram: Vec<Vec<i64>>,
    canonical: DivisorClass,
    basis: Vec<String>,
}

impl TryFrom<RawSurfaceModel> for SurfaceModel {
    type Error = LatticeError;

    fn try_from(raw: RawSurfaceModel) -> Result<Self, LatticeError> {
        let model = Self::from_parts_unchecked(raw.kind, raw.gram, raw.canonical, raw.basis);
        model.validate()?;
        Ok(model)
    }
}

impl SurfaceModel {
    /// `Bl_k P^2` in the basis `L, E1, .., Ek`.
    pub fn del_pezzo(points: usize) -> Result<Self, LatticeError> {
        if !(2..=6).contains(&points) {
            return Err(LatticeError::InvalidSurface(format!(
                "del Pezzo blowups are supported for 2..=6 points, got {points}"
            )));
        }
        let (gram, canonical) = blowup_lattice(points);
        let mut basis = vec!["L".to_string()];
        basis.extend((1..=points).map(|i| format!("E{i}")));
        Ok(Self { kind: SurfaceKind::DelPezzoBlowup { points }, gram, canonical, basis })
    }

    /// `P^1 x P^1`; the class `(a, b)` has bidegree `(a, b)`.
    pub fn quadric() -> Self {
        Self {
            kind: SurfaceKind::QuadricSurface,
            gram: vec![vec![0, 1], vec![1, 0]],
            canonical: DivisorClass::new(vec![-2, -2]),
            basis: vec!["F1".into(), "F2".into()],
        }
    }

    /// `Bl_1 P^2` in the basis `L, E`; the scroll embedding is `2L - E`.
    pub fn scroll() -> Self {
        let (gram, canonical) = blowup_lattice(1);
        Self {
            kind: SurfaceKind::ScrollLattice,
            gram,
            canonical,
            basis: vec!["L".into(), "E".into()],
        }
    }

    pub fn general(
        gram: Vec<Vec<i64>>,
        canonical: Vec<i64>,
        basis: Vec<String>,
        tag: PolarizedKind,
    ) -> Result<Self, LatticeError> {
        let model = Self {
            kind: SurfaceKind::GeneralPolarized { tag },
            gram,
            canonical: DivisorClass::new(canonical),
            basis,
        };
        model.validate()?;
        Ok(model)
    }

    /// Assembles a model without validation, for fault-injection tests.
    /// Operations on an invalid model return errors or wrong numbers.
    pub fn from_parts_unchecked(
        kind: SurfaceKind,
        gram: Vec<Vec<i64>>,
        canonical: DivisorClass,
        basis: Vec<String>,
    ) -> Self {
        Self { kind, gram, canonical, basis }
    }

    /// Checks the structural invariants of the model.
    pub fn validate(&self) -> Result<(), LatticeError> {
        let n = self.basis.len();
        if n == 0 {
            return Err(LatticeError::InvalidSurface("empty basis".into()));
        }
        if self.gram.len() != n || self.gram.iter().any(|row| row.len() != n) {
            return Err(LatticeError::InvalidSurface(format!("Gram matrix is not {n}x{n}")));
        }
        if self.canonical.rank() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, got: self.canonical.rank() });
        }
        for i in 0..n {
            for j in 0..i {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(LatticeError::InvalidSurface(format!(
                        "Gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        match self.kind {
            SurfaceKind::DelPezzoBlowup { points } => {
                let (gram, canonical) = blowup_lattice(points);
                if gram != self.gram {
                    return Err(LatticeError::InvalidSurface("blowup Gram matrix must be diag(1, -1, ..)".into()));
                }
                if canonical != self.canonical {
                    return Err(LatticeError::InvalidSurface("blowup canonical class must be -3L + sum E_i".into()));
                }
            }
            SurfaceKind::QuadricSurface if self.canonical.coeffs() != [-2, -2] => {
                return Err(LatticeError::InvalidSurface("quadric canonical class must be (-2,-2)".into()));
            }
            SurfaceKind::GeneralPolarized { tag: PolarizedKind::K3 } if !self.canonical.is_zero() => {
                return Err(LatticeError::InvalidSurface("K3 canonical class must vanish".into()));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn anticanonical(&self) -> DivisorClass {
        -&self.canonical
    }

    pub fn is_rational(&self) -> bool {
        !matches!(self.kind, SurfaceKind::GeneralPolarized { tag: PolarizedKind::K3 })
    }

    /// Number of blown-up points for del Pezzo models.
    pub fn blown_up_points(&self) -> Option<usize> {
        match self.kind {
            SurfaceKind::DelPezzoBlowup { points } => Some(points),
            _ => None,
        }
    }

    pub fn class(&self, coeffs: &[i64]) -> Result<DivisorClass, LatticeError> {
        let c = DivisorClass::new(coeffs.to_vec());
        self.check(&c)?;
        Ok(c)
    }

    /// Parses sums such as `5L - 2E1 - E2` or `F1 + 2F2` in this basis.
    pub fn parse_class(&self, input: &str) -> Result<DivisorClass, LatticeError> {
        let err = |reason: &str| LatticeError::Parse { input: input.to_string(), reason: reason.to_string() };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        if compact == "0" {
            return Ok(DivisorClass::zero(self.rank()));
        }
        // longest names first so that e.g. "E" never shadows "E1"
        let mut names: Vec<(usize, &str)> = self.basis.iter().map(String::as_str).enumerate().collect();
        names.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));

        let mut coeffs = vec![0i64; self.rank()];
        let bytes = compact.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = 1;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
            } else if pos != 0 {
                return Err(err("expected '+' or '-'"));
            }
            let digits_start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let mult: i64 = if digits_start == pos {
                1
            } else {
                compact[digits_start..pos].parse().map_err(|_| err("coefficient out of range"))?
            };
            let rest = &compact[pos..];
            let (idx, name) = names
                .iter()
                .find(|(_, n)| rest.starts_with(n))
                .ok_or_else(|| err("unknown basis element"))?;
            coeffs[*idx] += sign * mult;
            pos += name.len();
        }
        Ok(DivisorClass::new(coeffs))
    }

    /// Renders a class in this basis, e.g. `5L - 2E1 - E2`.
    pub fn format_class(&self, c: &DivisorClass) -> String {
        let mut out = String::new();
        for (coef, name) in c.coeffs().iter().zip(&self.basis) {
            if *coef == 0 {
                continue;
            }
            let abs = coef.unsigned_abs();
            if out.is_empty() {
                if *coef < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *coef < 0 { " - " } else { " + " });
            }
            if abs != 1 {
                out.push_str(&abs.to_string());
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    fn check(&self, c: &DivisorClass) -> Result<(), LatticeError> {
        if c.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), got: c.rank() });
        }
        Ok(())
    }

    fn pairing(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        let mut total = 0;
        for (i, ai) in a.coeffs().iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.coeffs().iter().enumerate() {
                total += ai * self.gram[i][j] * bj;
            }
        }
        total
    }

    fn unsupported(&self, op: &'static str) -> LatticeError {
        LatticeError::Unsupported { op, kind: self.kind.to_string() }
    }
}

fn blowup_lattice(points: usize) -> (Vec<Vec<i64>>, DivisorClass) {
    let n = points + 1;
    let mut gram = vec![vec![0; n]; n];
    gram[0][0] = 1;
    for (i, row) in gram.iter_mut().enumerate().skip(1) {
        row[i] = -1;
    }
    let mut k = vec![1; n];
    k[0] = -3;
    (gram, DivisorClass::new(k))
}

/// Intersection number `a . b`.
pub fn intersect(s: &SurfaceModel, a: &DivisorClass, b: &DivisorClass) -> Result<i64, LatticeError> {
    s.check(a)?;
    s.check(b)?;
    Ok(s.pairing(a, b))
}

/// Arithmetic genus `1 + (C^2 + C.K)/2`.
pub fn adjunction_genus(s: &SurfaceModel, c: &DivisorClass) -> Result<i64, LatticeError> {
    s.check(c)?;
    let value = s.pairing(c, c) + s.pairing(c, &s.canonical);
    if value % 2 != 0 {
        return Err(LatticeError::ParityViolation { class: s.format_class(c), value });
    }
    Ok(1 + value / 2)
}

/// Degree `-K . C` in the anticanonical embedding.
pub fn anticanonical_degree(s: &SurfaceModel, c: &DivisorClass) -> Result<i64, LatticeError> {
    s.check(c)?;
    if !s.is_rational() {
        return Err(s.unsupported("anticanonical degree"));
    }
    Ok(-s.pairing(c, &s.canonical))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct K3Stats {
    pub genus: i64,
    pub degree: i64,
    pub h0: i64,
}

/// Genus, degree and section count of a smooth curve class on a K3.
pub fn k3_stats(s: &SurfaceModel, c: &DivisorClass, h: &DivisorClass) -> Result<K3Stats, LatticeError> {
    if s.is_rational() {
        return Err(s.unsupported("K3 curve statistics"));
    }
    let square = intersect(s, c, c)?;
    if square % 2 != 0 {
        return Err(LatticeError::ParityViolation { class: s.format_class(c), value: square });
    }
    let genus = 1 + square / 2;
    let degree = intersect(s, c, h)?;
    Ok(K3Stats { genus, degree, h0: 1 + genus })
}

/// Degree on `C` of `B|_C` twisted by `point_shift` marked points.
pub fn restricted_degree(
    s: &SurfaceModel,
    c: &DivisorClass,
    b: &DivisorClass,
    point_shift: i64,
) -> Result<i64, LatticeError> {
    Ok(intersect(s, c, b)? + point_shift)
}
