//! Lines, nef/big/ample tests, vanishing certificates and section counts.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{DivisorClass, LatticeError, SurfaceKind, SurfaceModel};

/// On `Bl_k P^2` with `k <= 6`, a class `aL - sum b_i E_i` with `c.K = -1`
/// and `c^2 = -1` has `|a| <= 3` and `|b_i| <= 3`: Cauchy–Schwarz on
/// `sum b_i = 3a - 1`, `sum b_i^2 = a^2 + 1` gives `(3a-1)^2 <= k(a^2+1)`.
const LINE_COEFF_BOUND: i64 = 3;

static LINE_CACHE: [OnceLock<Vec<DivisorClass>>; 7] = [const { OnceLock::new() }; 7];

/// All `(-1)`-curves of a del Pezzo blowup, sorted.
pub fn enumerate_lines(s: &SurfaceModel) -> Result<Vec<DivisorClass>, LatticeError> {
    let points = s.blown_up_points().ok_or_else(|| s.unsupported("line enumeration"))?;
    Ok(LINE_CACHE[points].get_or_init(|| search_lines(s)).clone())
}

fn search_lines(s: &SurfaceModel) -> Vec<DivisorClass> {
    let rank = s.rank();
    let span = 2 * LINE_COEFF_BOUND + 1;
    let total = (span as u64).pow(rank as u32);
    let mut found = BTreeSet::new();
    let mut coeffs = vec![0i64; rank];
    for mut code in 0..total {
        for c in coeffs.iter_mut() {
            *c = (code % span as u64) as i64 - LINE_COEFF_BOUND;
            code /= span as u64;
        }
        let c = DivisorClass::new(coeffs.clone());
        if s.pairing(&c, &c) == -1 && s.pairing(&c, s.canonical()) == -1 {
            found.insert(c);
        }
    }
    found.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Positivity {
    pub nef: bool,
    pub big: bool,
    pub ample: bool,
}

pub fn positivity(s: &SurfaceModel, c: &DivisorClass) -> Result<Positivity, LatticeError> {
    s.check(c)?;
    match s.kind() {
        SurfaceKind::QuadricSurface => {
            let (a, b) = (c.coeffs()[0], c.coeffs()[1]);
            let nef = a >= 0 && b >= 0;
            let ample = a > 0 && b > 0;
            Ok(Positivity { nef, big: nef && a * b > 0, ample })
        }
        SurfaceKind::DelPezzoBlowup { .. } => {
            let square = s.pairing(c, c);
            let dots: Vec<i64> = enumerate_lines(s)?.iter().map(|l| s.pairing(c, l)).collect();
            let nef = dots.iter().all(|&x| x >= 0);
            let ample = dots.iter().all(|&x| x > 0) && square > 0;
            Ok(Positivity { nef, big: nef && square > 0, ample })
        }
        _ => Err(s.unsupported("positivity")),
    }
}

/// True iff `B - K` is nef and big, so that `H^i(O(B)) = 0` for `i > 0`.
pub fn kv_vanishing_certificate(s: &SurfaceModel, b: &DivisorClass) -> Result<bool, LatticeError> {
    let shifted = b - s.canonical();
    let p = positivity(s, &shifted)?;
    Ok(p.nef && p.big)
}

/// How an `h^0` value was obtained: the class splits as a nef part plus
/// fixed lines, and the nef part has no higher cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H0Certificate {
    pub class: DivisorClass,
    pub nef_part: DivisorClass,
    pub fixed_lines: Vec<DivisorClass>,
    /// Set when `-K . D < 0` (or a negative bidegree), forcing `h^0 = 0`.
    pub not_effective: bool,
    pub h0: i64,
}

/// `h^0(O(C))` on a del Pezzo blowup or the quadric, with its derivation.
///
/// Any line `l` with `D . l < 0` is a fixed component of `|D|`, so it is
/// peeled off; the residual nef class has `h^0 = 1 + (D^2 - D.K)/2`.
pub fn h0_certificate(s: &SurfaceModel, c: &DivisorClass) -> Result<H0Certificate, LatticeError> {
    s.check(c)?;
    match s.kind() {
        SurfaceKind::QuadricSurface => {
            let (a, b) = (c.coeffs()[0], c.coeffs()[1]);
            let effective = a >= 0 && b >= 0;
            Ok(H0Certificate {
                class: c.clone(),
                nef_part: c.clone(),
                fixed_lines: Vec::new(),
                not_effective: !effective,
                h0: if effective { (a + 1) * (b + 1) } else { 0 },
            })
        }
        SurfaceKind::DelPezzoBlowup { .. } => {
            let lines = enumerate_lines(s)?;
            let anti = s.anticanonical();
            let mut d = c.clone();
            let mut fixed = Vec::new();
            loop {
                // -K is ample, so every effective class has -K.D >= 0 and
                // each peel lowers -K.D by one
                if s.pairing(&d, &anti) < 0 {
                    return Ok(H0Certificate {
                        class: c.clone(),
                        nef_part: d,
                        fixed_lines: fixed,
                        not_effective: true,
                        h0: 0,
                    });
                }
                match lines.iter().find(|l| s.pairing(&d, l) < 0) {
                    Some(l) => {
                        d = &d - l;
                        fixed.push(l.clone());
                    }
                    None => break,
                }
            }
            // on a valid lattice d - K is ample, so this only trips on a
            // corrupted model
            if !d.is_zero() && !kv_vanishing_certificate(s, &d)? {
                return Err(LatticeError::Uncertified { class: s.format_class(c) });
            }
            let chi = 1 + (s.pairing(&d, &d) - s.pairing(&d, s.canonical())) / 2;
            Ok(H0Certificate { class: c.clone(), nef_part: d, fixed_lines: fixed, not_effective: false, h0: chi })
        }
        _ => Err(s.unsupported("h0")),
    }
}

pub fn h0_rational(s: &SurfaceModel, c: &DivisorClass) -> Result<i64, LatticeError> {
    h0_certificate(s, c).map(|cert| cert.h0)
}

/// `C . l` for every line.
#[cfg(test)]
pub(crate) fn line_pairings(s: &SurfaceModel, c: &DivisorClass) -> Result<Vec<i64>, LatticeError> {
    enumerate_lines(s)?.iter().map(|l| super::intersect(s, c, l)).collect()
}
