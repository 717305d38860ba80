//! Closed-form Brill–Noether arithmetic.
//!
//! Everything here is exact: inputs are machine integers, results are
//! [`BigInt`] so no intermediate product can overflow.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumerologyError {
    #[error("invalid index (r={r}, d={d}, g={g}): need r >= 2, d >= 1, g >= 0")]
    InvalidIndex { r: i64, d: i64, g: i64 },
    #[error("invalid twist (k={k}, n={n}): need k >= 0, n >= 1")]
    InvalidTwist { k: i64, n: i64 },
    #[error("hypersurface degree bound is only defined for r >= 2 (got r={0})")]
    AmbientTooSmall(i64),
    #[error("interpolation gates are only defined for twists 0, 1, 2 (got {0})")]
    UnsupportedTwist(u64),
    #[error("canonical reduction needs d > r and g > r (r={r}, d={d}, g={g})")]
    ReductionOutOfRange { r: i64, d: i64, g: i64 },
}

/// Ambient dimension, degree and genus of a map `C -> P^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BnIndex {
    r: i64,
    d: i64,
    g: i64,
}

impl BnIndex {
    pub fn new(r: i64, d: i64, g: i64) -> Result<Self, NumerologyError> {
        if r < 2 || d < 1 || g < 0 {
            return Err(NumerologyError::InvalidIndex { r, d, g });
        }
        Ok(Self { r, d, g })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn g(&self) -> i64 {
        self.g
    }

    fn big(&self) -> (BigInt, BigInt, BigInt) {
        (BigInt::from(self.r), BigInt::from(self.d), BigInt::from(self.g))
    }
}

/// Twist `O(-k)` of the normal bundle and the degree `n` of the hypersurface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistSpec {
    k: i64,
    n: i64,
}

impl TwistSpec {
    pub fn new(k: i64, n: i64) -> Result<Self, NumerologyError> {
        if k < 0 || n < 1 {
            return Err(NumerologyError::InvalidTwist { k, n });
        }
        Ok(Self { k, n })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn n(&self) -> i64 {
        self.n
    }
}

/// Brill–Noether number `(r+1)d - rg - r(r+1)`.
pub fn rho(ix: &BnIndex) -> BigInt {
    let (r, d, g) = ix.big();
    (&r + 1) * &d - &r * &g - &r * (&r + 1)
}

/// Dimension of the Brill–Noether component of the space of stable maps,
/// `(r+1)d - (r-3)(g-1)`.
pub fn moduli_dim(ix: &BnIndex) -> BigInt {
    let (r, d, g) = ix.big();
    (&r + 1) * &d - (&r - 3) * (&g - 1)
}

/// Degree of `N_f(-k)` for an unramified map: `det N_f = K_C + (r+1)H`,
/// shifted by `k` times the rank `r-1` times `d`.
pub fn twisted_normal_degree(ix: &BnIndex, k: u64) -> BigInt {
    let (r, d, g) = ix.big();
    let k = BigInt::from(k);
    (&r + 1) * &d + 2 * (&g - 1) - k * (&r - 1) * &d
}

/// Euler characteristic of `N_f(-k)` (Riemann–Roch for a rank `r-1` bundle).
pub fn chi_twisted_normal(ix: &BnIndex, k: u64) -> BigInt {
    let (r, _, g) = ix.big();
    twisted_normal_degree(ix, k) + (&r - 1) * (1 - g)
}

/// Largest hypersurface degree `n` that can cut a general point set for
/// curves in `P^r`: `floor((3r+3)/(r^2-r))` for `r >= 3`, and 2 for plane
/// curves (lines and conics are the only rational plane curves).
pub fn max_general_hypersurface_degree(r: i64) -> Result<i64, NumerologyError> {
    match r {
        i64::MIN..=1 => Err(NumerologyError::AmbientTooSmall(r)),
        2 => Ok(2),
        _ => {
            let r = BigInt::from(r);
            let num: BigInt = 3 * &r + 3;
            let den: BigInt = &r * &r - &r;
            // both positive here, so truncating division is the floor
            let q = num / den;
            Ok(i64::try_from(q).expect("quotient is at most 2"))
        }
    }
}

/// Triples `(d, g, r)` whose normal bundle fails interpolation even though
/// `d >= g + r`.
pub const INTERPOLATION_EXCEPTIONS: [(i64, i64, i64); 3] = [(5, 2, 3), (6, 2, 4), (7, 2, 5)];

/// The three numeric conditions behind the interpolation argument for
/// `N_f(-k)`, kept separate so traces can show which one failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateReport {
    /// `d >= g + r`, i.e. the general curve is nonspecial.
    pub nonspecial: bool,
    /// `(d, g, r)` is not one of [`INTERPOLATION_EXCEPTIONS`].
    pub not_exceptional: bool,
    pub chi: BigInt,
    /// `(r - 1) * g`, rank times genus.
    pub chi_bound: BigInt,
    pub chi_ok: bool,
}

impl GateReport {
    pub fn passes(&self) -> bool {
        self.nonspecial && self.not_exceptional && self.chi_ok
    }
}

pub fn interpolation_gate_report(ix: &BnIndex, k: u64) -> Result<GateReport, NumerologyError> {
    if k > 2 {
        return Err(NumerologyError::UnsupportedTwist(k));
    }
    let (r, d, g) = (ix.r, ix.d, ix.g);
    let nonspecial = BigInt::from(d) >= BigInt::from(g) + BigInt::from(r);
    let not_exceptional = !INTERPOLATION_EXCEPTIONS.contains(&(d, g, r));
    let chi = chi_twisted_normal(ix, k);
    let chi_bound = (BigInt::from(r) - 1) * BigInt::from(g);
    let chi_ok = chi >= chi_bound;
    Ok(GateReport { nonspecial, not_exceptional, chi, chi_bound, chi_ok })
}

/// Sufficient numeric test for `N_f(-k)` to satisfy interpolation.
pub fn interpolation_gates(ix: &BnIndex, k: u64) -> Result<bool, NumerologyError> {
    interpolation_gate_report(ix, k).map(|rep| rep.passes())
}

/// `rho(r, d - r, g - r - 1) - rho(r, d, g)`; identically zero.
pub fn rho_canonical_reduction_delta(ix: &BnIndex) -> Result<BigInt, NumerologyError> {
    let (r, d, g) = (ix.r, ix.d, ix.g);
    if d <= r || g <= r {
        return Err(NumerologyError::ReductionOutOfRange { r, d, g });
    }
    let reduced = BnIndex::new(r, d - r, g - r - 1)?;
    Ok(rho(&reduced) - rho(ix))
}
