//! The ten exceptional cases. These are axioms for the engine; their
//! non-generality is reproduced numerically by the audits.

use serde::Serialize;

use super::Case;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExceptionalDescriptor {
    pub case: Case,
    pub description: &'static str,
    /// Key accepted by `audits::run_audit`.
    pub audit_hook: &'static str,
}

const fn entry(r: i64, n: i64, d: i64, g: i64, description: &'static str, audit_hook: &'static str) -> ExceptionalDescriptor {
    ExceptionalDescriptor { case: Case { r, n, d, g }, description, audit_hook }
}

const TABLE: [ExceptionalDescriptor; 10] = [
    entry(3, 2, 4, 1, "complete intersection of two (2,2) curves", "3-2-4-1"),
    entry(3, 2, 5, 2, "10 general points on a (2,2) curve", "3-2-5-2"),
    entry(
        3,
        2,
        6,
        2,
        "12 points on a binodal (3,3) curve D with p1+..+p12 ~ O_D(2,2) on the normalization",
        "3-2-6-2",
    ),
    entry(3, 2, 6, 4, "complete intersection of (2,2) and (3,3) curves", "3-2-6-4"),
    entry(3, 2, 7, 5, "14 points on a (3,3) curve D with p1+..+p14 - O_D(2,2) effective", "3-2-7-5"),
    entry(3, 2, 8, 6, "16 general points on a (3,3) curve", "3-2-8-6"),
    entry(3, 1, 6, 4, "6 points on a conic", "3-1-6-4"),
    entry(4, 1, 8, 5, "complete intersection of three quadrics", "4-1-8-5"),
    entry(4, 1, 9, 6, "9 points on an elliptic normal quartic curve", "4-1-9-6"),
    entry(4, 1, 10, 7, "10 points on a quadric", "4-1-10-7"),
];

pub fn exceptional_descriptors() -> &'static [ExceptionalDescriptor] {
    &TABLE
}

pub fn exceptional_descriptor(c: &Case) -> Option<ExceptionalDescriptor> {
    TABLE.iter().find(|e| e.case == *c).copied()
}

/// Largest exceptional degree in row `(r, n, g)`.
pub(crate) fn max_exceptional_degree(r: i64, n: i64, g: i64) -> Option<i64> {
    TABLE.iter().filter(|e| (e.case.r, e.case.n, e.case.g) == (r, n, g)).map(|e| e.case.d).max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::in_domain;

    #[test]
    fn counts_per_pair() {
        let count = |r, n| TABLE.iter().filter(|e| (e.case.r, e.case.n) == (r, n)).count();
        assert_eq!((count(3, 2), count(3, 1), count(4, 1), count(2, 1), count(2, 2)), (6, 1, 3, 0, 0));
    }

    #[test]
    fn all_in_domain_and_hooks_unique() {
        let mut hooks: Vec<_> = TABLE.iter().map(|e| e.audit_hook).collect();
        hooks.sort();
        hooks.dedup();
        assert_eq!(hooks.len(), 10);
        assert!(TABLE.iter().all(|e| in_domain(&e.case)));
    }
}
