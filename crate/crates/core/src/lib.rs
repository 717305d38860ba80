//! Exact arithmetic behind the classification of hyperplane and quadric
//! sections of Brill–Noether curves.

pub mod audits;
pub mod engine;
pub mod lattice;
pub mod numerology;
pub mod report;
pub mod schubert;
