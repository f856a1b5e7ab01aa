//! Absolute tolerances shared across the crate. Operators here have O(1)
//! norms, so absolute comparisons are appropriate.

/// Tight numerical agreement.
pub const NUM: f64 = 1e-12;
/// Loose agreement; also the hard limit for discarded anti-Hermitian residue.
pub const LOOSE: f64 = 1e-9;
/// Idempotency, trace and positivity checks.
pub const CHECK: f64 = 1e-10;
/// Default classicality tolerance for scheme entries.
pub const CLASSICAL_EPS: f64 = 1e-10;
/// Entrywise distance below which two unit pseudo-projections are the same.
pub const DEDUP: f64 = 1e-10;
