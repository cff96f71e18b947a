//! Numerical tolerances shared across the crate.
//!
//! Error grows by roughly one decimal digit per four letters of a word, so
//! the ladder has three rungs: algebraic identities, geometric point tests,
//! and long-word (length above 12) tests.

/// Algebraic identities on normalized matrices (determinant, inverses).
pub const ALGEBRAIC: f64 = 1e-12;

/// Geometric point tests: "on the circle", point equality, pairing boundary error.
pub const GEOMETRIC: f64 = 1e-9;

/// Tests over words longer than twelve letters.
pub const LONG_WORD: f64 = 1e-6;

/// Half-width of the band around `tr^2 = 4` that is reported instead of classified.
pub const TRACE_BOUNDARY: f64 = 1e-9;

/// Minimum chordal gap between two circles of a configuration.
pub const DISJOINTNESS: f64 = 1e-9;

/// Minimum distance to `I` (up to sign) for a word to count as nontrivial.
pub const IDENTITY_DISTANCE: f64 = 1e-6;

/// Boundary samples used when certifying a pairing.
pub const PAIRING_SAMPLES: usize = 64;
