//! Crate-wide error type.
//!
//! Domain errors carry enough context to name the offending object (the
//! violating lattice point, the non-simplicial cell, the failing loop) so
//! that callers — in particular the CLI — can report them without holding on
//! to intermediate state.

use thiserror::Error;

/// Every fallible operation in the crate returns this error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A lattice point failed a structural invariant (wrong degree, wrong
    /// form, coordinates out of range).
    #[error("invalid lattice point: {0}")]
    InvalidPoint(String),

    /// A weight function's domain is not the one the operation requires.
    #[error("wrong weight domain: {0}")]
    WrongDomain(String),

    /// A weight is not convex on its domain; carries the violating point.
    #[error("weight not convex: no supporting function at {point}")]
    NonConvex {
        /// Human-readable coordinates of the unsupported point.
        point: String,
    },

    /// A subdivision is not generic: some cell is not a triangle or some
    /// domain point is not a cell vertex.  Never silently triangulated.
    #[error("subdivision not generic: {0}")]
    NonGeneric(String),

    /// Graph assembly failed (legs that do not meet in triples, fragments
    /// from a single face left dangling, …).
    #[error("locus assembly: {0}")]
    Assembly(String),

    /// A monodromy path violates the incidence preconditions.
    #[error("invalid monodromy path: {0}")]
    BadPath(String),

    /// Loops at a site do not compose to the identity.
    #[error("loops do not compose to identity: {0}")]
    BadLoops(String),

    /// A fiber type that the construction never produces was requested.
    #[error("unsupported fiber assignment: {0}")]
    BadFiber(String),

    /// Polytope construction failed (unbounded start, empty interior, …).
    #[error("polytope: {0}")]
    Polytope(String),

    /// The dual-base identification failed to match the two graphs; carries
    /// the first mismatch.
    #[error("base identification mismatch: {0}")]
    Mismatch(String),

    /// Numeric failure in the floating-point modules (eigenvalue iteration
    /// did not converge, residual too large, singular change of variables).
    #[error("numeric: {0}")]
    Numeric(String),

    /// The slice reduction diverged; the residual history is preserved.
    #[error("slice reduction diverged after {} steps (residuals {history:?})", history.len())]
    Diverged {
        /// Off-slice residual after each completed step.
        history: Vec<f64>,
    },

    /// Malformed textual input (rationals, JSON payloads, grids).
    #[error("parse: {0}")]
    Parse(String),
}
