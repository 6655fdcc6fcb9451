//! Combinatorial skeleton of torus fibrations on the quintic threefold and
//! its mirror.
//!
//! The crate builds, from exact integer and rational arithmetic alone:
//!
//! * the lattice of quintic monomials and its 2-skeleton ([`lattice`]);
//! * regular subdivisions of the ten boundary 2-faces induced by convex
//!   weight functions, and the chamber structure on the space of weights
//!   ([`subdivision`]);
//! * the singular locus graph `Γ` of the associated torus fibration — a
//!   trivalent graph on the 2-skeleton whose vertices carry fiber types
//!   ([`locus`], [`fibers`]);
//! * the dual weight polytope, its face lattice, and the piecewise-linear
//!   identification of the two fibration bases ([`polytope`], [`dualbase`]);
//! * monodromy operators of the fibration around the singular sites
//!   ([`monodromy`]);
//! * floating-point verification layers: amoeba/moment-map localisation of
//!   actual hypersurface slices against the combinatorial graph
//!   ([`amoeba`]) and the reduction of quintic polynomials onto the
//!   one-parameter mirror slice ([`moduli`]);
//! * JSON wire formats for every artefact ([`wire`]).
//!
//! Everything structural is computed over `BigRational`; floats appear only
//! in the two verification layers.

pub mod dualbase;
pub mod error;
pub mod fibers;
pub mod lattice;
pub mod linalg;
pub mod locus;
pub mod monodromy;
pub mod polytope;
pub mod rat;
pub mod subdivision;

pub use error::Error;
pub use fibers::{FiberType, FibrationSummary, Side};
pub use lattice::{pairing, Monomial, NVec, ReducedM};
pub use locus::{LocusGraph, SiteKind};
pub use monodromy::{FiberLattice, MonodromyOperator, PathSpec};
pub use polytope::FaceLattice;
pub use rat::Rat;
pub use subdivision::WeightFunction;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
