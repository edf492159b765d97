//! Exact decision procedures, relation calculus and explicit matrix
//! constructions for scalar sums of projections.
//!
//! The central object is the set of real scalars `λ` for which `λ·1` can be
//! written as a sum of `n` orthogonal projections on a Hilbert space. For
//! `n ≥ 5` that set is a closed segment `[α_n, β_n]` with
//! `α_n, β_n = (n ∓ √(n²−4n))/2` plus two discrete rational tails; for
//! `n ≤ 4` it is an explicit list. This crate makes the surrounding
//! mathematics executable:
//!
//! * [`exactnum`] — exact rationals and quadratic irrationals, so every
//!   comparison and orbit step is decided without floating error;
//! * [`spectra`] — segment endpoints, certified small-`n` membership, the
//!   interval self-map `f(λ) = n−1−1/(λ−1)` and its orbit dynamics;
//! * [`relations`] — free `*`-polynomials, their evaluation on matrix
//!   tuples, seminorm lower bounds and system-to-single-relation rewriting;
//! * [`flatten`] — polynomials close to the identity that vanish at
//!   prescribed small roots, and the induced relation transforms;
//! * [`synth`] — explicit projection tuples: exact combinatorial
//!   constructions, a numerical feasibility solver, δ-approximate
//!   representations and a verification oracle;
//! * [`classify`] — per-`(n, λ)` classification dossiers (trace, type I,
//!   exactness, nuclearity, simplicity, stability) and spectrum computations
//!   inside type I and UHF algebras.

pub mod classify;
pub mod exactnum;
pub mod flatten;
pub mod linalg;
pub mod relations;
pub mod spectra;
pub mod synth;

pub use classify::{Dossier, SupernaturalNumber, Verdict};
pub use exactnum::{ComplexRational, ExactNumError, QuadraticReal, Rational};
pub use relations::{MatrixTuple, NcPoly};
pub use spectra::{Segment, SegmentPosition, SigmaStatus, SigmaTag};
pub use synth::ProjectionTuple;
