//! Exact symbolic engine for the rigid-biholomorphic equivalence problem of
//! 5-dimensional real hypersurfaces in complex 3-space with constant Levi
//! rank 1.
//!
//! The crate is organised around a small expression kernel with exact
//! Gaussian-rational evaluation ([`expr`], [`scalar`]), vector fields and
//! Cartan–Lie structure coefficients ([`fields`]), validated hypersurfaces
//! with their adapted frames and structure-equation checkers
//! ([`hypersurface`]), the primary/secondary invariants and the
//! model-equivalence classification ([`invariants`]), everything specific
//! to the light-cone model and its automorphisms ([`model`]), and exact
//! finite-dimensional Lie algebra machinery ([`liealg`]).
//!
//! All identity checking is probabilistic over exact rationals: an
//! "identically zero" verdict means "exactly zero at every sampled
//! admissible point" for a seeded, reproducible sample. Witnesses of
//! failure are exact.

pub mod expr;
pub mod fields;
pub mod hypersurface;
pub mod invariants;
pub mod liealg;
pub mod linalg;
pub mod model;
pub mod report;
pub mod scalar;
