//! Exact computations for the open-closed mirror symmetry of ℂ³/G and its
//! toric crepant resolutions.
//!
//! The pipeline, one module per stage:
//!
//! * [`group`] — the diagonal abelian group G ⊂ SL(3,ℂ): fermionic shifts,
//!   ages, isotropy subgroups and the canonical (α, β) presentation.
//! * [`lattice`] — the lattice of invariants, the cone generators ṽ and the
//!   lattice points of the junior triangle.
//! * [`triangulate`] — all fine unimodular triangulations, flops, regularity.
//! * [`charges`] — intersection numbers, curve relations, charge bases and the
//!   brane-extended charge vector.
//! * [`gamma`] and [`series`] — Γ-ratio kernels and truncated Puiseux series.
//! * [`resolution`] — open-closed mirror map, superpotential W and
//!   Picard–Fuchs checks on the resolution side.
//! * [`orbifold`] — orbifold mirror map and disc potential.
//! * [`correspondence`] — change of variables and the coefficientwise
//!   comparison between both sides.
//! * [`io`] — group specs, JSON artifacts and DOT export.
//!
//! All arithmetic is exact. The kernels in [`gamma`] and the coefficient type of
//! [`series::QSeries`] are generic over [`scalar::Scalar`]; the concrete aliases
//! below fix the exact choice used throughout.

// Dense matrix and tableau code reads more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod charges;
pub mod correspondence;
pub mod error;
pub mod gamma;
pub mod group;
pub mod io;
pub mod job;
pub mod lattice;
pub mod linalg;
pub mod orbifold;
pub mod resolution;
pub mod scalar;
pub mod series;
pub mod triangulate;

pub use error::{Error, Result};

/// Exact rational numbers.
pub type Q = num_rational::BigRational;

/// Exact truncated series.
pub type Series = series::QSeries<Q>;
