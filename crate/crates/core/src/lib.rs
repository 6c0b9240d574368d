//! Exact piercing lattices for families of axis-parallel rectangles.
//!
//! A point set pierces a family `F` when every translate of every rectangle
//! in `F` (closed) contains a point. This crate decides the question for
//! planar lattices, computes lattices of maximum fundamental area (minimum
//! density), and verifies or searches periodic point sets that beat every
//! lattice.
//!
//! All geometry runs on [`Rational`]; no floating point enters a predicate.

pub mod decision;
pub mod error;
pub mod family;
pub mod lattice;
pub mod periodic;
pub mod rational;
pub mod solver;
pub mod svg;

pub use decision::{build_funnel, build_funnel_brute, is_piercing, maximal_rects, Funnel, MaxRect, PiercingVerdict};
pub use error::{Error, Result};
pub use family::{f0, f1, normalize_family, transform_family, AxisTransform, Point, Rect, RectFamily};
pub use lattice::{
    canonicalize, enumerate_points, gauss_reduce, metrics, CanonicalBasis, LatticeBasis, LatticeMetrics,
};
pub use rational::{rational_gcd, ExtendedLength, Rational};
