//! Exact constructions on cubic surfaces in P^3 over Q, and a certificate
//! system for degree descent of 0-cycles on del Pezzo surfaces of degree
//! 1, 2 and 3.
//!
//! - [`algebra`]: rationals, polynomials, étale algebras `Q[t]/(f)`.
//! - [`geometry`]: cubic forms, points over étale algebras, residual points,
//!   the tangent process and the length-3 schemes cut by lines.
//! - [`chow`]: the square-zero Chow ring of a triple product of curves.
//! - [`descent`]: rewrite moves on 0-cycle decompositions, certificate
//!   search and replay.
//! - [`points`]: height-bounded point enumeration and saturation.
//! - [`cli`]: the `cubecycles` command line.

pub mod algebra;
pub mod geometry;
pub mod chow;
pub mod descent;
pub mod points;
pub mod cli;

pub use algebra::{AlgElement, AlgebraError, EtaleAlgebra, Poly, Rational};
