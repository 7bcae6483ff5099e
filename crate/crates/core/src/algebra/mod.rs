//! Exact arithmetic: rationals, univariate polynomials and étale algebras
//! `Q[t]/(f)` with `f` monic and squarefree.
//!
//! Étale algebras are never factored up front. An operation that runs into a
//! zero divisor reports the factor of the modulus it found, and the caller
//! decides whether to split and retry on each component.

mod etale;
pub mod linalg;
mod poly;

pub use etale::{AlgElement, EtaleAlgebra};
pub use poly::Poly;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Normalized arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("elements belong to different algebras")]
    ParentMismatch,
    #[error("zero divisor found; modulus has the proper factor {factor}")]
    ZeroDivisorFound { factor: Poly },
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("modulus must be monic, squarefree and of degree >= 1: {0}")]
    BadModulus(String),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn q_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Monic gcd of two polynomials, `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    Poly::gcd(a, b)
}

/// True iff `gcd(f, f')` is constant.
pub fn is_squarefree(f: &Poly) -> Result<bool, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    Ok(Poly::gcd(f, &f.derivative()).is_constant())
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Accepts `"n"` and `"n/d"` with optional surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let err = || AlgebraError::Parse(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Polynomial as a JSON array of rational strings, lowest degree first.
pub fn poly_to_json(p: &Poly) -> serde_json::Value {
    serde_json::Value::Array(
        p.coeffs()
            .iter()
            .map(|c| serde_json::Value::String(format_rational(c)))
            .collect(),
    )
}

pub fn poly_from_json(v: &serde_json::Value) -> Result<Poly, AlgebraError> {
    let arr = v
        .as_array()
        .ok_or_else(|| AlgebraError::Parse(v.to_string()))?;
    let coeffs = arr
        .iter()
        .map(|c| match c {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(AlgebraError::Parse(other.to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(coeffs))
}
