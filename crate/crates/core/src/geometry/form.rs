use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::{GeometryError, ProjPoint};
use crate::algebra::{format_rational, parse_rational, q_int, AlgElement, Poly, Rational};

/// Exponent vector of a monomial in `X0..X3`.
pub type Exponent = [u8; 4];

/// A nonzero homogeneous cubic in four variables with rational coefficients.
///
/// Smoothness is not part of the type; constructions check the gradient at
/// the points they touch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm {
    terms: BTreeMap<Exponent, Rational>,
}

impl CubicForm {
    pub fn new(terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Result<Self, GeometryError> {
        let mut map: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.iter().map(|&x| x as u32).sum::<u32>() != 3 {
                return Err(GeometryError::Invalid(format!(
                    "monomial {e:?} is not of degree 3"
                )));
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(GeometryError::Invalid("cubic form is identically zero".into()));
        }
        Ok(Self { terms: map })
    }

    pub fn from_int_terms(terms: &[(Exponent, i64)]) -> Result<Self, GeometryError> {
        Self::new(terms.iter().map(|&(e, c)| (e, q_int(c))))
    }

    /// `X0^3 + X1^3 + X2^3 + X3^3`.
    pub fn fermat() -> Self {
        Self::diagonal([1, 1, 1, 1])
    }

    /// `a X0^3 + b X1^3 + c X2^3 + d X3^3`; panics if every weight is zero.
    pub fn diagonal(w: [i64; 4]) -> Self {
        Self::from_int_terms(&[
            ([3, 0, 0, 0], w[0]),
            ([0, 3, 0, 0], w[1]),
            ([0, 0, 3, 0], w[2]),
            ([0, 0, 0, 3], w[3]),
        ])
        .expect("diagonal cubic with all weights zero")
    }

    /// All 20 degree-3 exponent vectors in lexicographic order.
    pub fn all_exponents() -> Vec<Exponent> {
        let mut out = Vec::with_capacity(20);
        for a in 0..=3u8 {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    out.push([a, b, c, 3 - a - b - c]);
                }
            }
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    pub fn coeff(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Value at a coordinate vector over any étale algebra.
    pub fn eval_coords(&self, x: &[AlgElement; 4]) -> AlgElement {
        let alg = x[0].parent();
        let mut acc = alg.zero();
        for (e, c) in &self.terms {
            let mut m = alg.from_rational(c.clone());
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    m = &m * xi;
                }
            }
            acc = &acc + &m;
        }
        acc
    }

    /// Value at a point; zero iff the point lies on the surface.
    pub fn evaluate(&self, p: &ProjPoint) -> AlgElement {
        self.eval_coords(p.coords())
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.evaluate(p).is_zero()
    }

    /// Partial derivatives at a coordinate vector.
    pub fn gradient(&self, x: &[AlgElement; 4]) -> [AlgElement; 4] {
        let alg = x[0].parent();
        std::array::from_fn(|i| {
            let mut acc = alg.zero();
            for (e, c) in &self.terms {
                if e[i] == 0 {
                    continue;
                }
                let mut m = alg.from_rational(c * q_int(e[i] as i64));
                for (j, xj) in x.iter().enumerate() {
                    let k = if j == i { e[j] - 1 } else { e[j] };
                    for _ in 0..k {
                        m = &m * xj;
                    }
                }
                acc = &acc + &m;
            }
            acc
        })
    }

    /// Coefficients `c0..c3` of `g(s, t) = F(s p + t q) = sum c_i s^(3-i) t^i`.
    pub fn restrict(&self, p: &[AlgElement; 4], q: &[AlgElement; 4]) -> [AlgElement; 4] {
        let alg = p[0].parent();
        let mut acc: Vec<AlgElement> = vec![alg.zero(); 4];
        for (e, c) in &self.terms {
            // product of the linear forms (p_i + t q_i), coefficients by power of t
            let mut prod: Vec<AlgElement> = vec![alg.from_rational(c.clone())];
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    let mut next = vec![alg.zero(); prod.len() + 1];
                    for (j, a) in prod.iter().enumerate() {
                        next[j] = &next[j] + &(a * &p[i]);
                        next[j + 1] = &next[j + 1] + &(a * &q[i]);
                    }
                    prod = next;
                }
            }
            for (j, a) in prod.into_iter().enumerate() {
                acc[j] = &acc[j] + &a;
            }
        }
        [acc[0].clone(), acc[1].clone(), acc[2].clone(), acc[3].clone()]
    }

    pub fn to_json(&self) -> Value {
        let monomials: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({"exp": e, "coeff": format_rational(c)}))
            .collect();
        json!({"vars": 4, "degree": 3, "monomials": monomials})
    }

    pub fn from_json(v: &Value) -> Result<Self, GeometryError> {
        let bad = |m: &str| GeometryError::Invalid(format!("surface JSON: {m}"));
        if v.get("vars").and_then(Value::as_u64) != Some(4) {
            return Err(bad("\"vars\" must be 4"));
        }
        if v.get("degree").and_then(Value::as_u64) != Some(3) {
            return Err(bad("\"degree\" must be 3"));
        }
        let monos = v
            .get("monomials")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"monomials\" array"))?;
        let mut terms = Vec::with_capacity(monos.len());
        for m in monos {
            let exp = m
                .get("exp")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 4)
                .ok_or_else(|| bad("\"exp\" must be an array of 4 integers"))?;
            let mut e = [0u8; 4];
            for (slot, x) in e.iter_mut().zip(exp) {
                *slot = x
                    .as_u64()
                    .filter(|&k| k <= 3)
                    .ok_or_else(|| bad("exponent out of range"))? as u8;
            }
            let coeff = match m.get("coeff") {
                Some(Value::String(s)) => parse_rational(s)?,
                Some(Value::Number(n)) => parse_rational(&n.to_string())?,
                _ => return Err(bad("\"coeff\" must be a rational string")),
            };
            terms.push((e, coeff));
        }
        Self::new(terms)
    }
}

/// Restriction of a cubic form to a parametrized line,
/// `g(s, t) = sum c_i s^(3-i) t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCubic {
    pub coeffs: [AlgElement; 4],
}

impl BinaryCubic {
    /// True iff the line lies in the surface.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(AlgElement::is_zero)
    }

    /// The point `(s:t) = (0:1)` (the second basepoint) is a root.
    pub fn root_at_infinity(&self) -> bool {
        self.coeffs[3].is_zero()
    }

    /// The dehomogenized polynomial `g(1, t)`, for lines over `Q`.
    pub fn to_poly(&self) -> Option<Poly> {
        let cs: Option<Vec<Rational>> = self.coeffs.iter().map(AlgElement::as_rational).collect();
        cs.map(Poly::new)
    }
}
