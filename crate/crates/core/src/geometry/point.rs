use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{require_unit_ideal, GeometryError};
use crate::algebra::{
    format_rational, linalg, parse_rational, q_int, AlgElement, EtaleAlgebra, Rational,
};

/// A point of P^3 with coordinates in an étale algebra, stored normalized.
///
/// Normalization divides by the last coordinate that is a unit. When no
/// single coordinate is a unit (the point is split across components) it
/// divides by the first small integer combination of coordinates that is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: [AlgElement; 4],
}

fn same_parent(xs: &[AlgElement]) -> Result<(), GeometryError> {
    match xs.split_first() {
        Some((a, rest)) if rest.iter().any(|b| b.parent() != a.parent()) => {
            Err(GeometryError::AlgebraMismatch)
        }
        _ => Ok(()),
    }
}

/// A unit by which to normalize, or `None` if the elements do not generate
/// the unit ideal.
fn normalizing_unit(xs: &[AlgElement]) -> Option<AlgElement> {
    if let Some(u) = xs.iter().rev().find(|x| x.is_unit()) {
        return Some(u.clone());
    }
    let alg = xs[0].parent();
    let n = xs.len() as u32;
    (1..4u32.pow(n)).find_map(|code| {
        let mut acc = alg.zero();
        let mut c = code;
        for x in xs {
            acc = &acc + &x.scale(&q_int((c % 4) as i64));
            c /= 4;
        }
        acc.is_unit().then_some(acc)
    })
}

fn normalize(xs: [AlgElement; 4]) -> Result<[AlgElement; 4], GeometryError> {
    let u = normalizing_unit(&xs)
        .ok_or_else(|| GeometryError::Invalid("cannot normalize point".into()))?;
    let inv = u.invert()?;
    Ok(xs.map(|x| &x * &inv))
}

impl ProjPoint {
    pub fn new(coords: [AlgElement; 4]) -> Result<Self, GeometryError> {
        same_parent(&coords)?;
        require_unit_ideal(&coords, GeometryError::ZeroPoint)?;
        Ok(Self {
            coords: normalize(coords)?,
        })
    }

    pub fn rational(q: [Rational; 4]) -> Result<Self, GeometryError> {
        let alg = EtaleAlgebra::rationals();
        Self::new(q.map(|x| alg.from_rational(x)))
    }

    pub fn from_ints(v: [i64; 4]) -> Result<Self, GeometryError> {
        Self::rational(v.map(q_int))
    }

    pub fn coords(&self) -> &[AlgElement; 4] {
        &self.coords
    }

    pub fn algebra(&self) -> &EtaleAlgebra {
        self.coords[0].parent()
    }

    pub fn is_rational(&self) -> bool {
        self.algebra().is_rational()
    }

    /// Rational coordinates when the point is defined over `Q`.
    pub fn as_rationals(&self) -> Option<[Rational; 4]> {
        if !self.is_rational() {
            return None;
        }
        Some(self.coords.clone().map(|c| c.rep().coeff(0)))
    }

    /// Primitive integer representative with first nonzero entry positive.
    pub fn integer_coords(&self) -> Option<[BigInt; 4]> {
        let q = self.as_rationals()?;
        let l = q.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints = q.map(|c| (c * Rational::from_integer(l.clone())).to_integer());
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = ints.iter().find(|c| !c.is_zero()).map_or(1, |c| if c.is_negative() { -1 } else { 1 });
        for c in ints.iter_mut() {
            *c = &*c / &g * sign;
        }
        Some(ints)
    }

    /// Max absolute value of the primitive integer representative.
    pub fn height(&self) -> Option<BigInt> {
        self.integer_coords()
            .map(|v| v.iter().map(|c| c.abs()).max().unwrap_or_default())
    }

    /// Image in a component algebra.
    pub fn project(&self, component: &EtaleAlgebra) -> Result<ProjPoint, GeometryError> {
        ProjPoint::new(self.coords.clone().map(|c| c.project(component)))
    }

    /// The rational point obtained by sending `t` to a rational root of the modulus.
    pub fn specialize(&self, root: &Rational) -> Result<ProjPoint, GeometryError> {
        ProjPoint::rational(self.coords.clone().map(|c| c.specialize(root)))
    }

    /// Same point over a different but equal-modulus algebra handle; also
    /// lifts a rational point into any algebra.
    pub fn lift(&self, alg: &EtaleAlgebra) -> Result<ProjPoint, GeometryError> {
        if self.algebra() == alg {
            return Ok(self.clone());
        }
        let q = self
            .as_rationals()
            .ok_or(GeometryError::AlgebraMismatch)?;
        ProjPoint::new(q.map(|x| alg.from_rational(x)))
    }

    pub fn to_json(&self) -> Value {
        if let Some(q) = self.as_rationals() {
            Value::Array(q.iter().map(|c| Value::String(format_rational(c))).collect())
        } else {
            Value::Array(self.coords.iter().map(AlgElement::to_json).collect())
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, GeometryError> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| GeometryError::Invalid("a point needs 4 coordinates".into()))?;
        if arr.iter().all(|c| c.is_string() || c.is_number()) {
            let q: Vec<Rational> = arr
                .iter()
                .map(|c| match c {
                    Value::String(s) => parse_rational(s),
                    other => parse_rational(&other.to_string()),
                })
                .collect::<Result<_, _>>()?;
            return ProjPoint::rational([q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()]);
        }
        let els: Vec<AlgElement> = arr
            .iter()
            .map(AlgElement::from_json)
            .collect::<Result<_, _>>()?;
        ProjPoint::new([els[0].clone(), els[1].clone(), els[2].clone(), els[3].clone()])
    }

    /// Parses `"a,b,c,d"` with rational entries.
    pub fn parse_rational_list(s: &str) -> Result<Self, GeometryError> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(GeometryError::Invalid(format!("expected 4 coordinates in {s:?}")));
        }
        let q: Vec<Rational> = parts
            .iter()
            .map(|p| parse_rational(p))
            .collect::<Result<_, _>>()?;
        ProjPoint::rational([q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()])
    }
}

pub(crate) fn det2(a: &AlgElement, b: &AlgElement, c: &AlgElement, d: &AlgElement) -> AlgElement {
    &(a * d) - &(b * c)
}

/// The six 2x2 minors (Plücker coordinates) of the rows `p`, `q`.
pub(crate) fn minors2(p: &[AlgElement; 4], q: &[AlgElement; 4]) -> Vec<AlgElement> {
    let mut out = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(det2(&p[i], &p[j], &q[i], &q[j]));
        }
    }
    out
}

fn det3(rows: [[&AlgElement; 3]; 3]) -> AlgElement {
    let [a, b, c] = rows;
    let t0 = a[0] * &det2(b[1], b[2], c[1], c[2]);
    let t1 = a[1] * &det2(b[0], b[2], c[0], c[2]);
    let t2 = a[2] * &det2(b[0], b[1], c[0], c[1]);
    &(&t0 - &t1) + &t2
}

/// Signed maximal minors `L_i = (-1)^i det(M without column i)` of a 3x4
/// matrix; `L` vanishes on all three rows.
pub(crate) fn minors3(
    a: &[AlgElement; 4],
    b: &[AlgElement; 4],
    c: &[AlgElement; 4],
) -> [AlgElement; 4] {
    std::array::from_fn(|i| {
        let cols: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        fn pick<'a>(r: &'a [AlgElement; 4], cols: &[usize]) -> [&'a AlgElement; 3] {
            [&r[cols[0]], &r[cols[1]], &r[cols[2]]]
        }
        let d = det3([pick(a, &cols), pick(b, &cols), pick(c, &cols)]);
        if i % 2 == 0 {
            d
        } else {
            -&d
        }
    })
}

/// Kernel generators of a 2x4 matrix: for each column triple, the
/// cofactor vector of the 3x3 matrix with a repeated row.
pub(crate) fn kernel_2x4(r1: &[AlgElement; 4], r2: &[AlgElement; 4]) -> Vec<[AlgElement; 4]> {
    let alg = r1[0].parent();
    let mut out = Vec::with_capacity(4);
    for skip in (0..4).rev() {
        let cols: Vec<usize> = (0..4).filter(|&j| j != skip).collect();
        let (i, j, k) = (cols[0], cols[1], cols[2]);
        let mut v: [AlgElement; 4] = std::array::from_fn(|_| alg.zero());
        v[i] = det2(&r1[j], &r1[k], &r2[j], &r2[k]);
        v[j] = -&det2(&r1[i], &r1[k], &r2[i], &r2[k]);
        v[k] = det2(&r1[i], &r1[j], &r2[i], &r2[j]);
        out.push(v);
    }
    out
}

/// A plane `sum a_i X_i = 0`, normalized like points but with the first
/// unit coefficient scaled to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: [AlgElement; 4],
}

impl LinearForm {
    pub fn new(coeffs: [AlgElement; 4]) -> Result<Self, GeometryError> {
        same_parent(&coeffs)?;
        require_unit_ideal(&coeffs, GeometryError::ZeroPoint)?;
        let u = coeffs
            .iter()
            .find(|c| c.is_unit())
            .cloned()
            .or_else(|| normalizing_unit(&coeffs))
            .ok_or_else(|| GeometryError::Invalid("cannot normalize linear form".into()))?;
        let inv = u.invert()?;
        Ok(Self {
            coeffs: coeffs.map(|c| &c * &inv),
        })
    }

    pub fn from_ints(v: [i64; 4]) -> Result<Self, GeometryError> {
        let alg = EtaleAlgebra::rationals();
        Self::new(v.map(|x| alg.from_rational(q_int(x))))
    }

    pub fn coeffs(&self) -> &[AlgElement; 4] {
        &self.coeffs
    }

    pub fn eval(&self, p: &ProjPoint) -> AlgElement {
        let mut acc = p.algebra().zero();
        for (a, x) in self.coeffs.iter().zip(p.coords()) {
            acc = &acc + &(a * x);
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        if self.coeffs[0].parent().is_rational() {
            Value::Array(
                self.coeffs
                    .iter()
                    .map(|c| Value::String(format_rational(&c.rep().coeff(0))))
                    .collect(),
            )
        } else {
            Value::Array(self.coeffs.iter().map(AlgElement::to_json).collect())
        }
    }
}

/// A line given by two spanning points over a common algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    p: ProjPoint,
    q: ProjPoint,
}

impl Line {
    pub fn new(p: ProjPoint, q: ProjPoint) -> Result<Self, GeometryError> {
        if p.algebra() != q.algebra() {
            return Err(GeometryError::AlgebraMismatch);
        }
        require_unit_ideal(&minors2(p.coords(), q.coords()), GeometryError::DegenerateLine)?;
        Ok(Self { p, q })
    }

    pub fn through_ints(p: [i64; 4], q: [i64; 4]) -> Result<Self, GeometryError> {
        Self::new(ProjPoint::from_ints(p)?, ProjPoint::from_ints(q)?)
    }

    /// The line cut out by two rational planes.
    pub fn from_equations(a: [Rational; 4], b: [Rational; 4]) -> Result<Self, GeometryError> {
        let k = linalg::kernel(&[a.to_vec(), b.to_vec()]);
        if k.len() != 2 {
            return Err(GeometryError::DegenerateLine);
        }
        let to_pt = |v: &Vec<Rational>| {
            ProjPoint::rational([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
        };
        Line::new(to_pt(&k[0])?, to_pt(&k[1])?)
    }

    pub fn basepoints(&self) -> (&ProjPoint, &ProjPoint) {
        (&self.p, &self.q)
    }

    pub fn algebra(&self) -> &EtaleAlgebra {
        self.p.algebra()
    }

    /// True iff `x` lies on the line, componentwise everywhere.
    pub fn contains(&self, x: &ProjPoint) -> Result<bool, GeometryError> {
        let x = x.lift(self.algebra())?;
        let m = minors3(self.p.coords(), self.q.coords(), x.coords());
        Ok(m.iter().all(AlgElement::is_zero))
    }

    pub fn to_json(&self) -> Value {
        json!([self.p.to_json(), self.q.to_json()])
    }

    pub fn from_json(v: &Value) -> Result<Self, GeometryError> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| GeometryError::Invalid("a line needs 2 points".into()))?;
        Line::new(ProjPoint::from_json(&arr[0])?, ProjPoint::from_json(&arr[1])?)
    }
}

/// The pencil of planes through an axis line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanePencil {
    pub axis: Line,
}

impl PlanePencil {
    pub fn new(axis: Line) -> Self {
        Self { axis }
    }
}
