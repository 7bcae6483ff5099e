//! The Chow ring of a product of three curves `C_x × C_y × C_z`, truncated to
//! the square-zero ring generated by the pulled-back hyperplane classes
//! `α, β, γ`, together with the pencil condition on plane triples through
//! three skew lines.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{linalg, q_int, Rational};
use crate::geometry::{GeometryError, Line};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("class is not homogeneous of codimension {expected}")]
    NotHomogeneous { expected: u32 },
    #[error("curve degrees must be positive")]
    NonPositiveDegree,
}

/// One of the three factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    X,
    Y,
    Z,
}

impl Factor {
    pub const ALL: [Factor; 3] = [Factor::X, Factor::Y, Factor::Z];

    fn bit(self) -> u8 {
        match self {
            Factor::X => 1,
            Factor::Y => 2,
            Factor::Z => 4,
        }
    }
}

/// Integer combination of square-free monomials in `α, β, γ`, keyed by the
/// bitmask of factors involved (`0` is the fundamental class).
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TriClass {
    coeffs: BTreeMap<u8, BigInt>,
}

impl TriClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    /// The generator `pr_f^* c1(O(1))`.
    pub fn generator(f: Factor) -> Self {
        Self::monomial(f.bit(), BigInt::one())
    }

    pub fn alpha() -> Self {
        Self::generator(Factor::X)
    }

    pub fn beta() -> Self {
        Self::generator(Factor::Y)
    }

    pub fn gamma() -> Self {
        Self::generator(Factor::Z)
    }

    fn monomial(mask: u8, c: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(mask, c);
        }
        Self { coeffs }
    }

    /// Coefficient of the product of the given factors.
    pub fn coeff(&self, factors: &[Factor]) -> BigInt {
        let mask = factors.iter().fold(0, |m, f| m | f.bit());
        self.coeffs.get(&mask).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        for (&m, c) in &self.coeffs {
            out.add_term(m, c * k);
        }
        out
    }

    fn add_term(&mut self, mask: u8, c: BigInt) {
        let e = self.coeffs.entry(mask).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    /// Part of codimension `k`.
    pub fn graded(&self, k: u32) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.count_ones() == k)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.coeffs.keys().all(|m| m.count_ones() == k)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(&m, c)| json!({"monomial": mask_name(m), "coeff": c.to_string()}))
            .collect();
        Value::Array(terms)
    }
}

fn mask_name(mask: u8) -> String {
    let names = ["a", "b", "c"];
    let s: String = (0..3)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| names[i])
        .collect();
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

impl fmt::Debug for TriClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&m, c)| format!("{c}*{}", mask_name(m)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &TriClass {
    type Output = TriClass;
    fn add(self, rhs: &TriClass) -> TriClass {
        let mut out = self.clone();
        for (&m, c) in &rhs.coeffs {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl Neg for &TriClass {
    type Output = TriClass;
    fn neg(self) -> TriClass {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &TriClass {
    type Output = TriClass;
    fn mul(self, rhs: &TriClass) -> TriClass {
        tri_mul(self, rhs)
    }
}

/// Product in the square-zero ring: monomials sharing a generator annihilate.
pub fn tri_mul(a: &TriClass, b: &TriClass) -> TriClass {
    let mut out = TriClass::zero();
    for (&ma, ca) in &a.coeffs {
        for (&mb, cb) in &b.coeffs {
            if ma & mb == 0 {
                out.add_term(ma | mb, ca * cb);
            }
        }
    }
    out
}

/// Total Segre class of a sum of line bundles given by their first Chern
/// classes: `prod (1 + c1)^(-1) = prod (1 - c1)` since every `c1` squares to zero.
pub fn segre_total(c1_summands: &[TriClass]) -> TriClass {
    c1_summands
        .iter()
        .fold(TriClass::one(), |acc, c| &acc * &(&TriClass::one() + &(-c)))
}

/// Codimension-2 part of [`segre_total`].
pub fn segre_s2(c1_summands: &[TriClass]) -> TriClass {
    segre_total(c1_summands).graded(2)
}

/// First Chern classes of `pr_x^* O(-1) ⊕ pr_y^* O(-1) ⊕ pr_z^* O(-1)`.
pub fn dual_hyperplane_bundle() -> [TriClass; 3] {
    [-&TriClass::alpha(), -&TriClass::beta(), -&TriClass::gamma()]
}

/// Degrees of `O(1)` on the three curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveDegrees {
    pub deg_x: i64,
    pub deg_y: i64,
    pub deg_z: i64,
}

impl CurveDegrees {
    pub fn new(deg_x: i64, deg_y: i64, deg_z: i64) -> Result<Self, ChowError> {
        if deg_x <= 0 || deg_y <= 0 || deg_z <= 0 {
            return Err(ChowError::NonPositiveDegree);
        }
        Ok(Self { deg_x, deg_y, deg_z })
    }

    /// Members of `|O_S(2)|` on a cubic surface: degree 6 each.
    pub fn quadric_sections() -> Self {
        Self { deg_x: 6, deg_y: 6, deg_z: 6 }
    }

    fn top(&self) -> BigInt {
        BigInt::from(self.deg_x) * self.deg_y * self.deg_z
    }
}

/// Degree of a curve class against `H_x = pr_x^* O(1)`.
pub fn degree_wrt_hx(c: &TriClass, degs: &CurveDegrees) -> Result<BigInt, ChowError> {
    if !c.is_homogeneous(2) {
        return Err(ChowError::NotHomogeneous { expected: 2 });
    }
    let top = tri_mul(&TriClass::alpha(), c);
    Ok(top.coeff(&Factor::ALL) * degs.top())
}

/// Degree against `H_x` of the locus `C_x × (C_y ∩ C_z)`: the intersection
/// number `deg(C_y · C_z)` times `deg_x`.
pub fn diagonal_locus_degree(deg_yz: i64, degs: &CurveDegrees) -> BigInt {
    BigInt::from(deg_yz) * degs.deg_x
}

/// `deg(C_y · C_z)` for two members of `|O_S(2)|` on a cubic surface.
pub const QUADRIC_SECTION_INTERSECTION: i64 = 12;

/// The degree comparison behind non-emptiness of `D_2 \ D'_2`.
pub fn degree_report(degs: &CurveDegrees, deg_yz: i64) -> Result<Value, ChowError> {
    let s2 = segre_s2(&dual_hyperplane_bundle());
    let d2 = degree_wrt_hx(&s2, degs)?;
    let d2p = diagonal_locus_degree(deg_yz, degs);
    Ok(json!({
        "curve_degrees": [degs.deg_x, degs.deg_y, degs.deg_z],
        "deg_yz": deg_yz,
        "segre_s2": s2.to_json(),
        "deg_D2": big_json(&d2),
        "deg_D2_prime": big_json(&d2p),
        "strict_inequality": d2 > d2p,
    }))
}

fn big_json(n: &BigInt) -> Value {
    n.to_i64().map(Value::from).unwrap_or_else(|| Value::String(n.to_string()))
}

/// A point of `P^1` with rational coordinates.
pub type P1 = [Rational; 2];

/// Planes `u0 X0 + u1 X1`, `v2 X2 + v3 X3` and `w (X0 - X2) + w' (X1 - X3)`
/// through the three standard lines.
pub fn plane_triple(u: &P1, v: &P1, w: &P1) -> [[Rational; 4]; 3] {
    let z = || q_int(0);
    [
        [u[0].clone(), u[1].clone(), z(), z()],
        [z(), z(), v[0].clone(), v[1].clone()],
        [w[0].clone(), w[1].clone(), -&w[0], -&w[1]],
    ]
}

/// Rank of the 3x4 coefficient matrix; `2` means the planes form a pencil.
pub fn triple_rank(u: &P1, v: &P1, w: &P1) -> usize {
    let rows: Vec<Vec<Rational>> = plane_triple(u, v, w).iter().map(|r| r.to_vec()).collect();
    linalg::rank(&rows)
}

fn standard_lines() -> [[[Rational; 4]; 2]; 3] {
    let r = |v: [i64; 4]| v.map(q_int);
    [
        [r([1, 0, 0, 0]), r([0, 1, 0, 0])],
        [r([0, 0, 1, 0]), r([0, 0, 0, 1])],
        [r([1, 0, -1, 0]), r([0, 1, 0, -1])],
    ]
}

/// True iff the lines are `X0 = X1 = 0`, `X2 = X3 = 0`, `X0 - X2 = X1 - X3 = 0`.
pub fn in_standard_position(lines: &[Line; 3]) -> bool {
    lines.iter().zip(standard_lines()).all(|(l, eqs)| {
        let (p, q) = l.basepoints();
        [p, q].iter().all(|pt| match pt.as_rationals() {
            Some(c) => eqs.iter().all(|e| dot(e, &c).is_zero()),
            None => false,
        })
    })
}

fn dot(a: &[Rational; 4], b: &[Rational; 4]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Outcome of checking the pencil condition along sample parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilSolution {
    /// The solution family: `(u0:u1) = (v2:v3) = (w:w')`.
    pub family: &'static str,
    pub checks: Vec<(P1, usize)>,
}

impl PencilSolution {
    pub fn all_pencils(&self) -> bool {
        self.checks.iter().all(|(_, r)| *r == 2)
    }
}

/// Plane triples through three lines in standard position that span only a
/// pencil are exactly the diagonal `(u0:u1) = (v2:v3) = (w:w')`; every
/// sample parameter is checked by an exact rank computation.
pub fn pencil_condition_solve(
    lines: &[Line; 3],
    samples: &[P1],
) -> Result<PencilSolution, GeometryError> {
    if !in_standard_position(lines) {
        return Err(GeometryError::NotInStandardPosition);
    }
    let checks = samples
        .iter()
        .map(|p| (p.clone(), triple_rank(p, p, p)))
        .collect();
    Ok(PencilSolution {
        family: "diagonal",
        checks,
    })
}

/// The three standard lines.
pub fn standard_position_lines() -> [Line; 3] {
    let pts = |v: [i64; 4], w: [i64; 4]| Line::through_ints(v, w).expect("distinct points");
    [
        pts([0, 0, 1, 0], [0, 0, 0, 1]),
        pts([1, 0, 0, 0], [0, 1, 0, 0]),
        pts([1, 0, 1, 0], [0, 1, 0, 1]),
    ]
}

/// A change of coordinates taking three pairwise skew rational lines to the
/// standard ones. Columns of the returned matrix are the images of the new
/// basis vectors, so old coordinates are `B · new`.
pub fn standard_position_basis(lines: &[Line; 3]) -> Result<[[Rational; 4]; 4], GeometryError> {
    let span = |l: &Line| -> Result<[[Rational; 4]; 2], GeometryError> {
        let (p, q) = l.basepoints();
        match (p.as_rationals(), q.as_rationals()) {
            (Some(a), Some(b)) => Ok([a, b]),
            _ => Err(GeometryError::NonRationalLine),
        }
    };
    let [a1, a2] = span(&lines[0])?;
    let [b1, b2] = span(&lines[1])?;
    let [c1, c2] = span(&lines[2])?;
    // columns a1 a2 b1 b2 must be a basis: the first two lines are skew
    let m: Vec<Vec<Rational>> = (0..4)
        .map(|i| vec![a1[i].clone(), a2[i].clone(), b1[i].clone(), b2[i].clone()])
        .collect();
    let mut split = Vec::with_capacity(2);
    for c in [&c1, &c2] {
        let x = linalg::solve(&m, c).ok_or(GeometryError::IntersectingLines)?;
        let a: [Rational; 4] = std::array::from_fn(|i| &a1[i] * &x[0] + &a2[i] * &x[1]);
        let b: [Rational; 4] = std::array::from_fn(|i| &b1[i] * &x[2] + &b2[i] * &x[3]);
        split.push((a, b));
    }
    let (a1p, b1p) = split[0].clone();
    let (a2p, b2p) = split[1].clone();
    let cols = [b1p, b2p, a1p, a2p];
    let basis: Vec<Vec<Rational>> = (0..4).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    if linalg::rank(&basis) < 4 {
        return Err(GeometryError::IntersectingLines);
    }
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| basis[i][j].clone())))
}

/// JSON summary of the pencil check at the given parameters plus one
/// off-diagonal control triple.
pub fn pencil_report(samples: &[P1]) -> Value {
    let sol = pencil_condition_solve(&standard_position_lines(), samples)
        .expect("standard lines are in standard position");
    let fmt = |p: &P1| json!([crate::algebra::format_rational(&p[0]), crate::algebra::format_rational(&p[1])]);
    let checks: Vec<Value> = sol
        .checks
        .iter()
        .map(|(p, r)| json!({"parameter": fmt(p), "rank": r}))
        .collect();
    let one = [q_int(1), q_int(0)];
    let other = [q_int(0), q_int(1)];
    json!({
        "family": sol.family,
        "checks": checks,
        "all_pencils": sol.all_pencils(),
        "off_diagonal_control": {
            "u": fmt(&one), "v": fmt(&other), "w": fmt(&one),
            "rank": triple_rank(&one, &other, &one),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(a: i64, b: i64) -> P1 {
        [q_int(a), q_int(b)]
    }

    #[test]
    fn square_zero_products() {
        let (a, b, c) = (TriClass::alpha(), TriClass::beta(), TriClass::gamma());
        assert_eq!(tri_mul(&a, &a), TriClass::zero());
        assert_eq!((&a * &b).coeff(&[Factor::X, Factor::Y]), BigInt::from(1));
        let one = TriClass::one();
        let prod = &(&(&one + &a) * &(&one + &b)) * &(&one + &c);
        assert_eq!(prod.coeffs.len(), 8);
        assert!(prod.coeffs.values().all(|v| v.is_one()));
    }

    #[test]
    fn segre_class_of_dual_bundle() {
        let f = dual_hyperplane_bundle();
        let s2 = segre_s2(&f);
        let (a, b, c) = (TriClass::alpha(), TriClass::beta(), TriClass::gamma());
        assert_eq!(s2, &(&(&a * &b) + &(&a * &c)) + &(&b * &c));
        let one = TriClass::one();
        let total = &(&(&one + &a) * &(&one + &b)) * &(&one + &c);
        assert_eq!(segre_total(&f), total);
        assert_eq!(segre_s2(&[TriClass::zero(), TriClass::zero(), TriClass::zero()]), TriClass::zero());
    }

    #[test]
    fn degrees_against_hx() {
        let d = CurveDegrees::quadric_sections();
        let s2 = segre_s2(&dual_hyperplane_bundle());
        assert_eq!(degree_wrt_hx(&s2, &d).unwrap(), BigInt::from(216));
        let (a, b, c) = (TriClass::alpha(), TriClass::beta(), TriClass::gamma());
        assert_eq!(degree_wrt_hx(&(&b * &c), &d).unwrap(), BigInt::from(216));
        assert_eq!(degree_wrt_hx(&(&a * &b), &d).unwrap(), BigInt::zero());
        assert_eq!(degree_wrt_hx(&(&a * &c), &d).unwrap(), BigInt::zero());
        assert!(degree_wrt_hx(&a, &d).is_err());
        assert_eq!(diagonal_locus_degree(QUADRIC_SECTION_INTERSECTION, &d), BigInt::from(72));
        let d2 = CurveDegrees::new(2, 3, 5).unwrap();
        assert_eq!(degree_wrt_hx(&s2, &d2).unwrap(), BigInt::from(30));
        assert!(CurveDegrees::new(0, 1, 1).is_err());
    }

    #[test]
    fn report_values() {
        let r = degree_report(&CurveDegrees::quadric_sections(), QUADRIC_SECTION_INTERSECTION).unwrap();
        assert_eq!(r["deg_D2"], 216);
        assert_eq!(r["deg_D2_prime"], 72);
        assert_eq!(r["strict_inequality"], true);
    }

    #[test]
    fn pencil_examples() {
        assert_eq!(triple_rank(&p1(1, 0), &p1(1, 0), &p1(1, 0)), 2);
        assert_eq!(triple_rank(&p1(1, 1), &p1(1, 1), &p1(1, 1)), 2);
        assert_eq!(triple_rank(&p1(1, 0), &p1(0, 1), &p1(1, 0)), 3);
        let sol = pencil_condition_solve(&standard_position_lines(), &[p1(2, -3), p1(0, 1)]).unwrap();
        assert!(sol.all_pencils());
        let mut lines = standard_position_lines();
        lines.swap(0, 1);
        assert_eq!(
            pencil_condition_solve(&lines, &[]),
            Err(GeometryError::NotInStandardPosition)
        );
    }

    #[test]
    fn reduction_to_standard_position() {
        let lines = [
            Line::through_ints([1, 0, 0, 0], [0, 1, 0, 0]).unwrap(),
            Line::through_ints([0, 0, 1, 0], [0, 0, 0, 1]).unwrap(),
            Line::through_ints([1, 2, 1, 0], [0, 1, 3, 1]).unwrap(),
        ];
        let b = standard_position_basis(&lines).unwrap();
        // new coordinates of e0 + e2 and e1 + e3 map onto the third line
        let col = |j: usize| -> [Rational; 4] { std::array::from_fn(|i| b[i][j].clone()) };
        let sum = |x: [Rational; 4], y: [Rational; 4]| -> [Rational; 4] {
            std::array::from_fn(|i| &x[i] + &y[i])
        };
        for v in [sum(col(0), col(2)), sum(col(1), col(3))] {
            let p = crate::geometry::ProjPoint::rational(v).unwrap();
            assert!(lines[2].contains(&p).unwrap());
        }
        let meeting = [
            lines[0].clone(),
            lines[1].clone(),
            Line::through_ints([1, 0, 0, 0], [0, 0, 1, 0]).unwrap(),
        ];
        assert_eq!(standard_position_basis(&meeting), Err(GeometryError::IntersectingLines));
    }
}
