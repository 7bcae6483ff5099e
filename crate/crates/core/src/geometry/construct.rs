use serde_json::{json, Value};

use super::point::{kernel_2x4, minors2, minors3};
use super::{
    ideal_status, require_unit_ideal, BinaryCubic, CubicForm, GeometryError, IdealStatus,
    LinearForm, Line, PlanePencil, ProjPoint,
};
use crate::algebra::{poly_to_json, q_int, AlgElement, AlgebraError, EtaleAlgebra, Poly, Rational};

fn combine(a: &AlgElement, x: &[AlgElement; 4], b: &AlgElement, y: &[AlgElement; 4]) -> [AlgElement; 4] {
    std::array::from_fn(|i| &(a * &x[i]) - &(b * &y[i]))
}

fn require_on_surface(s: &CubicForm, x: &ProjPoint) -> Result<(), GeometryError> {
    if s.contains(x) {
        Ok(())
    } else {
        Err(GeometryError::NotOnSurface)
    }
}

/// `g(s, t) = S(s p + t q)` for the basepoints `p, q` of the line, in that order.
pub fn restrict_to_line(s: &CubicForm, line: &Line) -> BinaryCubic {
    let (p, q) = line.basepoints();
    BinaryCubic {
        coeffs: s.restrict(p.coords(), q.coords()),
    }
}

/// Residual intersection of the line through `x` and `y` with the surface.
///
/// With `g(s, t) = S(s x + t y) = s t (c1 s + c2 t)` the third root is
/// `(s : t) = (c2 : -c1)`, i.e. the point `c2 x - c1 y`.
pub fn third_point(s: &CubicForm, x: &ProjPoint, y: &ProjPoint) -> Result<ProjPoint, GeometryError> {
    if x.algebra() != y.algebra() {
        return Err(GeometryError::AlgebraMismatch);
    }
    require_on_surface(s, x)?;
    require_on_surface(s, y)?;
    require_unit_ideal(&minors2(x.coords(), y.coords()), GeometryError::EqualPoints)?;
    let [c0, c1, c2, c3] = s.restrict(x.coords(), y.coords());
    debug_assert!(c0.is_zero() && c3.is_zero());
    require_unit_ideal(&[c1.clone(), c2.clone()], GeometryError::LineInSurface)?;
    ProjPoint::new(combine(&c2, x.coords(), &c1, y.coords()))
}

/// Three points are collinear iff every 3x3 minor of their coordinates vanishes.
pub fn collinear(x: &ProjPoint, y: &ProjPoint, z: &ProjPoint) -> Result<bool, GeometryError> {
    let alg = common_algebra(&[x, y, z])?;
    let (x, y, z) = (x.lift(&alg)?, y.lift(&alg)?, z.lift(&alg)?);
    Ok(minors3(x.coords(), y.coords(), z.coords())
        .iter()
        .all(AlgElement::is_zero))
}

/// Rational points may be mixed with points over one nontrivial algebra.
fn common_algebra(pts: &[&ProjPoint]) -> Result<EtaleAlgebra, GeometryError> {
    let mut alg: Option<&EtaleAlgebra> = None;
    for p in pts {
        if p.is_rational() {
            continue;
        }
        match alg {
            Some(a) if a != p.algebra() => return Err(GeometryError::AlgebraMismatch),
            _ => alg = Some(p.algebra()),
        }
    }
    Ok(alg.cloned().unwrap_or_else(EtaleAlgebra::rationals))
}

/// The plane spanned by the pencil axis and `x`.
pub fn fiber_plane(w: &PlanePencil, x: &ProjPoint) -> Result<LinearForm, GeometryError> {
    let alg = common_algebra(&[w.axis.basepoints().0, x])?;
    let (a, b) = w.axis.basepoints();
    let (a, b, x) = (a.lift(&alg)?, b.lift(&alg)?, x.lift(&alg)?);
    let l = minors3(a.coords(), b.coords(), x.coords());
    require_unit_ideal(&l, GeometryError::PointOnAxis)?;
    LinearForm::new(l)
}

/// The tangent process on the plane section through `x`: the residual
/// intersection of the surface with the tangent line at `x` to the plane
/// cubic `S ∩ fiber_plane(w, x)`.
///
/// On that plane cubic this is `x -> -2x` for the group law whose origin
/// is a flex.
pub fn tangent_residual(
    s: &CubicForm,
    w: &PlanePencil,
    x: &ProjPoint,
) -> Result<ProjPoint, GeometryError> {
    require_on_surface(s, x)?;
    let plane = fiber_plane(w, x)?;
    let alg = x.algebra().clone();
    let plane: [AlgElement; 4] = plane.coeffs().clone().map(|c| {
        if c.parent() == &alg {
            c
        } else {
            alg.from_rational(c.rep().coeff(0))
        }
    });
    let grad = s.gradient(x.coords());
    require_unit_ideal(&grad, GeometryError::SingularSectionPoint)?;
    require_unit_ideal(&minors2(&plane, &grad), GeometryError::SingularSectionPoint)?;

    let q = tangent_direction(x, &plane, &grad)?;
    let [c0, c1, c2, c3] = s.restrict(x.coords(), &q);
    debug_assert!(c0.is_zero() && c1.is_zero());
    // g = t^2 (c2 s + c3 t); residual root (s : t) = (c3 : -c2)
    require_unit_ideal(&[c2.clone(), c3.clone()], GeometryError::TangentLineInSurface)?;
    ProjPoint::new(combine(&c3, x.coords(), &c2, &q))
}

/// A second point on the line `plane ∩ tangent plane`, independent of `x`
/// in every component.
fn tangent_direction(
    x: &ProjPoint,
    plane: &[AlgElement; 4],
    grad: &[AlgElement; 4],
) -> Result<[AlgElement; 4], GeometryError> {
    let gens = kernel_2x4(plane, grad);
    let mut candidates: Vec<[AlgElement; 4]> = gens.clone();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            candidates.push(std::array::from_fn(|k| &gens[i][k] + &gens[j][k]));
            candidates.push(std::array::from_fn(|k| {
                &gens[i][k] + &gens[j][k].scale(&q_int(2))
            }));
        }
    }
    let mut last = GeometryError::SingularSectionPoint;
    for v in candidates {
        match ideal_status(&minors2(x.coords(), &v)) {
            IdealStatus::Unit => return Ok(v),
            IdealStatus::AllZero => {}
            IdealStatus::Partial(factor) => {
                last = AlgebraError::ZeroDivisorFound { factor }.into();
            }
        }
    }
    Err(last)
}

/// [`tangent_residual`] that splits the algebra on zero divisors and
/// reassembles the componentwise answers by Chinese remaindering.
pub fn tangent_residual_split(
    s: &CubicForm,
    w: &PlanePencil,
    x: &ProjPoint,
) -> Result<ProjPoint, GeometryError> {
    match tangent_residual(s, w, x) {
        Err(GeometryError::Algebra(AlgebraError::ZeroDivisorFound { factor })) => {
            let alg = x.algebra().clone();
            let (a1, a2) = alg.split(&factor)?;
            let r1 = tangent_residual_split(s, w, &x.project(&a1)?)?;
            let r2 = tangent_residual_split(s, w, &x.project(&a2)?)?;
            let coords: Vec<AlgElement> = (0..4)
                .map(|i| alg.crt(&[r1.coords()[i].clone(), r2.coords()[i].clone()]))
                .collect::<Result<_, _>>()?;
            ProjPoint::new([
                coords[0].clone(),
                coords[1].clone(),
                coords[2].clone(),
                coords[3].clone(),
            ])
        }
        other => other,
    }
}

/// A length-3 subscheme of the surface, reduced to its étale part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthThreeScheme {
    pub point: ProjPoint,
    pub underlying_line: Option<Line>,
    /// The line met the surface with multiplicity; `point` is the reduced scheme.
    pub non_reduced: bool,
}

impl LengthThreeScheme {
    pub fn algebra(&self) -> &EtaleAlgebra {
        self.point.algebra()
    }

    pub fn degree(&self) -> usize {
        self.algebra().degree()
    }

    /// Rational roots of the modulus, one per rational component.
    pub fn rational_roots(&self) -> Vec<Rational> {
        self.algebra().modulus().rational_roots()
    }

    /// Every component is a rational point.
    pub fn is_split(&self) -> bool {
        self.rational_roots().len() == self.degree()
    }

    /// The rational points among the components.
    pub fn rational_components(&self) -> Result<Vec<ProjPoint>, GeometryError> {
        self.rational_roots()
            .iter()
            .map(|r| self.point.specialize(r))
            .collect()
    }

    pub fn to_json(&self) -> Result<Value, GeometryError> {
        let comps: Vec<Value> = self
            .rational_components()?
            .iter()
            .map(ProjPoint::to_json)
            .collect();
        Ok(json!({
            "degree": self.degree(),
            "modulus": poly_to_json(self.algebra().modulus()),
            "point": self.point.to_json(),
            "non_reduced": self.non_reduced,
            "split": self.is_split(),
            "rational_components": comps,
        }))
    }
}

/// The length-3 scheme cut on the surface by a rational line.
///
/// The second basepoint is shifted along the line until it is off the
/// surface, so the dehomogenized restriction has degree exactly 3; the
/// algebra is `Q[t]/(squarefree part)` and the point is the tautological
/// point `p + t q'`.
pub fn delta_point(s: &CubicForm, line: &Line) -> Result<LengthThreeScheme, GeometryError> {
    if !line.algebra().is_rational() {
        return Err(GeometryError::NonRationalLine);
    }
    let g = restrict_to_line(s, line);
    if g.is_zero() {
        return Err(GeometryError::LineInSurface);
    }
    let (p, q) = line.basepoints();
    let pr = p.as_rationals().expect("rational line");
    let qr = q.as_rationals().expect("rational line");
    // at most three shifts can land on the surface
    let shifted = (0..=3)
        .map(|k| -> [Rational; 4] { std::array::from_fn(|i| &qr[i] + &pr[i] * q_int(k)) })
        .find(|v| {
            let pt = ProjPoint::rational(v.clone()).expect("nonzero on a line");
            !s.contains(&pt)
        })
        .expect("a nonzero cubic restricted to a line has at most 3 roots");

    let q_alg = EtaleAlgebra::rationals();
    let pc = pr.clone().map(|x| q_alg.from_rational(x));
    let qc = shifted.clone().map(|x| q_alg.from_rational(x));
    let f = Poly::new(s.restrict(&pc, &qc).iter().map(|c| c.rep().coeff(0)).collect());
    let m = f.squarefree_part();
    let non_reduced = m.degree() != Some(3);
    let alg = EtaleAlgebra::new(m)?;
    let t = alg.generator();
    let coords: [AlgElement; 4] =
        std::array::from_fn(|i| &alg.from_rational(pr[i].clone()) + &t.scale(&shifted[i]));
    let point = ProjPoint::new(coords)?;
    debug_assert!(s.contains(&point));
    Ok(LengthThreeScheme {
        point,
        underlying_line: Some(line.clone()),
        non_reduced,
    })
}

/// The degree-3 point generator: cut the surface with `line` and apply the
/// tangent process of the pencil `w` to the resulting length-3 scheme,
/// over its own algebra.
pub fn psi_minus_one(
    s: &CubicForm,
    w: &PlanePencil,
    line: &Line,
) -> Result<LengthThreeScheme, GeometryError> {
    let delta = delta_point(s, line)?;
    let point = tangent_residual_split(s, w, &delta.point)?;
    debug_assert!(s.contains(&point));
    Ok(LengthThreeScheme {
        point,
        underlying_line: None,
        non_reduced: delta.non_reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: [i64; 4]) -> ProjPoint {
        ProjPoint::from_ints(v).unwrap()
    }

    #[test]
    fn fermat_third_point() {
        let s = CubicForm::fermat();
        let r = third_point(&s, &pt([1, -1, 0, 0]), &pt([0, 1, -1, 0])).unwrap();
        assert_eq!(r, pt([1, 0, -1, 0]));
        let r2 = third_point(&s, &pt([0, 1, -1, 0]), &pt([1, -1, 0, 0])).unwrap();
        assert_eq!(r, r2);
    }

    #[test]
    fn third_point_errors() {
        let s = CubicForm::fermat();
        assert_eq!(
            third_point(&s, &pt([1, -1, 0, 0]), &pt([0, 0, 1, -1])),
            Err(GeometryError::LineInSurface)
        );
        assert_eq!(
            third_point(&s, &pt([1, -1, 0, 0]), &pt([2, -2, 0, 0])),
            Err(GeometryError::EqualPoints)
        );
        assert_eq!(
            third_point(&s, &pt([1, 0, 0, 0]), &pt([0, 1, -1, 0])),
            Err(GeometryError::NotOnSurface)
        );
    }

    #[test]
    fn restriction_examples() {
        let s = CubicForm::fermat();
        let l = Line::through_ints([1, -1, 0, 0], [0, 0, 1, -1]).unwrap();
        assert!(restrict_to_line(&s, &l).is_zero());
        // s^3 + (t - s)^3 - t^3 = 3 s^2 t - 3 s t^2
        let l = Line::through_ints([1, -1, 0, 0], [0, 1, -1, 0]).unwrap();
        let g = restrict_to_line(&s, &l).to_poly().unwrap();
        assert_eq!(g.monic(), Poly::from_ints(&[0, -1, 1]));
        assert!(restrict_to_line(&s, &l).root_at_infinity());
    }

    #[test]
    fn fiber_plane_examples() {
        let axis = Line::through_ints([0, 0, 1, 0], [0, 0, 0, 1]).unwrap();
        let w = PlanePencil::new(axis);
        assert_eq!(fiber_plane(&w, &pt([1, 0, 0, 0])).unwrap(), LinearForm::from_ints([0, 1, 0, 0]).unwrap());
        assert_eq!(fiber_plane(&w, &pt([1, 1, 0, 0])).unwrap(), LinearForm::from_ints([1, -1, 0, 0]).unwrap());
        assert_eq!(fiber_plane(&w, &pt([0, 0, 2, 3])), Err(GeometryError::PointOnAxis));
    }

    #[test]
    fn fermat_delta_point_is_split() {
        let s = CubicForm::fermat();
        let l = Line::through_ints([1, -1, 0, 0], [0, 1, -1, 0]).unwrap();
        let d = delta_point(&s, &l).unwrap();
        assert_eq!(d.degree(), 3);
        assert!(!d.non_reduced);
        assert!(d.is_split());
        let mut comps = d.rational_components().unwrap();
        comps.sort_by_key(|p| format!("{:?}", p.integer_coords()));
        let mut want = vec![pt([1, -1, 0, 0]), pt([0, 1, -1, 0]), pt([1, 0, -1, 0])];
        want.sort_by_key(|p| format!("{:?}", p.integer_coords()));
        assert_eq!(comps, want);
    }

    #[test]
    fn delta_point_irreducible_and_non_reduced() {
        // X0^3 - 2 X1^3 + X2 X3^2: on the line (0,0,1,0) + t (1,1,0,0)... use
        // X0 = u, X1 = 1: u^3 - 2
        let s = CubicForm::from_int_terms(&[([3, 0, 0, 0], 1), ([0, 3, 0, 0], -2), ([0, 0, 1, 2], 1)]).unwrap();
        let l = Line::through_ints([0, 1, 0, 0], [1, 0, 0, 0]).unwrap();
        let d = delta_point(&s, &l).unwrap();
        assert_eq!(d.algebra().modulus(), &Poly::from_ints(&[-2, 0, 0, 1]));
        assert!(!d.is_split());
        assert!(s.contains(&d.point));

        // line tangent to X0^3 + X1^2 X3 - X3^3 ... double root at X1 = 0
        let s = CubicForm::from_int_terms(&[([1, 2, 0, 0], 1), ([0, 0, 0, 3], 1), ([3, 0, 0, 0], -1), ([0, 0, 3, 0], 1)]).unwrap();
        let l = Line::through_ints([1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        // S(s, t, 0, 0) = s t^2 - s^3 = s (t - s)(t + s): reduced
        assert!(!delta_point(&s, &l).unwrap().non_reduced);
        let l = Line::through_ints([0, 1, 0, 0], [0, 0, 1, -1]).unwrap();
        // S(0, s, t, -t) = t^3 - t^3 = 0 -> in surface
        assert_eq!(delta_point(&s, &l), Err(GeometryError::LineInSurface));
        let l = Line::through_ints([1, 0, 0, 0], [0, 0, 1, 0]).unwrap();
        // S(s, 0, t, 0) = t^3 - s^3: reduced, one rational root
        let d = delta_point(&s, &l).unwrap();
        assert!(!d.non_reduced);
        assert_eq!(d.rational_roots().len(), 1);
        let s2 = CubicForm::from_int_terms(&[([2, 1, 0, 0], 1), ([0, 0, 0, 3], 1)]).unwrap();
        let l = Line::through_ints([1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        // S(s, t, 0, 0) = s^2 t: double root
        let d = delta_point(&s2, &l).unwrap();
        assert!(d.non_reduced);
        assert_eq!(d.degree(), 2);
    }

    #[test]
    fn collinear_examples() {
        assert!(collinear(&pt([1, 0, 0, 0]), &pt([0, 1, 0, 0]), &pt([1, 1, 0, 0])).unwrap());
        assert!(!collinear(&pt([1, 0, 0, 0]), &pt([0, 1, 0, 0]), &pt([0, 0, 1, 0])).unwrap());
    }

    #[test]
    fn tangent_residual_on_flex_returns_point() {
        // plane X3 = 0 section: X1^2 X2 - X0^3 + X0 X2^2; (0:1:0:0) is a flex
        let s = CubicForm::from_int_terms(&[
            ([0, 2, 1, 0], 1),
            ([3, 0, 0, 0], -1),
            ([1, 0, 2, 0], 1),
            ([0, 0, 0, 3], 1),
            ([2, 0, 0, 1], 1),
        ])
        .unwrap();
        let axis = Line::through_ints([1, 0, 0, 0], [0, 0, 1, 0]).unwrap();
        let w = PlanePencil::new(axis);
        let flex = pt([0, 1, 0, 0]);
        assert_eq!(tangent_residual(&s, &w, &flex).unwrap(), flex);
        let p = pt([-1, 0, 1, 0]);
        assert_eq!(
            tangent_residual(&s, &w, &p),
            Err(GeometryError::PointOnAxis)
        );
    }
}
