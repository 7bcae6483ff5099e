//! Height-bounded rational points on cubic surfaces and closure of a point
//! set under secant and tangent residuals.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{q_int, AlgElement, EtaleAlgebra, Poly, Rational};
use crate::geometry::{delta_point, third_point, CubicForm, GeometryError, Line, ProjPoint};

/// Default bound on the number of points kept by [`saturate`].
pub const DEFAULT_CAP: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointSource {
    Enumerated,
    LineIntersection,
    ThirdPoint,
    TangentProcess,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRecord {
    pub point: ProjPoint,
    /// Degree of the étale algebra the point is defined over.
    pub degree: usize,
    /// Max-abs of the primitive integer representative; rational points only.
    pub height: Option<BigInt>,
    pub source: PointSource,
}

impl PointRecord {
    pub fn new(point: ProjPoint, source: PointSource) -> Self {
        Self {
            degree: point.algebra().degree(),
            height: point.height(),
            point,
            source,
        }
    }

    pub fn to_json(&self) -> Value {
        let height = match &self.height {
            None => Value::Null,
            Some(h) => h.to_u64().map_or_else(|| json!(h.to_string()), |v| json!(v)),
        };
        json!({
            "point": self.point.to_json(),
            "degree": self.degree,
            "height": height,
            "source": self.source,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, GeometryError> {
        let point = ProjPoint::from_json(v.get("point").unwrap_or(v))?;
        let source = match v.get("source") {
            Some(s) => serde_json::from_value(s.clone())
                .map_err(|e| GeometryError::Invalid(format!("source: {e}")))?,
            None => PointSource::Enumerated,
        };
        Ok(Self::new(point, source))
    }

    fn sort_key(&self) -> (usize, BigInt, Vec<BigInt>, String) {
        (
            self.degree,
            self.height.clone().unwrap_or_default(),
            self.point.integer_coords().map(Vec::from).unwrap_or_default(),
            self.point.to_json().to_string(),
        )
    }
}

/// Sorts records into the canonical output order.
pub fn sort_records(records: &mut [PointRecord]) {
    records.sort_by_cached_key(|r| r.sort_key());
}

/// The form times the lcm of its denominators, as `(exponent, coefficient)`.
fn integral_terms(s: &CubicForm) -> Vec<([u8; 4], BigInt)> {
    let l = s
        .terms()
        .values()
        .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    s.terms()
        .iter()
        .map(|(e, c)| (*e, (c * Rational::from_integer(l.clone())).to_integer()))
        .collect()
}

/// Coefficients of `S(x0, x1, x2, T)` as a cubic in `T`, or `None` on overflow.
fn fiber_coeffs(terms: &[([u8; 4], i128)], x: [i64; 3]) -> Option<[i128; 4]> {
    let mut a = [0i128; 4];
    for (e, c) in terms {
        let mut m = *c;
        for (i, xi) in x.iter().enumerate() {
            for _ in 0..e[i] {
                m = m.checked_mul(*xi as i128)?;
            }
        }
        let k = e[3] as usize;
        a[k] = a[k].checked_add(m)?;
    }
    Some(a)
}

fn horner(a: &[i128; 4], t: i64) -> Option<i128> {
    let t = t as i128;
    a[3].checked_mul(t)?
        .checked_add(a[2])?
        .checked_mul(t)?
        .checked_add(a[1])?
        .checked_mul(t)?
        .checked_add(a[0])
}

fn gcd4(v: [i64; 4]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

fn on_surface(s: &CubicForm, terms: &[([u8; 4], i128)], fast: bool, v: [i64; 4]) -> bool {
    if fast {
        if let Some(val) = fiber_coeffs(terms, [v[0], v[1], v[2]]).and_then(|a| horner(&a, v[3])) {
            return val == 0;
        }
    }
    s.contains(&ProjPoint::from_ints(v).expect("nonzero"))
}

/// All rational points with a primitive integer representative of height
/// at most `height_bound`, one per projective point, in canonical order.
///
/// The box is sharded by the first coordinate and scanned in parallel.
pub fn enumerate_rational(s: &CubicForm, height_bound: u32) -> Vec<PointRecord> {
    let b = height_bound as i64;
    if b == 0 {
        return Vec::new();
    }
    let big = integral_terms(s);
    let small: Option<Vec<([u8; 4], i128)>> = big
        .iter()
        .map(|(e, c)| c.to_i128().map(|c| (*e, c)))
        .collect();
    let fast = small.is_some();
    let terms = small.unwrap_or_default();

    let shard = |x0: i64| -> Vec<[i64; 4]> {
        let mut out = Vec::new();
        // first nonzero coordinate positive
        let r1 = if x0 == 0 { 0..=b } else { -b..=b };
        for x1 in r1 {
            let r2 = if x0 == 0 && x1 == 0 { 0..=b } else { -b..=b };
            for x2 in r2 {
                let lead_zero = x0 == 0 && x1 == 0 && x2 == 0;
                let coeffs = if fast { fiber_coeffs(&terms, [x0, x1, x2]) } else { None };
                let r3 = if lead_zero { 1..=1 } else { -b..=b };
                for x3 in r3 {
                    let v = [x0, x1, x2, x3];
                    if gcd4(v) != 1 {
                        continue;
                    }
                    let zero = match coeffs.as_ref().and_then(|a| horner(a, x3)) {
                        Some(val) => val == 0,
                        None => on_surface(s, &terms, false, v),
                    };
                    if zero {
                        out.push(v);
                    }
                }
            }
        }
        out
    };
    let found: Vec<[i64; 4]> = (0..=b).into_par_iter().flat_map_iter(shard).collect();
    debug_assert!(found.iter().all(|v| on_surface(s, &terms, fast, *v)));
    let mut records: Vec<PointRecord> = found
        .into_iter()
        .map(|v| PointRecord::new(ProjPoint::from_ints(v).expect("nonzero"), PointSource::Enumerated))
        .collect();
    sort_records(&mut records);
    records
}

/// The residual intersection of a line with the surface.
///
/// Basepoints of the line that already lie on the surface are removed
/// first: two such points give their third point, one gives the residual
/// pair (a single point for a tangent line), none gives the full length-3
/// scheme.
pub fn degree3_from_line(s: &CubicForm, line: &Line) -> Result<PointRecord, GeometryError> {
    if !line.algebra().is_rational() {
        return Err(GeometryError::NonRationalLine);
    }
    let (p, q) = line.basepoints();
    let (p_on, q_on) = (s.contains(p), s.contains(q));
    if p_on && q_on {
        return Ok(PointRecord::new(third_point(s, p, q)?, PointSource::ThirdPoint));
    }
    if !p_on && !q_on {
        let delta = delta_point(s, line)?;
        return Ok(PointRecord::new(delta.point, PointSource::LineIntersection));
    }
    let (on, off) = if p_on { (p, q) } else { (q, p) };
    let [_, c1, c2, c3] = s.restrict(on.coords(), off.coords());
    // residual roots of c1 u^2 + c2 u + c3 at the point u·on + off
    let f = Poly::new(vec![c3.rep().coeff(0), c2.rep().coeff(0), c1.rep().coeff(0)]);
    if f.degree() == Some(0) {
        return Ok(PointRecord::new(on.clone(), PointSource::LineIntersection));
    }
    let alg = EtaleAlgebra::new(f.squarefree_part())?;
    let u = alg.generator();
    let on_r = on.as_rationals().expect("rational line");
    let off_r = off.as_rationals().expect("rational line");
    let coords: [AlgElement; 4] =
        std::array::from_fn(|i| &u.scale(&on_r[i]) + &alg.from_rational(off_r[i].clone()));
    let point = ProjPoint::new(coords)?;
    debug_assert!(s.contains(&point));
    Ok(PointRecord::new(point, PointSource::LineIntersection))
}

/// Residuals of the tangent lines at `x` in the directions `g_j e_i - g_i e_j`.
fn tangent_residuals(s: &CubicForm, x: &[Rational; 4]) -> Vec<ProjPoint> {
    let q = EtaleAlgebra::rationals();
    let xc = x.clone().map(|c| q.from_rational(c));
    let g: Vec<Rational> = s.gradient(&xc).iter().map(|c| c.rep().coeff(0)).collect();
    let Some(j) = (0..4).rev().find(|&j| !g[j].is_zero()) else {
        return Vec::new();
    };
    let here = ProjPoint::rational(x.clone()).expect("nonzero");
    let mut out = Vec::new();
    for i in (0..4).filter(|&i| i != j) {
        let mut v = [q_int(0), q_int(0), q_int(0), q_int(0)];
        v[i] = g[j].clone();
        v[j] = -g[i].clone();
        let vc = v.clone().map(|c| q.from_rational(c));
        let [_, _, c2, c3] = s.restrict(&xc, &vc).map(|c| c.rep().coeff(0));
        if c2.is_zero() {
            continue;
        }
        let r: [Rational; 4] = std::array::from_fn(|k| &c3 * &x[k] - &c2 * &v[k]);
        if let Ok(pt) = ProjPoint::rational(r) {
            if pt != here {
                out.push(pt);
            }
        }
    }
    out
}

/// Closes `seeds` under third points of pairs of rational points and
/// tangent-line residuals, for `rounds` rounds, keeping at most `cap`
/// points. The result is deduplicated and in canonical order; with
/// `rounds == 0` it is just the seeds.
pub fn saturate(
    s: &CubicForm,
    seeds: &[PointRecord],
    rounds: usize,
    cap: usize,
) -> Result<Vec<PointRecord>, GeometryError> {
    if seeds.iter().any(|r| !s.contains(&r.point)) {
        return Err(GeometryError::NotOnSurface);
    }
    let mut seen: HashSet<ProjPoint> = HashSet::new();
    let mut known: Vec<PointRecord> = Vec::new();
    for r in seeds {
        if seen.insert(r.point.clone()) {
            known.push(r.clone());
        }
    }
    let mut rational: Vec<[Rational; 4]> = known.iter().filter_map(|r| r.point.as_rationals()).collect();
    let mut frontier_start = 0;

    for _ in 0..rounds {
        let frontier_end = rational.len();
        if frontier_start == frontier_end || known.len() >= cap {
            break;
        }
        let batches: Vec<Vec<PointRecord>> = (frontier_start..frontier_end)
            .into_par_iter()
            .map(|i| {
                let xi = ProjPoint::rational(rational[i].clone()).expect("nonzero");
                let mut out: Vec<PointRecord> = tangent_residuals(s, &rational[i])
                    .into_iter()
                    .map(|p| PointRecord::new(p, PointSource::TangentProcess))
                    .collect();
                for xj in &rational[..i] {
                    let xj = ProjPoint::rational(xj.clone()).expect("nonzero");
                    if let Ok(p) = third_point(s, &xj, &xi) {
                        out.push(PointRecord::new(p, PointSource::ThirdPoint));
                    }
                }
                out
            })
            .collect();
        'merge: for batch in batches {
            for r in batch {
                if known.len() >= cap {
                    break 'merge;
                }
                if seen.insert(r.point.clone()) {
                    rational.push(r.point.as_rationals().expect("rational construction"));
                    known.push(r);
                }
            }
        }
        frontier_start = frontier_end;
    }
    debug_assert!(known.iter().all(|r| s.contains(&r.point)));
    sort_records(&mut known);
    Ok(known)
}
