//! Cubic surfaces in P^3 and the line constructions on them: residual points,
//! the tangent process on plane sections, length-3 schemes cut by lines and
//! the degree-3 point generator built from those.
//!
//! Every coordinate lives in an étale algebra, so a single call handles a
//! rational point, a conjugate pair or a Galois-stable triple at once.
//! Genericity failures are reported as distinct error kinds and never
//! silently skipped.

mod construct;
mod form;
mod point;

pub use construct::{
    collinear, delta_point, fiber_plane, psi_minus_one, restrict_to_line, tangent_residual,
    tangent_residual_split, third_point, LengthThreeScheme,
};
pub use form::{BinaryCubic, CubicForm};
pub use point::{LinearForm, Line, PlanePencil, ProjPoint};

use thiserror::Error;

use crate::algebra::{AlgElement, AlgebraError, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("all coordinates vanish")]
    ZeroPoint,
    #[error("coordinates are over different algebras")]
    AlgebraMismatch,
    #[error("point is not on the surface")]
    NotOnSurface,
    #[error("the two points coincide")]
    EqualPoints,
    #[error("the line lies in the surface")]
    LineInSurface,
    #[error("the point lies on the pencil axis")]
    PointOnAxis,
    #[error("the point is singular on its plane section")]
    SingularSectionPoint,
    #[error("the tangent line lies in the surface")]
    TangentLineInSurface,
    #[error("line basepoints do not span a line")]
    DegenerateLine,
    #[error("the line is not defined over Q")]
    NonRationalLine,
    #[error("lines are not pairwise skew")]
    IntersectingLines,
    #[error("lines are not in standard position")]
    NotInStandardPosition,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl GeometryError {
    /// Stable identifier used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            GeometryError::Algebra(AlgebraError::ZeroDivisorFound { .. }) => "ZeroDivisorFound",
            GeometryError::Algebra(_) => "AlgebraError",
            GeometryError::ZeroPoint => "ZeroPoint",
            GeometryError::AlgebraMismatch => "AlgebraMismatch",
            GeometryError::NotOnSurface => "NotOnSurface",
            GeometryError::EqualPoints => "EqualPoints",
            GeometryError::LineInSurface => "LineInSurface",
            GeometryError::PointOnAxis => "PointOnAxis",
            GeometryError::SingularSectionPoint => "SingularSectionPoint",
            GeometryError::TangentLineInSurface => "TangentLineInSurface",
            GeometryError::DegenerateLine => "DegenerateLine",
            GeometryError::NonRationalLine => "NonRationalLine",
            GeometryError::IntersectingLines => "IntersectingLines",
            GeometryError::NotInStandardPosition => "NotInStandardPosition",
            GeometryError::Invalid(_) => "InvalidInput",
        }
    }
}

/// How a list of algebra elements sits relative to the unit ideal.
pub(crate) enum IdealStatus {
    /// The elements generate the unit ideal.
    Unit,
    /// Every element is zero.
    AllZero,
    /// They vanish simultaneously on a proper component cut out by `factor`.
    Partial(Poly),
}

/// Classifies the ideal generated by `elems` inside their common algebra.
pub(crate) fn ideal_status(elems: &[AlgElement]) -> IdealStatus {
    let Some(first) = elems.first() else {
        return IdealStatus::AllZero;
    };
    let modulus = first.parent().modulus().clone();
    let g = elems
        .iter()
        .fold(modulus.clone(), |acc, e| Poly::gcd(&acc, e.rep()));
    if g.is_one() {
        IdealStatus::Unit
    } else if g == modulus {
        IdealStatus::AllZero
    } else {
        IdealStatus::Partial(g)
    }
}

/// Maps the ideal status of `elems` to a result: `Ok` on the unit ideal,
/// `on_zero` when all vanish, and a zero-divisor error carrying the component
/// otherwise.
pub(crate) fn require_unit_ideal(
    elems: &[AlgElement],
    on_zero: GeometryError,
) -> Result<(), GeometryError> {
    match ideal_status(elems) {
        IdealStatus::Unit => Ok(()),
        IdealStatus::AllZero => Err(on_zero),
        IdealStatus::Partial(factor) => Err(AlgebraError::ZeroDivisorFound { factor }.into()),
    }
}
