use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use super::{is_squarefree, poly_from_json, poly_to_json, AlgebraError, Poly, Rational};

/// The algebra `Q[t]/(modulus)` with a monic squarefree modulus of degree >= 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EtaleAlgebra {
    modulus: Arc<Poly>,
}

impl EtaleAlgebra {
    pub fn new(modulus: Poly) -> Result<Self, AlgebraError> {
        match modulus.degree() {
            None | Some(0) => return Err(AlgebraError::BadModulus(modulus.to_string())),
            _ => {}
        }
        if !modulus.is_monic() || !is_squarefree(&modulus)? {
            return Err(AlgebraError::BadModulus(modulus.to_string()));
        }
        Ok(Self {
            modulus: Arc::new(modulus),
        })
    }

    /// `Q` itself, presented as `Q[t]/(t)`.
    pub fn rationals() -> Self {
        Self {
            modulus: Arc::new(Poly::var()),
        }
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn element(&self, rep: Poly) -> AlgElement {
        let rep = rep.rem(&self.modulus);
        AlgElement {
            parent: self.clone(),
            rep,
        }
    }

    pub fn from_rational(&self, q: Rational) -> AlgElement {
        self.element(Poly::constant(q))
    }

    pub fn zero(&self) -> AlgElement {
        self.element(Poly::zero())
    }

    pub fn one(&self) -> AlgElement {
        self.element(Poly::one())
    }

    /// The class of `t`.
    pub fn generator(&self) -> AlgElement {
        self.element(Poly::var())
    }

    /// Splits along a factor reported by [`AlgebraError::ZeroDivisorFound`].
    ///
    /// Returns `(Q[t]/(g), Q[t]/(f/g))`; `factor` must be a proper monic divisor.
    pub fn split(&self, factor: &Poly) -> Result<(EtaleAlgebra, EtaleAlgebra), AlgebraError> {
        let g = factor.monic();
        let (h, r) = self.modulus.div_rem(&g);
        if !r.is_zero() || g.is_constant() || h.is_constant() {
            return Err(AlgebraError::BadModulus(format!(
                "{factor} is not a proper factor of {}",
                self.modulus
            )));
        }
        Ok((EtaleAlgebra::new(g)?, EtaleAlgebra::new(h.monic())?))
    }

    /// Chinese remaindering: the element of `self` whose image in each
    /// component algebra is the given element. The component moduli must
    /// multiply to `self.modulus`.
    pub fn crt(&self, parts: &[AlgElement]) -> Result<AlgElement, AlgebraError> {
        let product = parts
            .iter()
            .fold(Poly::one(), |acc, e| &acc * e.parent.modulus());
        if &product != self.modulus() {
            return Err(AlgebraError::ParentMismatch);
        }
        let mut acc = Poly::zero();
        for part in parts {
            let mi = part.parent.modulus();
            let rest = self.modulus.div_rem(mi).0;
            // rest * inv(rest mod mi) is 1 on this component and 0 on the others
            let (_, u, _) = Poly::xgcd(&rest, mi);
            let idem = &rest * &u;
            acc = &acc + &(&idem * &part.rep);
        }
        Ok(self.element(acc))
    }

    pub fn to_json(&self) -> serde_json::Value {
        poly_to_json(&self.modulus)
    }
}

impl fmt::Debug for EtaleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[t]/({})", self.modulus)
    }
}

/// Element of an étale algebra, stored as its reduced representative.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgElement {
    parent: EtaleAlgebra,
    rep: Poly,
}

impl AlgElement {
    pub fn parent(&self) -> &EtaleAlgebra {
        &self.parent
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    /// Units are exactly the elements coprime to the modulus.
    pub fn is_unit(&self) -> bool {
        !self.rep.is_zero() && Poly::gcd(&self.rep, self.parent.modulus()).is_one()
    }

    /// The constant value, when the representative has degree <= 0.
    pub fn as_rational(&self) -> Option<Rational> {
        self.rep.is_constant().then(|| self.rep.coeff(0))
    }

    /// Image under `t -> root`; `root` must be a root of the modulus.
    pub fn specialize(&self, root: &Rational) -> Rational {
        debug_assert!(self.parent.modulus().eval(root).is_zero());
        self.rep.eval(root)
    }

    /// Image in a component algebra whose modulus divides this one.
    pub fn project(&self, component: &EtaleAlgebra) -> AlgElement {
        component.element(self.rep.clone())
    }

    fn check_parent(&self, other: &AlgElement) -> Result<(), AlgebraError> {
        if self.parent == other.parent {
            Ok(())
        } else {
            Err(AlgebraError::ParentMismatch)
        }
    }

    pub fn try_add(&self, other: &AlgElement) -> Result<AlgElement, AlgebraError> {
        self.check_parent(other)?;
        Ok(AlgElement {
            parent: self.parent.clone(),
            rep: &self.rep + &other.rep,
        })
    }

    pub fn try_sub(&self, other: &AlgElement) -> Result<AlgElement, AlgebraError> {
        self.check_parent(other)?;
        Ok(AlgElement {
            parent: self.parent.clone(),
            rep: &self.rep - &other.rep,
        })
    }

    pub fn try_mul(&self, other: &AlgElement) -> Result<AlgElement, AlgebraError> {
        self.check_parent(other)?;
        Ok(self.parent.element(&self.rep * &other.rep))
    }

    pub fn scale(&self, q: &Rational) -> AlgElement {
        AlgElement {
            parent: self.parent.clone(),
            rep: self.rep.scale(q),
        }
    }

    /// Inverse via extended Euclid against the modulus.
    ///
    /// A non-unit yields `ZeroDivisorFound` with the monic proper factor
    /// `gcd(rep, modulus)` of the modulus.
    pub fn invert(&self) -> Result<AlgElement, AlgebraError> {
        if self.rep.is_zero() {
            return Err(AlgebraError::InverseOfZero);
        }
        let (g, u, _) = Poly::xgcd(&self.rep, self.parent.modulus());
        if !g.is_one() {
            return Err(AlgebraError::ZeroDivisorFound { factor: g });
        }
        Ok(self.parent.element(u))
    }

    pub fn try_div(&self, other: &AlgElement) -> Result<AlgElement, AlgebraError> {
        self.try_mul(&other.invert()?)
    }

    pub fn pow(&self, mut e: u32) -> AlgElement {
        let mut base = self.clone();
        let mut acc = self.parent.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "modulus": poly_to_json(self.parent.modulus()),
            "rep": poly_to_json(&self.rep),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<AlgElement, AlgebraError> {
        let bad = || AlgebraError::Parse(v.to_string());
        let modulus = poly_from_json(v.get("modulus").ok_or_else(bad)?)?;
        let rep = poly_from_json(v.get("rep").ok_or_else(bad)?)?;
        Ok(EtaleAlgebra::new(modulus)?.element(rep))
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parent.is_rational() {
            write!(f, "{}", self.rep.coeff(0))
        } else {
            write!(f, "[{}]", self.rep)
        }
    }
}

// Operator forms panic on a parent mismatch; the geometry layer only ever
// combines coordinates of a single point or line.
impl Add for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        self.try_add(rhs).expect("algebra mismatch in add")
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        self.try_sub(rhs).expect("algebra mismatch in sub")
    }
}

impl Mul for &AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        self.try_mul(rhs).expect("algebra mismatch in mul")
    }
}

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        AlgElement {
            parent: self.parent.clone(),
            rep: -&self.rep,
        }
    }
}
