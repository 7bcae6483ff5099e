//! Degree descent for 0-cycles on del Pezzo surfaces of degree 1, 2 and 3.
//!
//! A [`CycleState`] records an identity `z = ε z' + Σ c_b b` in `CH_0(S)`
//! with `z'` effective of known degree and `b` ranging over fixed basis
//! cycles. [`Move`]s rewrite the identity using effectivity lemmas whose
//! hypotheses are numerical inequalities in `h^0(S, O_S(l))`; the lemmas
//! themselves are taken as axioms. A [`Certificate`] is a replayable chain
//! of moves, checked by [`verify_certificate`] without any search.
//!
//! The lemma for subtracting a cycle via rank-2 bundles is sometimes cited
//! with a part "(b)" that its statement does not have; the single stated
//! pair of inequalities is what [`Move::VBSubtract`] checks.

mod moves;
pub mod rr;
mod search;
mod suite;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use moves::{apply_move, candidate_moves, Move, MoveLimits};
pub use search::{find_certificate, induction_step, DegreeSet, Goal, SearchOptions};
pub use suite::{
    coray_chain_10, effectivity_threshold, prove_bound_suite, sign_freedom, SuiteKind,
    SuiteReport, SuiteRow, ThresholdReport,
};
pub use verify::{verify_certificate, Certificate, Verification};

/// Integer combination of basis cycles, keyed by symbol.
pub type Combo = BTreeMap<String, i64>;

pub const H: &str = "h";
pub const X4: &str = "x4";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("del Pezzo degree {0} is not 1, 2 or 3")]
    UnsupportedDegree(u8),
    #[error("{0}")]
    OutOfRange(String),
    #[error("unknown basis symbol {0:?}")]
    UnknownBasis(String),
    #[error("{kind}: precondition failed: {inequality}")]
    PreconditionFailed { kind: String, inequality: String },
    #[error("no certificate found from degree {start} after exploring {explored} states (lowest degree reached {lowest})")]
    NotFound {
        start: u64,
        explored: usize,
        lowest: u64,
    },
}

impl DescentError {
    pub fn kind(&self) -> &'static str {
        match self {
            DescentError::UnsupportedDegree(_) => "UnsupportedDegree",
            DescentError::OutOfRange(_) => "OutOfRange",
            DescentError::UnknownBasis(_) => "UnknownBasis",
            DescentError::PreconditionFailed { .. } => "PreconditionFailed",
            DescentError::NotFound { .. } => "NotFound",
        }
    }
}

/// A del Pezzo surface, seen only through its degree and the basis cycles
/// known to exist on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DelPezzo {
    d_s: u8,
    x4: bool,
}

impl DelPezzo {
    pub fn new(d_s: u8, with_x4: bool) -> Result<Self, DescentError> {
        if !(1..=3).contains(&d_s) {
            return Err(DescentError::UnsupportedDegree(d_s));
        }
        if with_x4 && d_s != 3 {
            return Err(DescentError::OutOfRange(
                "a degree-4 basis cycle is only used on cubic surfaces".into(),
            ));
        }
        Ok(Self { d_s, x4: with_x4 })
    }

    pub fn cubic() -> Self {
        Self { d_s: 3, x4: false }
    }

    pub fn d_s(&self) -> u8 {
        self.d_s
    }

    pub fn has_x4(&self) -> bool {
        self.x4
    }

    /// Basis symbols with their degrees, `h` first.
    pub fn basis(&self) -> Vec<(&'static str, i64)> {
        let mut b = vec![(H, self.d_s as i64)];
        if self.x4 {
            b.push((X4, 4));
        }
        b
    }

    pub fn basis_degree(&self, sym: &str) -> Result<i64, DescentError> {
        self.basis()
            .into_iter()
            .find(|(s, _)| *s == sym)
            .map(|(_, d)| d)
            .ok_or_else(|| DescentError::UnknownBasis(sym.to_string()))
    }

    pub fn combo_degree(&self, c: &Combo) -> Result<i64, DescentError> {
        c.iter()
            .map(|(s, k)| self.basis_degree(s).map(|d| d * k))
            .sum()
    }

    pub fn h0(&self, l: u64) -> u64 {
        rr::h0(self.d_s, l).expect("validated degree")
    }

    pub fn genus(&self, l: u64) -> u64 {
        rr::genus(self.d_s, l.max(1)).expect("validated degree")
    }
}

impl Serialize for DelPezzo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            #[serde(rename = "dS")]
            d_s: u8,
            basis: Vec<&'static str>,
        }
        Repr {
            d_s: self.d_s,
            basis: self.basis().into_iter().map(|(s, _)| s).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DelPezzo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            #[serde(rename = "dS")]
            d_s: u8,
            basis: Vec<String>,
        }
        let r = Repr::deserialize(d)?;
        if !r.basis.iter().any(|b| b == H) {
            return Err(serde::de::Error::custom("basis must contain \"h\""));
        }
        if let Some(b) = r.basis.iter().find(|b| *b != H && *b != X4) {
            return Err(serde::de::Error::custom(format!("unknown basis symbol {b:?}")));
        }
        DelPezzo::new(r.d_s, r.basis.iter().any(|b| b == X4)).map_err(serde::de::Error::custom)
    }
}

fn default_true() -> bool {
    true
}

/// `z = sign · z' + Σ coeffs[b] · b` with `z'` of degree `unknown_degree`.
///
/// With `effective == false` the state describes a bare class of that
/// degree which is not yet known to be effective.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleState {
    pub sign: i8,
    pub unknown_degree: u64,
    pub coeffs: Combo,
    #[serde(default = "default_true")]
    pub effective: bool,
}

impl CycleState {
    /// An effective cycle of the given degree.
    pub fn start(degree: u64) -> Self {
        Self {
            sign: 1,
            unknown_degree: degree,
            coeffs: Combo::new(),
            effective: true,
        }
    }

    /// An arbitrary class of the given degree.
    pub fn raw_class(degree: u64) -> Self {
        Self {
            effective: false,
            ..Self::start(degree)
        }
    }

    pub fn coeff(&self, sym: &str) -> i64 {
        self.coeffs.get(sym).copied().unwrap_or(0)
    }

    /// Degree of the tracked class; invariant under every move.
    pub fn total_degree(&self, s: &DelPezzo) -> Result<i64, DescentError> {
        Ok(self.sign as i64 * self.unknown_degree as i64 + s.combo_degree(&self.coeffs)?)
    }

    pub(crate) fn add_combo(&mut self, c: &Combo, factor: i64) {
        for (k, v) in c {
            let e = self.coeffs.entry(k.clone()).or_insert(0);
            *e += factor * v;
            if *e == 0 {
                self.coeffs.remove(k);
            }
        }
    }
}

impl fmt::Display for CycleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { "+" } else { "-" };
        write!(f, "z = {s}z'[{}]", self.unknown_degree)?;
        for (k, v) in &self.coeffs {
            write!(f, " {:+}{k}", v)?;
        }
        if !self.effective {
            write!(f, " (class)")?;
        }
        Ok(())
    }
}

/// Builds a [`Combo`] from symbol/coefficient pairs, dropping zeros.
pub fn combo(items: &[(&str, i64)]) -> Combo {
    let mut c = Combo::new();
    for (k, v) in items {
        if *v != 0 {
            *c.entry(k.to_string()).or_insert(0) += v;
        }
    }
    c.retain(|_, v| *v != 0);
    c
}
