use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::moves::{apply_move, Move};
use super::search::{find_certificate, find_from, DegreeSet, Goal, SearchOptions};
use super::verify::{verify_certificate, Certificate};
use super::{combo, CycleState, DelPezzo, DescentError, H};

/// The bound statements checked over a range of start degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SuiteKind {
    /// Cubic: `z = ±z' + γh` with `deg z' <= 18`.
    CubicBound,
    /// Cubic with a degree-4 cycle: `deg z' <= 4`.
    CubicWithX4,
    /// Cubic, start degree `<= 17` prime to 3: final degree 1 or 4.
    Coray,
    /// Degree 2: `z = z' + γh`, `deg z' <= 13`.
    Dp2Bound,
    /// Degree 2: `deg z' ∈ {13, 12}` or `<= 7`, positive sign.
    Dp2Refined,
    /// Degree 2 with even start degrees only: `deg z' <= 12`, positive sign.
    Dp2Even,
    /// Degree 1: `z = z' + γh`, `deg z' <= 15`.
    Dp1Bound,
    /// Degree 1: `deg z' ∈ {15, 7}` or `<= 4`, either sign.
    Dp1Refined,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 8] = [
        SuiteKind::CubicBound,
        SuiteKind::CubicWithX4,
        SuiteKind::Coray,
        SuiteKind::Dp2Bound,
        SuiteKind::Dp2Refined,
        SuiteKind::Dp2Even,
        SuiteKind::Dp1Bound,
        SuiteKind::Dp1Refined,
    ];

    pub fn surface(self) -> DelPezzo {
        let (d, x4) = match self {
            SuiteKind::CubicBound | SuiteKind::Coray => (3, false),
            SuiteKind::CubicWithX4 => (3, true),
            SuiteKind::Dp2Bound | SuiteKind::Dp2Refined | SuiteKind::Dp2Even => (2, false),
            SuiteKind::Dp1Bound | SuiteKind::Dp1Refined => (1, false),
        };
        DelPezzo::new(d, x4).expect("valid surface")
    }

    pub fn goal(self) -> Goal {
        let g = |degrees, sign| Goal { degrees, sign, nonneg_coeffs: false };
        match self {
            SuiteKind::CubicBound => g(DegreeSet::AtMost(18), None),
            SuiteKind::CubicWithX4 => g(DegreeSet::AtMost(4), None),
            SuiteKind::Coray => g(DegreeSet::OneOf(vec![1, 4]), None),
            SuiteKind::Dp2Bound => g(DegreeSet::AtMost(13), Some(1)),
            SuiteKind::Dp2Refined => g(DegreeSet::OneOfOrAtMost(vec![12, 13], 7), Some(1)),
            SuiteKind::Dp2Even => g(DegreeSet::AtMost(12), Some(1)),
            SuiteKind::Dp1Bound => g(DegreeSet::AtMost(15), Some(1)),
            SuiteKind::Dp1Refined => g(DegreeSet::OneOfOrAtMost(vec![7, 15], 4), None),
        }
    }

    /// Start degrees covered up to `ceiling`.
    pub fn starts(self, ceiling: u64) -> Vec<u64> {
        match self {
            SuiteKind::Coray => (1..=ceiling.min(17)).filter(|d| d % 3 != 0).collect(),
            SuiteKind::Dp2Even => (1..=ceiling).filter(|d| d % 2 == 0).collect(),
            _ => (1..=ceiling).collect(),
        }
    }

    pub fn parse(name: &str, d_s: u8, with_x4: bool) -> Option<Self> {
        Some(match (name, d_s, with_x4) {
            ("bound", 3, false) => SuiteKind::CubicBound,
            ("bound", 3, true) => SuiteKind::CubicWithX4,
            ("coray", 3, _) => SuiteKind::Coray,
            ("bound", 2, false) => SuiteKind::Dp2Bound,
            ("refined", 2, false) => SuiteKind::Dp2Refined,
            ("even", 2, false) => SuiteKind::Dp2Even,
            ("bound", 1, false) => SuiteKind::Dp1Bound,
            ("refined", 1, false) => SuiteKind::Dp1Refined,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub start: u64,
    pub final_degree: Option<u64>,
    pub final_sign: Option<i8>,
    pub moves: Option<usize>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub kind: SuiteKind,
    pub surface: DelPezzo,
    pub ceiling: u64,
    pub rows: Vec<SuiteRow>,
    pub all_verified: bool,
    pub max_final_degree: Option<u64>,
}

fn row(surface: &DelPezzo, start: u64, goal: &Goal, opts: &SearchOptions) -> SuiteRow {
    match find_certificate(surface, start, goal, opts) {
        Ok(c) => {
            let ok = verify_certificate(&c).valid && goal.accepts(&c.final_state);
            SuiteRow {
                start,
                final_degree: Some(c.final_state.unknown_degree),
                final_sign: Some(c.final_state.sign),
                moves: Some(c.moves.len()),
                verified: ok,
                error: None,
            }
        }
        Err(e) => SuiteRow {
            start,
            final_degree: None,
            final_sign: None,
            moves: None,
            verified: false,
            error: Some(e.to_string()),
        },
    }
}

/// Searches and verifies a certificate for every start degree of the suite.
pub fn prove_bound_suite(kind: SuiteKind, ceiling: u64, opts: &SearchOptions) -> SuiteReport {
    let surface = kind.surface();
    let goal = kind.goal();
    let rows: Vec<SuiteRow> = kind
        .starts(ceiling)
        .into_par_iter()
        .map(|d| row(&surface, d, &goal, opts))
        .collect();
    SuiteReport {
        kind,
        surface,
        ceiling,
        all_verified: rows.iter().all(|r| r.verified),
        max_final_degree: rows.iter().filter_map(|r| r.final_degree).max(),
        rows,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub surface: DelPezzo,
    pub threshold: u64,
    pub ceiling: u64,
    pub even_only: bool,
    /// Certificates replayed, one per (class degree, entry multiple of h).
    pub certificates: usize,
    pub all_effective: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

/// Every class `z` of degree `D` with `threshold <= D <= ceiling` is
/// effective: enter with `z + γh` effective, descend to `z = z'' + αh`
/// with `z''` effective and `α >= 0`.
///
/// `γ` is unknown, so every `γ` whose entry degree lies in
/// `1..=entry_ceiling` is certified. Without a degree-4 cycle the descent
/// chain depends only on the entry degree and is reused; with one, each
/// pair is searched separately.
pub fn effectivity_threshold(
    surface: &DelPezzo,
    threshold: u64,
    ceiling: u64,
    entry_ceiling: u64,
    even_only: bool,
    opts: &SearchOptions,
) -> ThresholdReport {
    let ds = surface.d_s() as i64;
    let goal = Goal {
        degrees: DegreeSet::AtMost(if surface.has_x4() { entry_ceiling.max(ceiling) + 20 } else { threshold }),
        sign: Some(1),
        nonneg_coeffs: true,
    };
    let chain_goal = Goal {
        degrees: DegreeSet::AtMost(threshold),
        sign: Some(1),
        nonneg_coeffs: false,
    };
    let entries: Vec<u64> = (1..=entry_ceiling).filter(|e| !even_only || e % 2 == 0).collect();
    let chains: HashMap<u64, Result<Vec<Move>, DescentError>> = if surface.has_x4() {
        HashMap::new()
    } else {
        entries
            .par_iter()
            .map(|&e| (e, find_certificate(surface, e, &chain_goal, opts).map(|c| c.moves)))
            .collect()
    };

    let jobs: Vec<(u64, i64)> = (threshold..=ceiling)
        .filter(|d| !even_only || d % 2 == 0)
        .flat_map(|d| {
            entries
                .iter()
                .filter(move |&&e| (e as i64 - d as i64).rem_euclid(ds) == 0)
                .map(move |&e| (d, (e as i64 - d as i64) / ds))
        })
        .collect();

    let results: Vec<Result<(), String>> = jobs
        .par_iter()
        .map(|&(d, gamma)| {
            let raw = CycleState::raw_class(d);
            let entry = Move::entry_rr(surface, d, gamma);
            let start = apply_move(surface, &raw, &entry).map_err(|e| e.to_string())?;
            let mut moves = vec![entry];
            let final_state = if surface.has_x4() {
                let c = find_from(surface, start, &goal, opts).map_err(|e| format!("D = {d}, gamma = {gamma}: {e}"))?;
                moves.extend(c.moves);
                c.final_state
            } else {
                let chain = chains[&start.unknown_degree]
                    .as_ref()
                    .map_err(|e| format!("entry degree {}: {e}", start.unknown_degree))?;
                let mut st = start;
                for m in chain {
                    st = apply_move(surface, &st, m).map_err(|e| e.to_string())?;
                    moves.push(m.clone());
                }
                st
            };
            let cert = Certificate {
                surface: *surface,
                initial: raw,
                moves,
                final_state,
            };
            let v = verify_certificate(&cert);
            if !v.valid {
                return Err(format!("D = {d}, gamma = {gamma}: {}", v.reason.unwrap_or_default()));
            }
            if !goal.accepts(&cert.final_state) {
                return Err(format!("D = {d}, gamma = {gamma}: ends at {}", cert.final_state));
            }
            Ok(())
        })
        .collect();
    let failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    ThresholdReport {
        surface: *surface,
        threshold,
        ceiling,
        even_only,
        certificates: jobs.len(),
        all_effective: failures.is_empty() && !jobs.is_empty(),
        failures,
    }
}

/// For each start degree, whether the bound is reachable with each sign of
/// the unknown part.
pub fn sign_freedom(surface: &DelPezzo, bound: u64, ceiling: u64, opts: &SearchOptions) -> Vec<(u64, bool, bool)> {
    (1..=ceiling)
        .into_par_iter()
        .map(|d| {
            let reach = |sign| {
                find_certificate(surface, d, &Goal::at_most(bound).with_sign(sign), opts)
                    .map(|c| verify_certificate(&c).valid)
                    .unwrap_or(false)
            };
            (d, reach(1), reach(-1))
        })
        .collect()
}

/// The chain reducing an effective cycle of degree 10 on a cubic surface
/// to degree 4: add `2h`, complement in `9h`, subtract `h`, complement in `4h`.
pub fn coray_chain_10() -> Certificate {
    let s = DelPezzo::cubic();
    let moves = vec![
        Move::add_basis(combo(&[(H, 2)])),
        Move::complement(&s, 2),
        Move::vb_subtract(&s, 2, combo(&[(H, 1)])),
        Move::complement(&s, 1),
    ];
    let initial = CycleState::start(10);
    let mut st = initial.clone();
    for m in &moves {
        st = apply_move(&s, &st, m).expect("chain is valid");
    }
    Certificate {
        surface: s,
        initial,
        moves,
        final_state: st,
    }
}
