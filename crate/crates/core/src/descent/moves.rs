use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{combo, Combo, CycleState, DelPezzo, DescentError, H, X4};
use super::rr::{globally_generated_from, vb_min_l, very_ample_from};

/// Evaluated `h^0` and genus values a move relies on.
pub type Witness = BTreeMap<String, i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveMode {
    /// `z' ↦ B - z'`.
    Complement,
    /// `B` itself is effective and joins the unknown part.
    Absorb,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Move {
    /// `(l+1)^2 h - z'` is effective when `d <= h^0(O(l+1)) - 2`.
    Complement { l: u64, witness: Witness },
    /// `l(l+1) h - z'` is effective when `h^0(O(l)) >= d + 1` and
    /// `h^0(O(l+1)) - d > h^0(O(1))`.
    VariantComplement { l: u64, witness: Witness },
    /// `z' - target` is effective when `h^0(O(l)) < d` and
    /// `h^0(O(l+1)) - d >= 2s`, `s = deg target`.
    VBSubtract {
        l: u64,
        s: u64,
        target: Combo,
        witness: Witness,
    },
    /// `z + ι(z) = (deg z) h` on a degree-2 surface.
    InvolutionFlip {},
    /// Riemann–Roch on a smooth member of `|O(l)|` carrying the cycles.
    CurveRR {
        l: u64,
        combo: Combo,
        mode: CurveMode,
        witness: Witness,
    },
    /// Merge a nonnegative basis combination into the unknown part.
    AddBasis { combo: Combo },
    /// `z + γ h` is effective for a bare class `z`.
    EntryRR { gamma: i64, witness: Witness },
}

fn wit(items: &[(&str, i64)]) -> Witness {
    items.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

impl Move {
    pub fn kind(&self) -> &'static str {
        match self {
            Move::Complement { .. } => "Complement",
            Move::VariantComplement { .. } => "VariantComplement",
            Move::VBSubtract { .. } => "VBSubtract",
            Move::InvolutionFlip {} => "InvolutionFlip",
            Move::CurveRR { .. } => "CurveRR",
            Move::AddBasis { .. } => "AddBasis",
            Move::EntryRR { .. } => "EntryRR",
        }
    }

    pub fn complement(s: &DelPezzo, l: u64) -> Self {
        Move::Complement {
            l,
            witness: wit(&[("h0_l1", s.h0(l + 1) as i64)]),
        }
    }

    pub fn variant_complement(s: &DelPezzo, l: u64) -> Self {
        Move::VariantComplement {
            l,
            witness: wit(&[
                ("h0_l", s.h0(l) as i64),
                ("h0_l1", s.h0(l + 1) as i64),
                ("h0_1", s.h0(1) as i64),
            ]),
        }
    }

    pub fn vb_subtract(s: &DelPezzo, l: u64, target: Combo) -> Self {
        let deg = s.combo_degree(&target).unwrap_or(0).max(0) as u64;
        Move::VBSubtract {
            l,
            s: deg,
            target,
            witness: wit(&[("h0_l", s.h0(l) as i64), ("h0_l1", s.h0(l + 1) as i64)]),
        }
    }

    pub fn curve_rr(s: &DelPezzo, l: u64, combo: Combo, mode: CurveMode) -> Self {
        Move::CurveRR {
            l,
            combo,
            mode,
            witness: wit(&[("h0_l", s.h0(l) as i64), ("genus", s.genus(l) as i64)]),
        }
    }

    pub fn add_basis(combo: Combo) -> Self {
        Move::AddBasis { combo }
    }

    pub fn entry_rr(s: &DelPezzo, class_degree: u64, gamma: i64) -> Self {
        Move::EntryRR {
            gamma,
            witness: wit(&[("min_gamma", min_gamma(s, class_degree))]),
        }
    }
}

/// Least `γ` with `deg z + γ d_S >= 0`.
pub(crate) fn min_gamma(s: &DelPezzo, class_degree: u64) -> i64 {
    let d = s.d_s() as i64;
    -((class_degree as i64) / d)
}

fn fail(kind: &str, inequality: String) -> DescentError {
    DescentError::PreconditionFailed {
        kind: kind.to_string(),
        inequality,
    }
}

fn check_witness(kind: &str, w: &Witness, key: &str, actual: u64) -> Result<(), DescentError> {
    match w.get(key) {
        Some(&v) if v == actual as i64 => Ok(()),
        Some(&v) => Err(fail(kind, format!("witness {key} = {v} but the correct value is {actual}"))),
        None => Err(fail(kind, format!("missing witness {key}"))),
    }
}

/// Support degree of the non-`h` cycles occurring in a combination.
fn point_support(s: &DelPezzo, c: &Combo) -> Result<i64, DescentError> {
    let mut total = 0;
    for (k, v) in c {
        if k != H && *v != 0 {
            total += s.basis_degree(k)?;
        }
    }
    Ok(total)
}

fn check_target(s: &DelPezzo, target: &Combo) -> Result<(), DescentError> {
    let kind = "VBSubtract";
    if target.is_empty() || target.values().any(|&v| v < 0) {
        return Err(fail(kind, "target must be a nonzero effective basis combination".into()));
    }
    for k in target.keys() {
        s.basis_degree(k)?;
    }
    if s.d_s() != 3 && target.keys().any(|k| k != H) {
        return Err(fail(kind, format!("on degree {} only multiples of h may be subtracted", s.d_s())));
    }
    Ok(())
}

/// Applies one move, checking every precondition and witness.
pub fn apply_move(s: &DelPezzo, st: &CycleState, m: &Move) -> Result<CycleState, DescentError> {
    let kind = m.kind();
    if !matches!(m, Move::EntryRR { .. }) && !st.effective {
        return Err(fail(kind, "the unknown part is not yet known to be effective".into()));
    }
    let d = st.unknown_degree as i64;
    let eps = st.sign as i64;
    let mut next = st.clone();
    match m {
        Move::Complement { l, witness } => {
            let m1 = l + 1;
            if m1 < very_ample_from(s.d_s()) {
                return Err(fail(kind, format!("O({m1}) is not very ample for d_S = {}", s.d_s())));
            }
            let h1 = s.h0(m1);
            check_witness(kind, witness, "h0_l1", h1)?;
            if d > h1 as i64 - 2 {
                return Err(fail(kind, format!("d = {d} <= h0(O({m1})) - 2 = {}", h1 as i64 - 2)));
            }
            let b = combo(&[(H, (m1 * m1) as i64)]);
            complement_update(s, &mut next, &b)?;
        }
        Move::VariantComplement { l, witness } => {
            if *l < globally_generated_from(s.d_s()) {
                return Err(fail(kind, format!("O({l}) is not generated by sections for d_S = {}", s.d_s())));
            }
            let (hl, hl1, h1) = (s.h0(*l), s.h0(l + 1), s.h0(1));
            check_witness(kind, witness, "h0_l", hl)?;
            check_witness(kind, witness, "h0_l1", hl1)?;
            check_witness(kind, witness, "h0_1", h1)?;
            if (hl as i64) < d + 1 {
                return Err(fail(kind, format!("h0(O({l})) = {hl} >= d + 1 = {}", d + 1)));
            }
            if hl1 as i64 - d <= h1 as i64 {
                return Err(fail(kind, format!("h0(O({})) - d = {} > h0(O(1)) = {h1}", l + 1, hl1 as i64 - d)));
            }
            let b = combo(&[(H, (l * (l + 1)) as i64)]);
            complement_update(s, &mut next, &b)?;
        }
        Move::VBSubtract { l, s: sdeg, target, witness } => {
            if *l < vb_min_l(s.d_s()) {
                return Err(fail(kind, format!("l = {l} below {} for d_S = {}", vb_min_l(s.d_s()), s.d_s())));
            }
            check_target(s, target)?;
            let tdeg = s.combo_degree(target)?;
            if tdeg != *sdeg as i64 {
                return Err(fail(kind, format!("s = {sdeg} but the target has degree {tdeg}")));
            }
            let (hl, hl1) = (s.h0(*l), s.h0(l + 1));
            check_witness(kind, witness, "h0_l", hl)?;
            check_witness(kind, witness, "h0_l1", hl1)?;
            if hl as i64 >= d {
                return Err(fail(kind, format!("h0(O({l})) = {hl} < d = {d}")));
            }
            if hl1 as i64 - d < 2 * tdeg {
                return Err(fail(kind, format!("h0(O({})) - d = {} >= 2s = {}", l + 1, hl1 as i64 - d, 2 * tdeg)));
            }
            next.unknown_degree -= tdeg as u64;
            next.add_combo(target, eps);
        }
        Move::InvolutionFlip {} => {
            if s.d_s() != 2 {
                return Err(fail(kind, "the involution exists only for d_S = 2".into()));
            }
            next.sign = -st.sign;
            next.add_combo(&combo(&[(H, eps * d)]), 1);
        }
        Move::CurveRR { l, combo: b, mode, witness } => {
            if *l < very_ample_from(s.d_s()) {
                return Err(fail(kind, format!("|O({l})| has no smooth member through general points for d_S = {}", s.d_s())));
            }
            let (hl, g) = (s.h0(*l), s.genus(*l));
            check_witness(kind, witness, "h0_l", hl)?;
            check_witness(kind, witness, "genus", g)?;
            let bdeg = s.combo_degree(b)?;
            let support = point_support(s, b)?;
            match mode {
                CurveMode::Complement => {
                    if d + support > hl as i64 - 2 {
                        return Err(fail(kind, format!("support degree {} <= h0(O({l})) - 2 = {}", d + support, hl as i64 - 2)));
                    }
                    if bdeg - d < g as i64 {
                        return Err(fail(kind, format!("deg B - d = {} >= genus {g}", bdeg - d)));
                    }
                    complement_update(s, &mut next, b)?;
                }
                CurveMode::Absorb => {
                    if st.sign < 0 {
                        return Err(fail(kind, "absorbing needs a positive unknown part".into()));
                    }
                    if support > hl as i64 - 2 {
                        return Err(fail(kind, format!("support degree {support} <= h0(O({l})) - 2 = {}", hl as i64 - 2)));
                    }
                    if bdeg < g as i64 {
                        return Err(fail(kind, format!("deg B = {bdeg} >= genus {g}")));
                    }
                    next.unknown_degree += bdeg as u64;
                    next.add_combo(b, -1);
                }
            }
        }
        Move::AddBasis { combo: k } => {
            if k.is_empty() || k.values().any(|&v| v < 0) {
                return Err(fail(kind, "combination must be nonzero and effective".into()));
            }
            let kdeg = s.combo_degree(k)?;
            next.unknown_degree += kdeg as u64;
            next.add_combo(k, -eps);
        }
        Move::EntryRR { gamma, witness } => {
            if st.effective {
                return Err(fail(kind, "state is already effective".into()));
            }
            let mg = min_gamma(s, st.unknown_degree);
            match witness.get("min_gamma") {
                Some(&v) if v == mg => {}
                _ => return Err(fail(kind, format!("witness min_gamma must be {mg}"))),
            }
            if *gamma < mg {
                return Err(fail(kind, format!("gamma = {gamma} >= {mg}")));
            }
            let nd = d + gamma * s.d_s() as i64;
            next.unknown_degree = nd as u64;
            next.effective = true;
            next.add_combo(&combo(&[(H, *gamma)]), -1);
        }
    }
    Ok(next)
}

/// `z' = B - z''`: flips the sign and replaces the unknown by `z''`.
fn complement_update(s: &DelPezzo, st: &mut CycleState, b: &Combo) -> Result<(), DescentError> {
    let bdeg = s.combo_degree(b)?;
    let d = st.unknown_degree as i64;
    if bdeg < d {
        return Err(fail("Complement", format!("deg B = {bdeg} >= d = {d}")));
    }
    let eps = st.sign as i64;
    st.sign = -st.sign;
    st.unknown_degree = (bdeg - d) as u64;
    st.add_combo(b, eps);
    Ok(())
}

/// Bounds on the move parameters generated during search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveLimits {
    /// Largest unknown degree a generated move may produce.
    pub degree_cap: u64,
    /// Largest `|coefficient|` of a non-`h` basis cycle.
    pub extra_coeff_cap: i64,
    pub curve_rr: bool,
}

fn vb_targets(s: &DelPezzo) -> Vec<Combo> {
    let mut t: Vec<Combo> = (1..=3).map(|k| combo(&[(H, k)])).collect();
    if s.has_x4() {
        t.push(combo(&[(X4, 1)]));
        t.push(combo(&[(H, 1), (X4, 1)]));
        t.push(combo(&[(X4, 2)]));
    }
    t.sort_by_key(|c| (s.combo_degree(c).unwrap_or(0), c.clone()));
    t
}

fn add_targets(s: &DelPezzo) -> Vec<Combo> {
    let mut t: Vec<Combo> = (1..=3).map(|k| combo(&[(H, k)])).collect();
    if s.has_x4() {
        t.push(combo(&[(X4, 1)]));
        t.push(combo(&[(X4, 2)]));
        t.push(combo(&[(H, 1), (X4, 2)]));
    }
    t
}

/// All moves applicable to `st` within `lim`, in the fixed search order:
/// subtraction, complements, curve arguments, involution, additions.
pub fn candidate_moves(s: &DelPezzo, st: &CycleState, lim: &MoveLimits) -> Vec<Move> {
    let mut out = Vec::new();
    if !st.effective {
        return out;
    }
    let d = st.unknown_degree;
    let ds = s.d_s() as u64;

    let mut l = vb_min_l(s.d_s());
    while s.h0(l) < d {
        if s.h0(l + 1) >= d {
            for t in vb_targets(s) {
                out.push(Move::vb_subtract(s, l, t));
            }
        }
        l += 1;
    }

    let mut m1 = very_ample_from(s.d_s());
    while m1 * m1 * ds <= lim.degree_cap + d {
        if d + 2 <= s.h0(m1) {
            out.push(Move::complement(s, m1 - 1));
        }
        m1 += 1;
    }

    let mut l = globally_generated_from(s.d_s());
    while l * (l + 1) * ds <= lim.degree_cap + d {
        out.push(Move::variant_complement(s, l));
        l += 1;
    }

    if lim.curve_rr && s.has_x4() {
        let rest: Combo = st.coeffs.clone();
        for l in very_ample_from(s.d_s())..=4 {
            let g = s.genus(l) as i64;
            // 4a h - x4 - z' of the least degree allowed by Riemann–Roch
            let need = g + d as i64 + 4;
            let a = (need + ds as i64 - 1) / ds as i64;
            out.push(Move::curve_rr(s, l, combo(&[(H, a), (X4, -1)]), CurveMode::Complement));
            if !rest.is_empty() {
                let mode = if st.sign > 0 { CurveMode::Absorb } else { CurveMode::Complement };
                out.push(Move::curve_rr(s, l, rest.clone(), mode));
            }
        }
    }

    if s.d_s() == 2 {
        out.push(Move::InvolutionFlip {});
    }

    for t in add_targets(s) {
        out.push(Move::add_basis(t));
    }

    out.retain(|m| match apply_move(s, st, m) {
        Ok(n) => {
            n.unknown_degree <= lim.degree_cap
                && n.coeffs
                    .iter()
                    .filter(|(k, _)| k.as_str() != H)
                    .all(|(_, v)| v.abs() <= lim.extra_coeff_cap)
        }
        Err(_) => false,
    });
    out
}
