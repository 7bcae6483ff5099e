//! Certificate replay on a code path separate from the search: `h^0` is
//! recomputed by summation and every update is re-derived here.

use serde::{Deserialize, Serialize};

use super::moves::{CurveMode, Move, Witness};
use super::{Combo, CycleState, DelPezzo, H};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub surface: DelPezzo,
    pub initial: CycleState,
    pub moves: Vec<Move>,
    #[serde(rename = "final")]
    pub final_state: CycleState,
}

impl Certificate {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    /// Index of the first failing move, or the move count for a final-state mismatch.
    pub failed_step: Option<usize>,
    pub reason: Option<String>,
}

impl Verification {
    fn ok() -> Self {
        Self { valid: true, failed_step: None, reason: None }
    }

    fn bad(step: usize, reason: String) -> Self {
        Self { valid: false, failed_step: Some(step), reason: Some(reason) }
    }
}

/// `h^0(O(l)) = 1 + d_S (1 + 2 + ... + l)`.
fn h0_sum(d_s: i64, l: i64) -> i64 {
    1 + d_s * (1..=l).sum::<i64>()
}

fn genus_sum(d_s: i64, l: i64) -> i64 {
    1 + d_s * (1..l).sum::<i64>()
}

fn deg_of(surface: &DelPezzo, c: &Combo) -> Option<i64> {
    let mut t = 0;
    for (k, v) in c {
        t += v * surface.basis().iter().find(|(s, _)| s == k)?.1;
    }
    Some(t)
}

fn shift(c: &mut Combo, by: &Combo, f: i64) {
    for (k, v) in by {
        *c.entry(k.clone()).or_insert(0) += f * v;
    }
    c.retain(|_, v| *v != 0);
}

struct Check<'a> {
    failures: Vec<String>,
    witness: Option<&'a Witness>,
}

impl<'a> Check<'a> {
    fn need(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn witness(&mut self, key: &str, value: i64) {
        let got = self.witness.and_then(|w| w.get(key)).copied();
        if got != Some(value) {
            self.failures
                .push(format!("witness {key} is {got:?}, recomputed {value}"));
        }
    }
}

fn replay(surface: &DelPezzo, st: &CycleState, m: &Move) -> Result<CycleState, String> {
    let ds = surface.d_s() as i64;
    let d = st.unknown_degree as i64;
    let eps = st.sign as i64;
    let mut sign = st.sign;
    let mut deg = d;
    let mut coeffs = st.coeffs.clone();
    let mut effective = st.effective;
    let very_ample = match ds { 3 => 1, 2 => 2, _ => 3 };
    let generated = if ds == 1 { 2 } else { 1 };

    let witness = match m {
        Move::Complement { witness, .. }
        | Move::VariantComplement { witness, .. }
        | Move::VBSubtract { witness, .. }
        | Move::CurveRR { witness, .. }
        | Move::EntryRR { witness, .. } => Some(witness),
        _ => None,
    };
    let mut c = Check { failures: Vec::new(), witness };
    if !matches!(m, Move::EntryRR { .. }) {
        c.need(st.effective, || "unknown part not known to be effective".into());
    }

    let complement = |b: &Combo, c: &mut Check, coeffs: &mut Combo, sign: &mut i8, deg: &mut i64| {
        let bd = deg_of(surface, b).unwrap_or(i64::MIN / 4);
        c.need(bd >= d, || format!("deg B = {bd} >= d = {d}"));
        *sign = -*sign;
        *deg = bd - d;
        shift(coeffs, b, eps);
    };

    match m {
        Move::Complement { l, .. } => {
            let m1 = *l as i64 + 1;
            let h = h0_sum(ds, m1);
            c.witness("h0_l1", h);
            c.need(m1 >= very_ample, || format!("O({m1}) very ample"));
            c.need(d <= h - 2, || format!("d = {d} <= h0(O({m1})) - 2 = {}", h - 2));
            let b: Combo = [(H.to_string(), m1 * m1)].into_iter().collect();
            complement(&b, &mut c, &mut coeffs, &mut sign, &mut deg);
        }
        Move::VariantComplement { l, .. } => {
            let l = *l as i64;
            let (hl, hl1, h1) = (h0_sum(ds, l), h0_sum(ds, l + 1), h0_sum(ds, 1));
            c.witness("h0_l", hl);
            c.witness("h0_l1", hl1);
            c.witness("h0_1", h1);
            c.need(l >= generated, || format!("O({l}) generated by sections"));
            c.need(hl >= d + 1, || format!("h0(O({l})) = {hl} >= d + 1 = {}", d + 1));
            c.need(hl1 - d > h1, || format!("h0(O({})) - d = {} > h0(O(1)) = {h1}", l + 1, hl1 - d));
            let b: Combo = [(H.to_string(), l * (l + 1))].into_iter().collect();
            complement(&b, &mut c, &mut coeffs, &mut sign, &mut deg);
        }
        Move::VBSubtract { l, s, target, .. } => {
            let l = *l as i64;
            let (hl, hl1) = (h0_sum(ds, l), h0_sum(ds, l + 1));
            c.witness("h0_l", hl);
            c.witness("h0_l1", hl1);
            c.need(l >= if ds == 3 { 0 } else { 1 }, || format!("l = {l} in range"));
            let td = deg_of(surface, target);
            c.need(td == Some(*s as i64), || format!("deg target = {td:?} equals s = {s}"));
            c.need(!target.is_empty() && target.values().all(|&v| v >= 0), || "target effective".into());
            c.need(ds == 3 || target.keys().all(|k| k == H), || "target is a multiple of h".into());
            c.need(hl < d, || format!("h0(O({l})) = {hl} < d = {d}"));
            c.need(hl1 - d >= 2 * *s as i64, || format!("h0(O({})) - d = {} >= 2s = {}", l + 1, hl1 - d, 2 * s));
            deg = d - *s as i64;
            shift(&mut coeffs, target, eps);
        }
        Move::InvolutionFlip {} => {
            c.need(ds == 2, || "involution needs d_S = 2".into());
            sign = -sign;
            *coeffs.entry(H.to_string()).or_insert(0) += eps * d;
            coeffs.retain(|_, v| *v != 0);
        }
        Move::CurveRR { l, combo: b, mode, .. } => {
            let l = *l as i64;
            let (hl, g) = (h0_sum(ds, l), genus_sum(ds, l));
            c.witness("h0_l", hl);
            c.witness("genus", g);
            c.need(l >= very_ample, || format!("l = {l} in range"));
            let bd = deg_of(surface, b).unwrap_or(i64::MIN / 4);
            let pts: i64 = b
                .iter()
                .filter(|(k, v)| k.as_str() != H && **v != 0)
                .map(|(k, _)| deg_of(surface, &[(k.clone(), 1)].into_iter().collect()).unwrap_or(i64::MAX / 4))
                .sum();
            match mode {
                CurveMode::Complement => {
                    c.need(d + pts <= hl - 2, || format!("support {} <= h0(O({l})) - 2 = {}", d + pts, hl - 2));
                    c.need(bd - d >= g, || format!("deg B - d = {} >= genus {g}", bd - d));
                    complement(b, &mut c, &mut coeffs, &mut sign, &mut deg);
                }
                CurveMode::Absorb => {
                    c.need(eps > 0, || "positive unknown part".into());
                    c.need(pts <= hl - 2, || format!("support {pts} <= h0(O({l})) - 2 = {}", hl - 2));
                    c.need(bd >= g, || format!("deg B = {bd} >= genus {g}"));
                    deg = d + bd;
                    shift(&mut coeffs, b, -1);
                }
            }
        }
        Move::AddBasis { combo: k } => {
            c.need(!k.is_empty() && k.values().all(|&v| v >= 0), || "combination effective".into());
            let kd = deg_of(surface, k).unwrap_or(i64::MIN / 4);
            deg = d + kd;
            shift(&mut coeffs, k, -eps);
        }
        Move::EntryRR { gamma, .. } => {
            c.need(!st.effective, || "entry applies to a bare class".into());
            // least γ with d + γ d_S >= 0
            let mut lo = 0i64;
            while d + (lo - 1) * ds >= 0 {
                lo -= 1;
            }
            c.witness("min_gamma", lo);
            c.need(*gamma >= lo, || format!("gamma = {gamma} >= {lo}"));
            deg = d + gamma * ds;
            *coeffs.entry(H.to_string()).or_insert(0) -= gamma;
            coeffs.retain(|_, v| *v != 0);
            effective = true;
        }
    }
    c.need(deg >= 0, || format!("unknown degree {deg} is negative"));
    if let Some(f) = c.failures.first() {
        return Err(format!("{}: {f}", m.kind()));
    }
    Ok(CycleState {
        sign,
        unknown_degree: deg as u64,
        coeffs,
        effective,
    })
}

fn total(surface: &DelPezzo, st: &CycleState) -> Option<i64> {
    Some(st.sign as i64 * st.unknown_degree as i64 + deg_of(surface, &st.coeffs)?)
}

/// Replays a certificate, rechecking every inequality, witness and the
/// conservation of total degree.
pub fn verify_certificate(cert: &Certificate) -> Verification {
    let s = &cert.surface;
    let Some(t0) = total(s, &cert.initial) else {
        return Verification::bad(0, "initial state uses an unknown basis symbol".into());
    };
    if !matches!(cert.initial.sign, 1 | -1) {
        return Verification::bad(0, "sign must be +1 or -1".into());
    }
    let mut st = cert.initial.clone();
    for (i, m) in cert.moves.iter().enumerate() {
        st = match replay(s, &st, m) {
            Ok(n) => n,
            Err(e) => return Verification::bad(i, e),
        };
        if total(s, &st) != Some(t0) {
            return Verification::bad(i, format!("total degree changed from {t0}"));
        }
    }
    if st != cert.final_state {
        return Verification::bad(
            cert.moves.len(),
            format!("replay ends at {st}, certificate claims {}", cert.final_state),
        );
    }
    Verification::ok()
}
