use std::collections::{HashMap, VecDeque};

use super::moves::{apply_move, candidate_moves, Move, MoveLimits};
use super::{combo, Combo, CycleState, DelPezzo, DescentError, H};
use super::verify::Certificate;

/// Admissible final unknown degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeSet {
    AtMost(u64),
    OneOf(Vec<u64>),
    /// One of the listed degrees, or at most the bound.
    OneOfOrAtMost(Vec<u64>, u64),
}

impl DegreeSet {
    pub fn contains(&self, d: u64) -> bool {
        match self {
            DegreeSet::AtMost(m) => d <= *m,
            DegreeSet::OneOf(v) => v.contains(&d),
            DegreeSet::OneOfOrAtMost(v, m) => d <= *m || v.contains(&d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goal {
    pub degrees: DegreeSet,
    /// Required sign of the unknown part, if any.
    pub sign: Option<i8>,
    /// Every basis coefficient must be nonnegative, so the class is effective.
    pub nonneg_coeffs: bool,
}

impl Goal {
    pub fn at_most(d: u64) -> Self {
        Self {
            degrees: DegreeSet::AtMost(d),
            sign: None,
            nonneg_coeffs: false,
        }
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        self.sign = Some(sign);
        self
    }

    pub fn accepts(&self, st: &CycleState) -> bool {
        st.effective
            && self.degrees.contains(st.unknown_degree)
            && self.sign.is_none_or(|s| s == st.sign)
            && (!self.nonneg_coeffs || st.coeffs.values().all(|&v| v >= 0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest unknown degree visited; defaults to `max(start, 30) + 20`.
    pub degree_cap: Option<u64>,
    pub extra_coeff_cap: i64,
    pub curve_rr: bool,
    pub max_states: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            degree_cap: None,
            extra_coeff_cap: 3,
            curve_rr: true,
            max_states: 200_000,
        }
    }
}

type Key = (i8, u64, Vec<(String, i64)>);

fn key(st: &CycleState) -> Key {
    (
        st.sign,
        st.unknown_degree,
        st.coeffs
            .iter()
            .filter(|(k, _)| k.as_str() != H)
            .map(|(k, v)| (k.clone(), *v))
            .collect(),
    )
}

/// Breadth-first search from an effective cycle of degree `start_degree`.
pub fn find_certificate(
    surface: &DelPezzo,
    start_degree: u64,
    goal: &Goal,
    opts: &SearchOptions,
) -> Result<Certificate, DescentError> {
    find_from(surface, CycleState::start(start_degree), goal, opts)
}

/// Breadth-first search from an arbitrary effective state. Moves are tried
/// in the fixed order of [`candidate_moves`], so results are reproducible;
/// the total degree fixes the `h` coefficient, so states are identified by
/// sign, unknown degree and the remaining coefficients.
pub fn find_from(
    surface: &DelPezzo,
    start: CycleState,
    goal: &Goal,
    opts: &SearchOptions,
) -> Result<Certificate, DescentError> {
    let cap = opts
        .degree_cap
        .unwrap_or(start.unknown_degree.max(30) + 20)
        .max(start.unknown_degree);
    let lim = MoveLimits {
        degree_cap: cap,
        extra_coeff_cap: opts.extra_coeff_cap,
        curve_rr: opts.curve_rr,
    };
    let cert = |nodes: &[(CycleState, Option<(usize, Move)>)], mut i: usize| {
        let final_state = nodes[i].0.clone();
        let mut moves = Vec::new();
        while let Some((p, m)) = &nodes[i].1 {
            moves.push(m.clone());
            i = *p;
        }
        moves.reverse();
        Certificate {
            surface: *surface,
            initial: nodes[0].0.clone(),
            moves,
            final_state,
        }
    };

    let mut nodes: Vec<(CycleState, Option<(usize, Move)>)> = vec![(start.clone(), None)];
    if goal.accepts(&start) {
        return Ok(cert(&nodes, 0));
    }
    let mut seen: HashMap<Key, usize> = HashMap::new();
    seen.insert(key(&start), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut lowest = start.unknown_degree;
    while let Some(i) = queue.pop_front() {
        let st = nodes[i].0.clone();
        for m in candidate_moves(surface, &st, &lim) {
            let next = apply_move(surface, &st, &m).expect("candidate moves apply");
            let k = key(&next);
            if seen.contains_key(&k) {
                continue;
            }
            lowest = lowest.min(next.unknown_degree);
            nodes.push((next.clone(), Some((i, m))));
            let idx = nodes.len() - 1;
            if goal.accepts(&next) {
                return Ok(cert(&nodes, idx));
            }
            seen.insert(k, idx);
            queue.push_back(idx);
            if nodes.len() > opts.max_states {
                queue.clear();
                break;
            }
        }
    }
    Err(DescentError::NotFound {
        start: start.unknown_degree,
        explored: nodes.len(),
        lowest,
    })
}

/// The induction step of the descent proofs: at most three moves that
/// strictly lower the unknown degree, chosen without search.
///
/// With `h^0(O(l)) < d <= h^0(O(l+1))`: complement when that shrinks the
/// degree, otherwise subtract `h`; in the boundary cases
/// `d ∈ {h^0(O(l+1)), h^0(O(l+1)) - 1}` first add multiples of `h` and
/// subtract a larger multiple one level up.
pub fn induction_step(surface: &DelPezzo, st: &CycleState) -> Option<Vec<Move>> {
    let d = st.unknown_degree;
    let mut l = super::rr::vb_min_l(surface.d_s());
    while surface.h0(l + 1) < d {
        l += 1;
    }
    if surface.h0(l) >= d {
        return None;
    }
    let h = |k: i64| -> Combo { combo(&[(H, k)]) };
    let mut plans: Vec<Vec<Move>> = Vec::new();
    if d + 2 <= surface.h0(l + 1) {
        plans.push(vec![Move::complement(surface, l)]);
        plans.push(vec![Move::vb_subtract(surface, l, h(1))]);
        plans.push(vec![Move::complement(surface, l), Move::vb_subtract(surface, l, h(1))]);
    }
    for add in 1..=2 {
        for sub in add + 1..=add + 2 {
            plans.push(vec![
                Move::add_basis(h(add)),
                Move::vb_subtract(surface, l + 1, h(sub)),
            ]);
        }
    }
    plans.into_iter().find(|plan| {
        let mut cur = st.clone();
        for m in plan {
            match apply_move(surface, &cur, m) {
                Ok(n) => cur = n,
                Err(_) => return false,
            }
        }
        cur.unknown_degree < d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_sets() {
        assert!(DegreeSet::AtMost(4).contains(0));
        assert!(!DegreeSet::OneOf(vec![1, 4]).contains(2));
        let r = DegreeSet::OneOfOrAtMost(vec![12, 13], 7);
        assert!(r.contains(13) && r.contains(5) && !r.contains(9));
    }

    #[test]
    fn dp2_from_nine() {
        let s = DelPezzo::new(2, false).unwrap();
        let c = find_certificate(&s, 9, &Goal::at_most(7), &SearchOptions::default()).unwrap();
        assert_eq!(c.moves, vec![Move::vb_subtract(&s, 2, combo(&[(H, 1)]))]);
        assert_eq!(c.final_state.unknown_degree, 7);
    }

    #[test]
    fn trivial_goal_gives_empty_chain() {
        let s = DelPezzo::cubic();
        let c = find_certificate(&s, 5, &Goal::at_most(18), &SearchOptions::default()).unwrap();
        assert!(c.moves.is_empty());
        assert_eq!(c.initial, c.final_state);
    }

    #[test]
    fn induction_step_lowers_degree() {
        let s = DelPezzo::cubic();
        for d in 20..=200 {
            let plan = induction_step(&s, &CycleState::start(d)).expect("step exists");
            assert!(plan.len() <= 3);
        }
    }
}
