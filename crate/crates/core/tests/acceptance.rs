//! One line per acceptance criterion. Run with `cargo test --test acceptance`.
//! Set `BLESS=1` to rewrite the golden certificate.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use cubic_cycles::algebra::{linalg, q_frac, q_int, EtaleAlgebra, Poly, Rational};
use cubic_cycles::chow::{
    degree_report, degree_wrt_hx, diagonal_locus_degree, dual_hyperplane_bundle, segre_s2,
    triple_rank, CurveDegrees, QUADRIC_SECTION_INTERSECTION,
};
use cubic_cycles::descent::{
    coray_chain_10, effectivity_threshold, prove_bound_suite, rr, verify_certificate, DelPezzo,
    SearchOptions, SuiteKind,
};
use cubic_cycles::geometry::{
    delta_point, psi_minus_one, tangent_residual, third_point, CubicForm,
    Line, PlanePencil, ProjPoint,
};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rr_table() -> Outcome {
    let want = [((3, 2), 10), ((3, 3), 19), ((3, 4), 31), ((2, 2), 7), ((2, 3), 13), ((1, 5), 16)];
    let bad: Vec<String> = want
        .iter()
        .filter(|((d, l), v)| rr::h0(*d, *l).ok() != Some(*v))
        .map(|((d, l), v)| format!("h0({d},{l}) != {v}"))
        .collect();
    // 28 = h0(O(4)) - 3 on a cubic surface
    let extra = rr::h0(3, 4).unwrap() - 3 == 28;
    outcome(bad.is_empty() && extra, if bad.is_empty() { "6 values".into() } else { bad.join(", ") })
}

fn suite_line(kind: SuiteKind, ceiling: u64) -> (bool, String) {
    let r = prove_bound_suite(kind, ceiling, &SearchOptions::default());
    let failed: Vec<u64> = r.rows.iter().filter(|r| !r.verified).map(|r| r.start).collect();
    (
        r.all_verified,
        format!(
            "{kind:?}: {} starts, max final degree {:?}{}",
            r.rows.len(),
            r.max_final_degree,
            if failed.is_empty() { String::new() } else { format!(", failed {failed:?}") }
        ),
    )
}

fn cubic_suite() -> Outcome {
    let t = Instant::now();
    let (a, da) = suite_line(SuiteKind::CubicBound, 200);
    let (b, db) = suite_line(SuiteKind::CubicWithX4, 200);
    let el = t.elapsed();
    outcome(a && b && el < Duration::from_secs(10), format!("{da}; {db}; {:.2?}", el))
}

fn coray() -> Outcome {
    let (a, da) = suite_line(SuiteKind::Coray, 17);
    let chain = coray_chain_10();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/coray_10.json");
    let text = chain.to_json_pretty() + "\n";
    if std::env::var_os("BLESS").is_some() {
        std::fs::write(path, &text).expect("write golden");
    }
    let golden = std::fs::read_to_string(path).unwrap_or_default();
    let matches = golden == text;
    let valid = verify_certificate(&chain).valid && chain.final_state.unknown_degree == 4;
    outcome(a && matches && valid, format!("{da}; golden chain 10 -> 16 -> 11 -> 8 -> 4 matches: {matches}, verifies: {valid}"))
}

fn dp2() -> Outcome {
    let (a, da) = suite_line(SuiteKind::Dp2Bound, 200);
    let (b, db) = suite_line(SuiteKind::Dp2Refined, 200);
    let (c, dc) = suite_line(SuiteKind::Dp2Even, 200);
    let s = DelPezzo::new(2, false).unwrap();
    let opts = SearchOptions::default();
    let t13 = effectivity_threshold(&s, 13, 200, 200, false, &opts);
    let t12 = effectivity_threshold(&s, 12, 200, 200, true, &opts);
    outcome(
        a && b && c && t13.all_effective && t12.all_effective,
        format!(
            "{da}; {db}; {dc}; threshold 13: {} certificates, threshold 12 (even): {} certificates",
            t13.certificates, t12.certificates
        ),
    )
}

fn dp1() -> Outcome {
    let (a, da) = suite_line(SuiteKind::Dp1Bound, 200);
    let (b, db) = suite_line(SuiteKind::Dp1Refined, 200);
    let s = DelPezzo::new(1, false).unwrap();
    let t15 = effectivity_threshold(&s, 15, 200, 200, false, &SearchOptions::default());
    outcome(a && b && t15.all_effective, format!("{da}; {db}; threshold 15: {} certificates", t15.certificates))
}

fn chow_degrees() -> Outcome {
    let d = CurveDegrees::quadric_sections();
    let d2 = degree_wrt_hx(&segre_s2(&dual_hyperplane_bundle()), &d).unwrap();
    let d2p = diagonal_locus_degree(QUADRIC_SECTION_INTERSECTION, &d);
    let report = degree_report(&d, QUADRIC_SECTION_INTERSECTION).unwrap();
    let pass = d2 == BigInt::from(216) && d2p == BigInt::from(72) && d2 > d2p && report["strict_inequality"] == true;
    outcome(pass, format!("deg D2 = {d2}, deg D2' = {d2p}"))
}

fn random_p1(rng: &mut ChaCha8Rng) -> [Rational; 2] {
    loop {
        let a: i64 = rng.gen_range(-50..=50);
        let b: i64 = rng.gen_range(-50..=50);
        if a != 0 || b != 0 {
            return [q_int(a), q_int(b)];
        }
    }
}

fn proportional(p: &[Rational; 2], q: &[Rational; 2]) -> bool {
    (&p[0] * &q[1] - &p[1] * &q[0]).is_zero()
}

fn pencil() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut diag = 0;
    for _ in 0..200 {
        let p = random_p1(&mut rng);
        if triple_rank(&p, &p, &p) == 2 {
            diag += 1;
        }
    }
    let mut off = 0;
    let mut n = 0;
    while n < 200 {
        let (u, v, w) = (random_p1(&mut rng), random_p1(&mut rng), random_p1(&mut rng));
        if proportional(&u, &v) && proportional(&v, &w) {
            continue;
        }
        n += 1;
        if triple_rank(&u, &v, &w) == 3 {
            off += 1;
        }
    }
    outcome(diag == 200 && off == 200, format!("diagonal rank 2: {diag}/200, off-diagonal rank 3: {off}/200"))
}

// ---- geometry oracles -------------------------------------------------

fn naive_eval(s: &CubicForm, x: &[Rational; 4]) -> Rational {
    let mut acc = q_int(0);
    for (e, c) in s.terms() {
        let mut m = c.clone();
        for i in 0..4 {
            for _ in 0..e[i] {
                m *= &x[i];
            }
        }
        acc += m;
    }
    acc
}

fn random_int_point(rng: &mut ChaCha8Rng, h: i64) -> [Rational; 4] {
    loop {
        let v: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-h..=h));
        if v.iter().any(|&x| x != 0) {
            return v.map(q_int);
        }
    }
}

/// A random cubic through the given points, solving for the coefficients of
/// the listed monomials.
fn random_surface_through(
    rng: &mut ChaCha8Rng,
    pts: &[[Rational; 4]],
    solve_for: &[[u8; 4]],
) -> Option<CubicForm> {
    let mut terms: Vec<([u8; 4], Rational)> = CubicForm::all_exponents()
        .into_iter()
        .filter(|e| !solve_for.contains(e))
        .map(|e| (e, q_int(rng.gen_range(-4..=4))))
        .collect();
    let mono = |e: &[u8; 4], x: &[Rational; 4]| -> Rational {
        let mut m = q_int(1);
        for i in 0..4 {
            for _ in 0..e[i] {
                m *= &x[i];
            }
        }
        m
    };
    let rows: Vec<Vec<Rational>> = pts
        .iter()
        .map(|p| solve_for.iter().map(|e| mono(e, p)).collect())
        .collect();
    let rhs: Vec<Rational> = pts
        .iter()
        .map(|p| -terms.iter().map(|(e, c)| c * mono(e, p)).sum::<Rational>())
        .collect();
    let sol = linalg::solve(&rows, &rhs)?;
    terms.extend(solve_for.iter().copied().zip(sol));
    CubicForm::new(terms).ok()
}

fn third_point_oracle(s: &CubicForm, x: &[Rational; 4], y: &[Rational; 4]) -> Option<[Rational; 4]> {
    let at = |t: i64| -> Rational {
        let p: [Rational; 4] = std::array::from_fn(|i| &x[i] + &y[i] * q_int(t));
        naive_eval(s, &p)
    };
    // f(t) = a t + b t^2
    let (f1, f2) = (at(1), at(2));
    let b = (&f2 - &f1 * q_int(2)) / q_int(2);
    let a = &f1 - &b;
    if b.is_zero() {
        return if a.is_zero() { None } else { Some(y.clone()) };
    }
    let t = -a / b;
    Some(std::array::from_fn(|i| &x[i] + &y[i] * &t))
}

fn check_third_points(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let (mut agree, mut total) = (0, 0);
    while total < 1000 {
        let x = random_int_point(rng, 4);
        let y = random_int_point(rng, 4);
        let Some(s) = random_surface_through(rng, &[x.clone(), y.clone()], &[[3, 0, 0, 0], [0, 3, 0, 0]]) else {
            continue;
        };
        let (px, py) = (ProjPoint::rational(x.clone()).unwrap(), ProjPoint::rational(y.clone()).unwrap());
        if px == py {
            continue;
        }
        total += 1;
        let lib = third_point(&s, &px, &py).ok();
        let oracle = third_point_oracle(&s, &x, &y).map(|v| ProjPoint::rational(v).unwrap());
        if lib == oracle {
            agree += 1;
        } else if std::env::var_os("ACCEPT_DEBUG").is_some() {
            eprintln!("mismatch {x:?} {y:?} {lib:?} {oracle:?} {:?}", s.to_json());
        }
    }
    (agree, total)
}

/// `X1^2 X2 - X0^3 + X0 X2^2 + X3 (X0^2 + X1^2 + X2^2 + X3^2)`: the plane
/// `X3 = 0` cuts `y^2 z = x^3 - x z^2`.
fn weierstrass_surface() -> CubicForm {
    CubicForm::from_int_terms(&[
        ([0, 2, 1, 0], 1),
        ([3, 0, 0, 0], -1),
        ([1, 0, 2, 0], 1),
        ([2, 0, 0, 1], 1),
        ([0, 2, 0, 1], 1),
        ([0, 0, 2, 1], 1),
        ([0, 0, 0, 3], 1),
    ])
    .unwrap()
}

/// `-2P` for `P = (x, sqrt(D))` on `y^2 = x^3 - x`, `D = x^3 - x`, written
/// as `(x3, c sqrt(D))`.
fn minus_two_p(x: &Rational) -> (Rational, Rational) {
    let d = x * x * x - x;
    // lambda = (3x^2 - 1) / (2 sqrt D) = k sqrt D with k = (3x^2 - 1) / (2D)
    let k = (q_int(3) * x * x - q_int(1)) / (q_int(2) * &d);
    let x3 = &k * &k * &d - q_int(2) * x;
    // y3 = lambda (x - x3) - sqrt D
    let c = &k * (x - &x3) - q_int(1);
    (x3, -c)
}

fn check_weierstrass() -> (usize, usize) {
    let s = weierstrass_surface();
    let w = PlanePencil::new(Line::through_ints([1, 0, 0, 0], [0, 1, 0, 0]).unwrap());
    let xs = [
        q_int(2), q_int(3), q_int(4), q_int(5), q_int(6), q_int(7),
        q_frac(1, 2), q_frac(-1, 2), q_frac(3, 2), q_frac(1, 3),
    ];
    let mut agree = 0;
    for x in &xs {
        let d = x * x * x - x;
        let alg = EtaleAlgebra::new(Poly::new(vec![-d, q_int(0), q_int(1)])).unwrap();
        let t = alg.generator();
        let c = |q: Rational| alg.from_rational(q);
        let p = ProjPoint::new([c(x.clone()), t.clone(), c(q_int(1)), c(q_int(0))]).unwrap();
        let (x3, ycoef) = minus_two_p(x);
        let want = ProjPoint::new([c(x3), t.scale(&ycoef), c(q_int(1)), c(q_int(0))]).unwrap();
        if tangent_residual(&s, &w, &p).ok() == Some(want) {
            agree += 1;
        }
    }
    // 2-torsion point: -2P is the flex at infinity
    let p = ProjPoint::from_ints([-1, 0, 1, 0]).unwrap();
    if tangent_residual(&s, &w, &p).ok() == Some(ProjPoint::from_ints([0, 1, 0, 0]).unwrap()) {
        agree += 1;
    }
    (agree, xs.len() + 1)
}

fn check_psi_split(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let (mut agree, mut total, mut tries) = (0, 0, 0);
    while total < 100 && tries < 10_000 {
        tries += 1;
        let p = random_int_point(rng, 3);
        let q = random_int_point(rng, 3);
        let r: [Rational; 4] = std::array::from_fn(|i| &p[i] + &q[i]);
        let Some(s) = random_surface_through(rng, &[p.clone(), q.clone(), r], &[[3, 0, 0, 0], [0, 3, 0, 0], [0, 0, 3, 0]]) else {
            continue;
        };
        let Ok(line) = Line::new(ProjPoint::rational(p).unwrap(), ProjPoint::rational(q).unwrap()) else {
            continue;
        };
        let axis = Line::through_ints(
            std::array::from_fn(|_| rng.gen_range(-3..=3)),
            std::array::from_fn(|_| rng.gen_range(-3..=3)),
        );
        let Ok(axis) = axis else { continue };
        let w = PlanePencil::new(axis);
        let Ok(delta) = delta_point(&s, &line) else { continue };
        if !delta.is_split() || delta.non_reduced {
            continue;
        }
        let comps = delta.rational_components().unwrap();
        let each: Result<Vec<ProjPoint>, _> = comps.iter().map(|c| tangent_residual(&s, &w, c)).collect();
        let Ok(each) = each else { continue };
        total += 1;
        let Ok(psi) = psi_minus_one(&s, &w, &line) else { continue };
        let roots = delta.rational_roots();
        let specialized: Option<Vec<ProjPoint>> = roots.iter().map(|r| psi.point.specialize(r).ok()).collect();
        if specialized == Some(each) {
            agree += 1;
        }
    }
    (agree, total)
}

fn geometry_oracles() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (a1, n1) = check_third_points(&mut rng);
    let (a2, n2) = check_weierstrass();
    let (a3, n3) = check_psi_split(&mut rng);
    let el = t.elapsed();
    outcome(
        a1 == n1 && n1 == 1000 && a2 == n2 && a3 == n3 && n3 == 100 && el < Duration::from_secs(30),
        format!("third point {a1}/{n1}, tangent vs group law {a2}/{n2}, split psi {a3}/{n3}; {:.2?}", el),
    )
}

fn psi_productivity() -> Outcome {
    let surfaces = [
        ("fermat", CubicForm::fermat()),
        ("diag(1,1,1,-2)", CubicForm::diagonal([1, 1, 1, -2])),
        ("weierstrass", weierstrass_surface()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut details = Vec::new();
    let mut pass = true;
    for (name, s) in &surfaces {
        let mut seen: HashSet<String> = HashSet::new();
        let mut valid = 0;
        for _ in 0..50 {
            let mut line = || loop {
                let a: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-3..=3));
                let b: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-3..=3));
                if let Ok(l) = Line::through_ints(a, b) {
                    return l;
                }
            };
            let w = PlanePencil::new(line());
            let wp = line();
            if let Ok(out) = psi_minus_one(s, &w, &wp) {
                if s.contains(&out.point) {
                    valid += 1;
                    seen.insert(format!("{:?}|{:?}", out.algebra().modulus(), out.point.to_json()));
                }
            }
        }
        pass &= seen.len() >= 20;
        details.push(format!("{name}: {valid} valid, {} distinct", seen.len()));
    }
    outcome(pass, details.join("; "))
}

fn scope_note() -> Outcome {
    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md")).unwrap_or_default();
    let flat = readme.split_whitespace().collect::<Vec<_>>().join(" ");
    let documented = flat.contains("not reproducible at desk scale");
    outcome(documented, "dominance and non-stable-rationality are documented as out of scope, not asserted")
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("Riemann-Roch table", rr_table),
        ("cubic descent suite (<= 18, with x4 <= 4)", cubic_suite),
        ("Coray reproduction and golden chain", coray),
        ("degree 2 suite, refined set and thresholds", dp2),
        ("degree 1 suite, refined set and threshold", dp1),
        ("Chow degrees 216 > 72", chow_degrees),
        ("pencil condition ranks", pencil),
        ("geometry oracle equivalence", geometry_oracles),
        ("degree-3 generator productivity", psi_productivity),
        ("desk-scale scope", scope_note),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {}: {name} -- {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
