//! Acceptance gate: nine criteria, one pass/fail line each. Exits nonzero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use isofan::oracles::{run_suite, DEFAULT_SEED};
use isofan::riemann::{classify, solve_standard, verify_standard, CaseId, Middle, RiemannProblem};
use isofan::sampling::{random_law, random_law_with_gamma, random_problem, random_single_one_shock, rng, Generated};
use isofan::subsolution::{
    delta1_star, extract_reduced, fan_speeds, lift_to_full, reduced_at, search_feasible, v12_star, verify_full,
};
use isofan::wavecurves::{pure_shock_speed, State};
use isofan::{build_s, build_sr, EntryKind, GasLaw, Tolerances, WedgeConstruction};
use rand::Rng;

const SEED: u64 = 20_171_013;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn cases_for(law: &GasLaw) -> Vec<CaseId> {
    CaseId::ALL
        .into_iter()
        .filter(|c| *c != CaseId::Constant && !(law.is_isothermal() && *c == CaseId::R1R3Vacuum))
        .collect()
}

/// 100 problems per case with random laws, plus 100 per case with `γ = 1`.
fn generate_standard_set() -> Vec<Generated> {
    let mut r = rng(SEED);
    let mut out = Vec::new();
    let iso = GasLaw::new(1.0, 1.0).unwrap();
    for case in cases_for(&GasLaw::new(1.0, 2.0).unwrap()) {
        let mut n = 0;
        while n < 100 {
            let law = random_law(&mut r);
            if let Some(g) = random_problem(&mut r, law, case) {
                out.push(g);
                n += 1;
            }
        }
    }
    for case in cases_for(&iso) {
        for _ in 0..100 {
            let law = GasLaw::new(r.gen_range(0.1..=10.0), 1.0).unwrap();
            out.push(random_problem(&mut r, law, case).expect("isothermal generator"));
        }
    }
    out
}

fn criterion1(set: &[Generated]) -> Outcome {
    let mut wrong_case = 0;
    let mut wrong_middle = 0;
    for g in set {
        if classify(&g.problem).ok() != Some(g.case) {
            wrong_case += 1;
            continue;
        }
        if let Some(rho_m) = g.rho_m {
            let got = solve_standard(&g.problem).ok().and_then(|s| s.middle_state()).map(|m| m.rho);
            if !got.is_some_and(|x| ((x - rho_m) / rho_m).abs() <= 1e-9) {
                wrong_middle += 1;
            }
        }
    }
    outcome(
        wrong_case == 0 && wrong_middle == 0,
        format!("{} problems, {wrong_case} misclassified, {wrong_middle} middle densities off", set.len()),
    )
}

fn criterion2(set: &[Generated]) -> Outcome {
    let tol = Tolerances::default();
    let mut failed = 0;
    for g in set {
        match solve_standard(&g.problem) {
            Ok(s) if verify_standard(&g.problem, &s, &tol).overall => {}
            _ => failed += 1,
        }
    }
    let mut trials = 0;
    let mut flipped = 0;
    for g in set.iter().filter(|g| g.rho_m.is_some()).step_by(7).take(100) {
        let mut s = solve_standard(&g.problem).unwrap();
        let m = s.middle_state().unwrap();
        let bad = State { rho: m.rho * (1.0 + 1e-3), ..m };
        s.middle = Some(Middle::State(bad));
        s.waves[0].right = bad;
        s.waves[1].left = bad;
        let cert = verify_standard(&g.problem, &s, &tol);
        trials += 1;
        if cert.entries.iter().any(|e| e.kind == EntryKind::EquationResidual && !e.pass) {
            flipped += 1;
        }
    }
    outcome(
        failed == 0 && trials == 100 && flipped >= 99,
        format!("{failed}/{} certificates failed; corruption flagged in {flipped}/{trials}", set.len()),
    )
}

fn case5(r: &mut impl Rng, law: GasLaw) -> RiemannProblem {
    random_problem(r, law, CaseId::S1R3).expect("case-5 generator").problem
}

/// Reduced jump conditions written out independently of the library.
fn reduced_residuals(p: &RiemannProblem, rho1: f64) -> [(f64, f64); 4] {
    let (mu0, mu1) = fan_speeds(p, rho1).unwrap();
    let v12 = v12_star(p, rho1).unwrap();
    let d1 = delta1_star(p, rho1).unwrap();
    let law = &p.law;
    let (l, r) = (&p.left, &p.right);
    let (pl, p1, pr) = (law.pressure(l.rho).unwrap(), law.pressure(rho1).unwrap(), law.pressure(r.rho).unwrap());
    let scale = |t: &[f64]| t.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let rhl1 = (mu0 * (l.rho - rho1) - (l.rho * l.v2 - rho1 * v12), scale(&[mu0 * l.rho, mu0 * rho1, l.rho * l.v2, rho1 * v12]));
    let rhl2 = (
        mu0 * (l.rho * l.v2 - rho1 * v12) - (l.rho * l.v2 * l.v2 - rho1 * (v12 * v12 + d1) + pl - p1),
        scale(&[mu0 * l.rho * l.v2, mu0 * rho1 * v12, l.rho * l.v2 * l.v2, rho1 * v12 * v12, rho1 * d1, pl, p1]),
    );
    let rhr1 = (mu1 * (rho1 - r.rho) - (rho1 * v12 - r.rho * r.v2), scale(&[mu1 * r.rho, mu1 * rho1, r.rho * r.v2, rho1 * v12]));
    let rhr2 = (
        mu1 * (rho1 * v12 - r.rho * r.v2) - (rho1 * (v12 * v12 + d1) - r.rho * r.v2 * r.v2 + p1 - pr),
        scale(&[mu1 * r.rho * r.v2, mu1 * rho1 * v12, r.rho * r.v2 * r.v2, rho1 * v12 * v12, rho1 * d1, pr, p1]),
    );
    [rhl1, rhl2, rhr1, rhr2]
}

fn criterion3() -> Outcome {
    let mut r = rng(SEED + 3);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let law = random_law(&mut r);
        let p = case5(&mut r, law);
        let rho1 = p.left.rho + (p.right.rho - p.left.rho) * r.gen_range(1e-6..1.0 - 1e-6);
        for (res, scale) in reduced_residuals(&p, rho1) {
            worst = worst.max(res.abs() / scale);
        }
    }
    outcome(worst <= 1e-10, format!("worst scaled residual {worst:.3e} over 1000 problems"))
}

fn criterion4() -> Outcome {
    let mut r = rng(SEED + 4);
    let tol = Tolerances::default();
    let (mut found, mut failed, mut worst) = (0, 0, 0.0f64);
    for _ in 0..200 {
        let law = random_law(&mut r);
        let p = case5(&mut r, law);
        let Some((rho1, delta2)) = search_feasible(&p).unwrap() else { continue };
        found += 1;
        let reduced = reduced_at(&p, rho1, delta2).unwrap();
        let full = lift_to_full(&p, &reduced).unwrap();
        let cert = verify_full(&p, &full, &tol);
        if !cert.overall || cert.entries.len() != 11 {
            failed += 1;
        }
        let back = extract_reduced(&full);
        worst = worst.max((back.delta1 - reduced.delta1).abs()).max((back.delta2 - reduced.delta2).abs());
    }
    outcome(
        found > 0 && failed == 0 && worst <= 1e-12,
        format!("{found}/200 feasible, {failed} failed verification, extraction error {worst:.3e}"),
    )
}

fn criterion5() -> Outcome {
    let suite = run_suite(DEFAULT_SEED, 10_000);
    let f_zero = [1.1, 1.4, 5.0 / 3.0, 2.0, 3.0].iter().all(|&g| isofan::oracles::lemma2_f(1.0, g).unwrap() == 0.0);
    let detail = suite
        .summaries
        .iter()
        .map(|s| format!("{:?} {}/{}", s.lemma, s.passed, s.samples))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(suite.all_pass() && f_zero, format!("seed {}: {detail}", suite.seed))
}

fn strict_margins_ok(w: &WedgeConstruction) -> bool {
    let tol = Tolerances::default();
    let full = verify_full(&w.problem_tilde, &w.sub, &tol);
    let right = verify_standard(&w.problem_wedge, &w.right_wave, &tol);
    let order = full.entry("order").is_some_and(|e| e.pass);
    let glue = w.certificates.glue.entry("glue").is_some_and(|e| e.pass);
    full.overall && right.overall && order && glue && w.glue_margin > 0.0 && w.sub.rho1 < w.reference_density
}

/// Runs the single-shock/rarefaction construction; returns the outcome and the artifact bytes.
fn criterion6() -> (Outcome, String) {
    let mut r = rng(SEED + 6);
    let gammas = [1.0, 1.4, 2.0, 3.0];
    let mut failures = Vec::new();
    let mut artifact = String::new();
    for i in 0..500 {
        let law = random_law_with_gamma(&mut r, gammas[i % 4]);
        let p = case5(&mut r, law);
        let rho_m = solve_standard(&p).unwrap().middle_state().unwrap().rho;
        match build_sr(&p) {
            Ok(w) if strict_margins_ok(&w) && w.certificates.overall() && w.sub.rho1 < rho_m => {
                artifact.push_str(&serde_json::to_string(&w).unwrap());
                artifact.push('\n');
            }
            Ok(_) => failures.push(format!("#{i} certificate")),
            Err(e) => failures.push(format!("#{i} {e}")),
        }
    }
    let detail = format!("{}/500 built{}", 500 - failures.len(), first_failures(&failures));
    (outcome(failures.is_empty(), detail), artifact)
}

fn criterion7() -> (Outcome, String) {
    let mut r = rng(SEED + 7);
    let mut failures = Vec::new();
    let mut artifact = String::new();
    for i in 0..500 {
        let law = random_law(&mut r);
        let p = random_single_one_shock(&mut r, law).problem;
        match build_s(&p) {
            Ok(w) => {
                let side = w.certificates.glue.entry("side-condition").is_some_and(|e| e.pass);
                let sigma = pure_shock_speed(&w.u2, &p.right).unwrap();
                if strict_margins_ok(&w) && w.certificates.overall() && side && w.mu2 == sigma {
                    artifact.push_str(&serde_json::to_string(&w).unwrap());
                    artifact.push('\n');
                } else {
                    failures.push(format!("#{i} certificate"));
                }
            }
            Err(e) => failures.push(format!("#{i} {e}")),
        }
    }
    let detail = format!("{}/500 built{}", 500 - failures.len(), first_failures(&failures));
    (outcome(failures.is_empty(), detail), artifact)
}

fn first_failures(f: &[String]) -> String {
    if f.is_empty() {
        String::new()
    } else {
        format!("; first failures: {}", f.iter().take(3).cloned().collect::<Vec<_>>().join(" | "))
    }
}

/// Case-5 data with no fan subsolution found by the direct search, found by
/// scanning simple data sets.
fn negative_control_fixture() -> RiemannProblem {
    RiemannProblem::new(
        GasLaw::new(1.0, 2.0).unwrap(),
        State::new(1.0, 0.0, 0.0).unwrap(),
        State::new(4.0, 0.0, 0.0).unwrap(),
    )
    .unwrap()
}

fn criterion9() -> Outcome {
    let p = negative_control_fixture();
    let case = classify(&p).unwrap();
    let direct = search_feasible(&p).unwrap();
    let wedge = build_sr(&p);
    let built = wedge.as_ref().is_ok_and(|w| w.certificates.overall() && w.glue_margin > 0.0);
    outcome(
        case == CaseId::S1R3 && direct.is_none() && built,
        format!(
            "K=1 gamma=2 rho=(1,4) v2=(0,0): case {case}, direct search {}, wedge {}",
            if direct.is_none() { "empty" } else { "nonempty" },
            if built { "built" } else { "failed" }
        ),
    )
}

fn report(n: usize, name: &str, started: Instant, o: &Outcome) {
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    println!("[{verdict}] {n}. {name} ({:.1}s): {}", started.elapsed().as_secs_f64(), o.detail);
}

fn main() -> ExitCode {
    let mut all = true;
    let mut step = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        report(n, name, t, &o);
        all &= o.pass;
    };

    let set = generate_standard_set();
    step(1, "classification coverage", &mut || criterion1(&set));
    step(2, "standard-solution certificates", &mut || criterion2(&set));
    step(3, "closed-form consistency", &mut criterion3);
    step(4, "formulation equivalence", &mut criterion4);
    step(5, "lemma suites", &mut criterion5);

    let mut sr_bytes = String::new();
    let mut s_bytes = String::new();
    step(6, "shock-rarefaction wedge", &mut || {
        let (o, bytes) = criterion6();
        sr_bytes = bytes;
        o
    });
    step(7, "single-shock wedge", &mut || {
        let (o, bytes) = criterion7();
        s_bytes = bytes;
        o
    });
    step(8, "determinism", &mut || {
        let (_, again_sr) = criterion6();
        let (_, again_s) = criterion7();
        let same = again_sr == sr_bytes && again_s == s_bytes && !sr_bytes.is_empty() && !s_bytes.is_empty();
        outcome(same, format!("{} + {} artifact bytes compared", sr_bytes.len(), s_bytes.len()))
    });
    step(9, "negative control", &mut criterion9);

    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
