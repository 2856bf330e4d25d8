//! Auxiliary-state constructions. The original problem is split at a state
//! `U2` into a perturbed problem `(U-, U2)`, which carries a fan subsolution,
//! and a classical problem `(U2, U+)`, solved by a single 3-wave. The two
//! pieces glue when the subsolution's right interface `μ1` lies strictly left
//! of the 3-wave's leftmost speed `μ2`.

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Tolerances};
use crate::error::{Error, Result};
use crate::riemann::{classify, solve_standard, verify_standard, CaseId, Family, RiemannProblem, StandardSolution, WaveKind};
use crate::subsolution::{
    lift_to_full, reduced_at, search_feasible_with, verify_full, FanSubsolution, ReducedSubsolution, SearchOptions,
};
use crate::wavecurves::{bracket, mass_speed, rare, State};

/// One step of the perturbation schedule and what became of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    pub s: f64,
    pub rho2: f64,
    pub outcome: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WedgeKind {
    /// Data solved by a 1-shock and a 3-rarefaction.
    ShockRarefaction,
    /// Data solved by a single 1-shock.
    SingleShock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeOptions {
    pub initial_s: f64,
    pub max_halvings: u32,
    pub search: SearchOptions,
}

impl Default for WedgeOptions {
    fn default() -> Self {
        Self { initial_s: 0.5, max_halvings: 40, search: SearchOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WedgeCertificates {
    pub reduced: Certificate,
    pub full: Certificate,
    pub right_wave: Certificate,
    pub glue: Certificate,
}

impl WedgeCertificates {
    pub fn overall(&self) -> bool {
        self.reduced.overall && self.full.overall && self.right_wave.overall && self.glue.overall
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WedgeConstruction {
    pub kind: WedgeKind,
    pub original: RiemannProblem,
    pub u2: State,
    pub problem_tilde: RiemannProblem,
    pub problem_wedge: RiemannProblem,
    pub reduced: ReducedSubsolution,
    pub sub: FanSubsolution,
    pub right_wave: StandardSolution,
    pub mu2: f64,
    pub glue_margin: f64,
    pub perturbation: f64,
    /// Density the subsolution's `ρ1` must stay below.
    pub reference_density: f64,
    pub search_phase: String,
    pub certificates: WedgeCertificates,
    pub attempts: Vec<Attempt>,
}

pub fn build_sr(p: &RiemannProblem) -> Result<WedgeConstruction> {
    build_sr_with(p, &WedgeOptions::default())
}

pub fn build_s(p: &RiemannProblem) -> Result<WedgeConstruction> {
    build_s_with(p, &WedgeOptions::default())
}

pub fn build_sr_with(p: &RiemannProblem, opts: &WedgeOptions) -> Result<WedgeConstruction> {
    let std = solve_standard(p)?;
    if std.case != CaseId::S1R3 {
        return Err(Error::Precondition(format!("expected a 1-shock and a 3-rarefaction, got case {}", std.case)));
    }
    let m = std.middle_state().expect("two-wave case has a middle state");
    let law = p.law;
    let right = p.right;
    run_schedule(p, WedgeKind::ShockRarefaction, m.rho, opts, |s| {
        let rho2 = m.rho + s * (right.rho - m.rho);
        // Walk back from U+ along the 3-rarefaction so that (U2, U+) lies on it exactly.
        let v22 = right.v2 - rare(&law, rho2, right.rho);
        Ok(Candidate { rho2, u2: right.with_v2(v22).with_rho(rho2), side: None })
    })
}

pub fn build_s_with(p: &RiemannProblem, opts: &WedgeOptions) -> Result<WedgeConstruction> {
    let case = classify(p)?;
    if case != CaseId::SingleS || !(p.left.rho < p.right.rho) {
        return Err(Error::Precondition(format!("expected a single 1-shock, got case {case}")));
    }
    let law = p.law;
    let (left, right) = (p.left, p.right);
    let limit = rare(&law, left.rho, right.rho);
    run_schedule(p, WedgeKind::SingleShock, right.rho, opts, |s| {
        let rho2 = right.rho + s * right.rho;
        let jump = bracket(&law, rho2, right.rho);
        let v22 = right.v2 + jump;
        Ok(Candidate { rho2, u2: right.with_v2(v22).with_rho(rho2), side: Some((limit, jump)) })
    })
}

struct Candidate {
    rho2: f64,
    u2: State,
    /// `(I(ρ-, ρ+), S(ρ2, ρ+))`; the first must exceed the second.
    side: Option<(f64, f64)>,
}

trait WithRho {
    fn with_rho(self, rho: f64) -> Self;
}

impl WithRho for State {
    fn with_rho(self, rho: f64) -> Self {
        State { rho, ..self }
    }
}

fn run_schedule(
    p: &RiemannProblem,
    kind: WedgeKind,
    reference: f64,
    opts: &WedgeOptions,
    candidate: impl Fn(f64) -> Result<Candidate>,
) -> Result<WedgeConstruction> {
    let mut attempts = Vec::new();
    let mut s = opts.initial_s;
    for _ in 0..=opts.max_halvings {
        let c = candidate(s)?;
        match attempt(p, kind, reference, opts, s, &c) {
            Ok(mut w) => {
                attempts.push(Attempt { s, rho2: c.rho2, outcome: "success".into() });
                w.attempts = attempts;
                return Ok(w);
            }
            Err(reason) => attempts.push(Attempt { s, rho2: c.rho2, outcome: reason }),
        }
        s *= 0.5;
    }
    Err(Error::ConstructionFailed { attempts })
}

fn attempt(
    p: &RiemannProblem,
    kind: WedgeKind,
    reference: f64,
    opts: &WedgeOptions,
    s: f64,
    c: &Candidate,
) -> std::result::Result<WedgeConstruction, String> {
    let tol = opts.search.tol;
    let law = p.law;
    if let Some((limit, jump)) = c.side {
        if !(jump < limit) {
            return Err(format!("side condition fails: shock jump {jump} >= rarefaction integral {limit}"));
        }
    }
    let tilde = RiemannProblem::new(law, p.left, c.u2).map_err(|e| e.to_string())?;
    let wedge = RiemannProblem::new(law, c.u2, p.right).map_err(|e| e.to_string())?;

    let tilde_case = classify(&tilde).map_err(|e| e.to_string())?;
    if tilde_case != CaseId::S1R3 {
        return Err(format!("perturbed problem is case {tilde_case}"));
    }
    let right_wave = solve_standard(&wedge).map_err(|e| e.to_string())?;
    let wave = match (kind, right_wave.case, right_wave.waves.as_slice()) {
        (WedgeKind::ShockRarefaction, CaseId::SingleR, [w]) if w.family == Family::Three => *w,
        (WedgeKind::SingleShock, CaseId::SingleS, [w]) if w.family == Family::Three => *w,
        _ => return Err(format!("right problem is case {}", right_wave.case)),
    };

    let search = SearchOptions { upper: Some(reference), reference_density: Some(reference), ..opts.search };
    let found = match search_feasible_with(&tilde, &search) {
        Ok(Some(f)) => f,
        Ok(None) => return Err("no feasible subsolution found".into()),
        Err(e) => return Err(e.to_string()),
    };
    let reduced = reduced_at(&tilde, found.rho1, found.delta2).map_err(|e| e.to_string())?;
    let sub = lift_to_full(&tilde, &reduced).map_err(|e| e.to_string())?;
    let full = verify_full(&tilde, &sub, &tol);
    if !full.overall {
        return Err(failing("subsolution", &full));
    }
    let right_cert = verify_standard(&wedge, &right_wave, &tol);
    if !right_cert.overall {
        return Err(failing("right wave", &right_cert));
    }

    let mu2 = match (kind, wave.kind) {
        (WedgeKind::ShockRarefaction, WaveKind::Rarefaction { left_edge, .. }) => left_edge,
        (WedgeKind::SingleShock, WaveKind::Shock { .. }) => mass_speed(&c.u2, &p.right),
        _ => unreachable!("wave kind fixed by the case check"),
    };
    let glue = glue_certificate(p, kind, reference, c, &sub, mu2, &tol);
    if !glue.overall {
        return Err(failing("glue", &glue));
    }
    Ok(WedgeConstruction {
        kind,
        original: *p,
        u2: c.u2,
        problem_tilde: tilde,
        problem_wedge: wedge,
        reduced,
        sub,
        right_wave,
        mu2,
        glue_margin: mu2 - sub.mu1,
        perturbation: s,
        reference_density: reference,
        search_phase: found.phase,
        certificates: WedgeCertificates { reduced: found.certificate, full, right_wave: right_cert, glue },
        attempts: Vec::new(),
    })
}

fn failing(what: &str, cert: &Certificate) -> String {
    let labels: Vec<_> = cert.failures().map(|e| e.label.as_str()).collect();
    format!("{what} certificate fails: {}", labels.join(", "))
}

fn glue_certificate(
    p: &RiemannProblem,
    kind: WedgeKind,
    reference: f64,
    c: &Candidate,
    sub: &FanSubsolution,
    mu2: f64,
    tol: &Tolerances,
) -> Certificate {
    let law = &p.law;
    let u2 = &c.u2;
    let mut cert = Certificate::new();
    cert.strict("rho1-below-reference", reference, sub.rho1, &[], tol.strict);
    cert.strict("glue", mu2, sub.mu1, &[], tol.strict);
    // μ1 < v2,2 + sqrt((ρ1/ρ2)(p(ρ1) - p(ρ2))/(ρ1 - ρ2)) <= μ2.
    let bound = u2.v2 + (sub.rho1 / u2.rho * law.dp_ab(u2.rho, sub.rho1) / (sub.rho1 - u2.rho)).sqrt();
    cert.strict("glue-chain-first", bound, sub.mu1, &[], tol.strict);
    cert.nonstrict("glue-chain-last", mu2, bound, &[], tol.strict);
    match kind {
        WedgeKind::ShockRarefaction => {
            let on_curve = p.right.v2 - u2.v2;
            cert.equation("wedge-rarefaction-relation", on_curve, rare(law, u2.rho, p.right.rho), &[], 1e-11);
        }
        WedgeKind::SingleShock => {
            if let Some((limit, jump)) = c.side {
                cert.strict("side-condition", limit, jump, &[], tol.strict);
            }
            let sigma = mass_speed(u2, &p.right);
            cert.equation("mu2-shock-speed", mu2, sigma, &[], tol.equation);
        }
    }
    cert
}

/// Result of [`build`]: the construction and whether the data had to be
/// rotated by 180 degrees first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedWedge {
    pub rotated: bool,
    pub construction: WedgeConstruction,
}

/// Dispatches on the case, rotating mirror-image data (a 1-rarefaction with
/// a 3-shock, or a lone 3-shock) into the form the constructions expect.
pub fn build(p: &RiemannProblem, opts: &WedgeOptions) -> Result<OrientedWedge> {
    let case = classify(p)?;
    let (rotated, q) = match case {
        CaseId::S1R3 => (false, *p),
        CaseId::R1S3 => (true, p.rotate_180()),
        CaseId::SingleS if p.left.rho < p.right.rho => (false, *p),
        CaseId::SingleS => (true, p.rotate_180()),
        other => return Err(Error::Precondition(format!("no wedge construction for case {other}"))),
    };
    let construction = match classify(&q)? {
        CaseId::S1R3 => build_sr_with(&q, opts)?,
        _ => build_s_with(&q, opts)?,
    };
    Ok(OrientedWedge { rotated, construction })
}

/// Open `x2`-interval of one region at a fixed time; `None` marks an unbounded end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub label: String,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

/// Regions of the glued solution at time `t`, ordered left to right.
pub fn fan_geometry(w: &WedgeConstruction, t: f64) -> Result<Vec<Region>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    let region = |label: &str, lo: Option<f64>, hi: Option<f64>| Region { label: label.into(), lo, hi };
    let (mu0, mu1) = (w.sub.mu0 * t, w.sub.mu1 * t);
    let mut out = vec![region("left", None, Some(mu0)), region("wedge", Some(mu0), Some(mu1))];
    match w.right_wave.waves.first().map(|wave| wave.kind) {
        Some(WaveKind::Rarefaction { left_edge, right_edge }) => {
            out.push(region("auxiliary", Some(mu1), Some(left_edge * t)));
            out.push(region("rarefaction", Some(left_edge * t), Some(right_edge * t)));
            out.push(region("right", Some(right_edge * t), None));
        }
        _ => {
            out.push(region("auxiliary", Some(mu1), Some(w.mu2 * t)));
            out.push(region("right", Some(w.mu2 * t), None));
        }
    }
    Ok(out)
}
