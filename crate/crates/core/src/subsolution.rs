//! Admissible fan subsolutions for data whose standard solution is a 1-shock
//! followed by a 3-rarefaction.
//!
//! A fan subsolution is piecewise constant on three wedges separated by the
//! lines `x2 = μ0 t` and `x2 = μ1 t`. In the middle wedge it carries a density
//! `ρ1`, a velocity `v1`, a traceless symmetric `u1` and an energy level `C1`.
//! Once `v-,1 = v+,1` the full set of jump conditions collapses to a reduced
//! system in `(ρ1, v12, μ0, μ1, δ1, δ2)`, and for fixed `ρ1` all of
//! `μ0, μ1, v12, δ1` are explicit. What remains is a two-parameter search over
//! `(ρ1, δ2)`, in which both admissibility inequalities are affine in `δ2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{scale_of, Certificate, EntryKind, Tolerances};
use crate::eos::GasLaw;
use crate::error::{positive, Error, Result};
use crate::riemann::RiemannProblem;
use crate::wavecurves::bracket;

/// Relative band within which a slightly negative discriminant is clamped to zero.
pub const DISCRIMINANT_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedSubsolution {
    pub rho1: f64,
    pub v12: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub delta1: f64,
    pub delta2: f64,
}

/// Middle-wedge constants of a fan subsolution. `u1` is traceless, so only
/// `u11` and `u12` are stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanSubsolution {
    pub rho1: f64,
    pub v11: f64,
    pub v12: f64,
    pub u11: f64,
    pub u12: f64,
    pub c1: f64,
    pub mu0: f64,
    pub mu1: f64,
}

/// `(ρ- - ρ+)(p(ρ-) - p(ρ+)) - ρ+ ρ- (v-,2 - v+,2)²`.
pub fn discriminant(p: &RiemannProblem) -> f64 {
    let (l, r) = (&p.left, &p.right);
    let jump = l.v2 - r.v2;
    (l.rho - r.rho) * (p.law.p(l.rho) - p.law.p(r.rho)) - r.rho * l.rho * jump * jump
}

fn discriminant_scale(p: &RiemannProblem) -> f64 {
    let (l, r) = (&p.left, &p.right);
    let jump = l.v2 - r.v2;
    scale_of(&[(l.rho - r.rho) * (p.law.p(l.rho) - p.law.p(r.rho)), r.rho * l.rho * jump * jump])
}

/// Discriminant with tiny negative values (single-shock data) clamped to zero.
fn clamped_discriminant(p: &RiemannProblem) -> Result<f64> {
    let d = discriminant(p);
    if d >= 0.0 {
        Ok(d)
    } else if -d <= DISCRIMINANT_CLAMP * discriminant_scale(p) {
        Ok(0.0)
    } else {
        Err(Error::CriterionViolated(d))
    }
}

fn check_interval(p: &RiemannProblem, rho1: f64) -> Result<()> {
    let (lo, hi) = (p.left.rho, p.right.rho);
    if rho1 > lo && rho1 < hi {
        Ok(())
    } else {
        Err(Error::OutsideInterval { rho1, lo, hi })
    }
}

/// Quantities shared by the closed forms at a given `ρ1`.
struct Pieces {
    d: f64,
    base: f64,
    gap_l: f64,
    gap_r: f64,
}

fn pieces(p: &RiemannProblem, rho1: f64) -> Result<Pieces> {
    p.validate()?;
    check_interval(p, rho1)?;
    let d = clamped_discriminant(p)?;
    let (l, r) = (&p.left, &p.right);
    let base = (l.rho * l.v2 - r.rho * r.v2) / (l.rho - r.rho);
    Ok(Pieces { d, base, gap_l: rho1 - l.rho, gap_r: r.rho - rho1 })
}

/// Interface speeds `(μ0, μ1)`; the sign choice guarantees `μ0 < μ1`.
pub fn fan_speeds(p: &RiemannProblem, rho1: f64) -> Result<(f64, f64)> {
    let k = pieces(p, rho1)?;
    let denom = p.left.rho - p.right.rho;
    let mu0 = k.base + (k.d * k.gap_r / k.gap_l).sqrt() / denom;
    let mu1 = k.base - (k.d * k.gap_l / k.gap_r).sqrt() / denom;
    Ok((mu0, mu1))
}

/// Normal velocity in the middle wedge.
pub fn v12_star(p: &RiemannProblem, rho1: f64) -> Result<f64> {
    let k = pieces(p, rho1)?;
    let (l, r) = (&p.left, &p.right);
    let num = -l.rho * l.v2 * k.gap_r - r.rho * r.v2 * k.gap_l + (k.d * k.gap_l * k.gap_r).sqrt();
    Ok(num / (rho1 * (l.rho - r.rho)))
}

/// Excess `δ1` of the normal stress in the middle wedge.
pub fn delta1_star(p: &RiemannProblem, rho1: f64) -> Result<f64> {
    let k = pieces(p, rho1)?;
    let (l, r) = (&p.left, &p.right);
    let law = &p.law;
    let denom = l.rho - r.rho;
    let inner = r.rho * (l.v2 - r.v2) + (k.d * k.gap_r / k.gap_l).sqrt();
    let pressure_term = -law.dp_ab(l.rho, rho1) / rho1;
    Ok(pressure_term + l.rho * k.gap_l / (rho1 * rho1 * denom * denom) * inner * inner)
}

/// `p(a) + p(b) - 2ab (ε(a) - ε(b)) / (a - b)`, positive for `a ≠ b`.
pub(crate) fn energy_gap(p: &RiemannProblem, a: f64, b: f64) -> f64 {
    energy_gap_law(&p.law, a, b)
}

pub(crate) fn energy_gap_law(law: &GasLaw, a: f64, b: f64) -> f64 {
    law.p(a) + law.p(b) - 2.0 * a * b * law.de_ab(b, a) / (a - b)
}

/// Both admissibility margins are affine in `δ2`: `margin = value + slope δ2`.
#[derive(Debug, Clone, Copy)]
struct AffineMargin {
    value: f64,
    slope: f64,
    scale: f64,
}

impl AffineMargin {
    fn at(&self, delta2: f64) -> f64 {
        self.value + self.slope * delta2
    }
}

#[derive(Debug, Clone, Copy)]
struct ReducedPoint {
    v12: f64,
    mu0: f64,
    mu1: f64,
    delta1: f64,
    left: AffineMargin,
    right: AffineMargin,
}

fn reduced_point(p: &RiemannProblem, rho1: f64) -> Result<ReducedPoint> {
    let (mu0, mu1) = fan_speeds(p, rho1)?;
    let v12 = v12_star(p, rho1)?;
    let delta1 = delta1_star(p, rho1)?;
    let (l, r) = (&p.left, &p.right);

    let jl = v12 - l.v2;
    let gap_l = energy_gap(p, l.rho, rho1);
    let a_first = delta1 * rho1 * (v12 + l.v2);
    let a_coef = -l.rho * rho1 * jl / (l.rho - rho1);
    let a_last = jl * gap_l;
    let left = AffineMargin {
        value: a_first + delta1 * a_coef - a_last,
        slope: a_coef,
        scale: scale_of(&[a_first, delta1 * a_coef, a_last]),
    };

    let jr = r.v2 - v12;
    let gap_r = energy_gap(p, rho1, r.rho);
    let b_first = -delta1 * rho1 * (r.v2 + v12);
    let b_coef = rho1 * r.rho * jr / (rho1 - r.rho);
    let b_last = jr * gap_r;
    let right = AffineMargin {
        value: b_first + delta1 * b_coef - b_last,
        slope: b_coef,
        scale: scale_of(&[b_first, delta1 * b_coef, b_last]),
    };
    Ok(ReducedPoint { v12, mu0, mu1, delta1, left, right })
}

/// Assembles the reduced unknowns at `(ρ1, δ2)` from the closed forms.
pub fn reduced_at(p: &RiemannProblem, rho1: f64, delta2: f64) -> Result<ReducedSubsolution> {
    let k = reduced_point(p, rho1)?;
    Ok(ReducedSubsolution { rho1, v12: k.v12, mu0: k.mu0, mu1: k.mu1, delta1: k.delta1, delta2 })
}

/// Certificate for the reduced criterion at `(ρ1, δ2)`: density ordering,
/// positivity of `δ1*` and `δ2`, and both admissibility inequalities.
pub fn check_reduced(p: &RiemannProblem, rho1: f64, delta2: f64, tol: &Tolerances) -> Result<Certificate> {
    p.validate()?;
    positive("rho1", rho1)?;
    if !delta2.is_finite() {
        return Err(Error::NonFinite { what: "delta2", value: delta2 });
    }
    clamped_discriminant(p)?;
    let (l, r) = (&p.left, &p.right);
    let mut cert = Certificate::new();
    cert.strict("rho1-above-left", rho1, l.rho, &[], tol.strict);
    cert.strict("rho1-below-right", r.rho, rho1, &[], tol.strict);
    if !cert.overall {
        cert.note("rho1 outside the open density interval; remaining conditions not evaluated");
        return Ok(cert);
    }
    let k = reduced_point(p, rho1)?;
    cert.strict("delta1-positive", k.delta1, 0.0, &[], tol.strict);
    cert.strict("delta2-positive", delta2, 0.0, &[], tol.strict);
    let a_scale = k.left.scale.max((k.left.slope * delta2).abs());
    cert.push("entropy-left", EntryKind::NonstrictInequalityMargin, k.left.at(delta2), tol.strict * a_scale);
    let b_scale = k.right.scale.max((k.right.slope * delta2).abs());
    cert.push("entropy-right", EntryKind::NonstrictInequalityMargin, k.right.at(delta2), tol.strict * b_scale);
    Ok(cert)
}

/// True when every inequality entry clears its tolerance strictly.
pub fn strictly_passes(cert: &Certificate) -> bool {
    cert.entries.iter().all(|e| match e.kind {
        EntryKind::EquationResidual => e.pass,
        _ => e.value > e.tolerance,
    })
}

/// Which end of the `ρ1` interval the guided scan approaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanEnd {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Exclusive upper limit for `ρ1`; defaults to `ρ+`.
    pub upper: Option<f64>,
    /// Reference density of the 1-shock state the data is close to; defaults to `upper`.
    pub reference_density: Option<f64>,
    pub scan_points: usize,
    pub grid_points: usize,
    pub delta2_max: f64,
    pub tol: Tolerances,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            upper: None,
            reference_density: None,
            scan_points: 64,
            grid_points: 128,
            delta2_max: 1e8,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasiblePoint {
    pub rho1: f64,
    pub delta2: f64,
    /// `guided` or `grid`.
    pub phase: String,
    pub scan_end: ScanEnd,
    pub certificate: Certificate,
}

/// Feasibility search with default options. `None` means this search found
/// no admissible fan subsolution, which is a legitimate outcome.
pub fn search_feasible(p: &RiemannProblem) -> Result<Option<(f64, f64)>> {
    Ok(search_feasible_with(p, &SearchOptions::default())?.map(|f| (f.rho1, f.delta2)))
}

/// Picks the scan end from the sign of `v-,2 - ρref R / (2 (ρref - ρ-))`,
/// where `R` is the 1-shock velocity jump from `ρ-` to `ρref`.
pub fn scan_end(p: &RiemannProblem, reference_density: f64) -> ScanEnd {
    let rho_l = p.left.rho;
    let jump = bracket(&p.law, rho_l, reference_density);
    let threshold = reference_density / (2.0 * (reference_density - rho_l)) * jump;
    if p.left.v2 > threshold {
        ScanEnd::Lower
    } else {
        ScanEnd::Upper
    }
}

/// A candidate is accepted when the reduced margins clear their tolerances
/// strictly and the lifted subsolution passes the full verification.
fn accept(p: &RiemannProblem, rho1: f64, delta2: f64, tol: &Tolerances) -> Option<Certificate> {
    let cert = check_reduced(p, rho1, delta2, tol).ok()?;
    if !strictly_passes(&cert) {
        return None;
    }
    let full = lift_to_full(p, &reduced_at(p, rho1, delta2).ok()?).ok()?;
    verify_full(p, &full, tol).overall.then_some(cert)
}

/// Chooses `δ2` for fixed `ρ1`: the admissible window is an interval since
/// both margins are affine; start at its upper end and bisect downward.
fn pick_delta2(p: &RiemannProblem, rho1: f64, opts: &SearchOptions) -> Option<(f64, Certificate)> {
    let k = reduced_point(p, rho1).ok()?;
    if !(k.delta1 > opts.tol.strict) || !(k.mu1 > k.mu0) {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, opts.delta2_max);
    for m in [k.left, k.right] {
        if !(m.value.is_finite() && m.slope.is_finite()) {
            return None;
        }
        if m.slope > 0.0 {
            lo = lo.max(-m.value / m.slope);
        } else if m.slope < 0.0 {
            hi = hi.min(-m.value / m.slope);
        } else if m.value <= 0.0 {
            return None;
        }
    }
    if !(lo < hi) {
        return None;
    }
    let mut delta2 = hi;
    for _ in 0..60 {
        if delta2 > lo && delta2 > 0.0 {
            if let Some(cert) = accept(p, rho1, delta2, &opts.tol) {
                return Some((delta2, cert));
            }
        }
        delta2 = 0.5 * (lo + delta2);
    }
    None
}

pub fn search_feasible_with(p: &RiemannProblem, opts: &SearchOptions) -> Result<Option<FeasiblePoint>> {
    p.validate()?;
    let (rho_l, rho_r) = (p.left.rho, p.right.rho);
    if !(rho_l < rho_r) {
        return Err(Error::Precondition(format!("need rho- < rho+, got {rho_l} and {rho_r}")));
    }
    let d = discriminant(p);
    if !(d > 0.0) {
        return Err(Error::CriterionViolated(d));
    }
    let upper = opts.upper.unwrap_or(rho_r);
    if !(upper > rho_l && upper <= rho_r) {
        return Err(Error::Precondition(format!("upper limit {upper} outside ({rho_l}, {rho_r}]")));
    }
    let reference = opts.reference_density.unwrap_or(upper);
    let end = scan_end(p, reference);
    let gap = upper - rho_l;

    // Guided phase: offsets shrink geometrically toward the chosen end.
    let n = opts.scan_points.max(1);
    for i in 0..n {
        let offset = gap * 0.5f64.powf(1.0 + 0.5 * i as f64);
        let rho1 = match end {
            ScanEnd::Lower => rho_l + offset,
            ScanEnd::Upper => upper - offset,
        };
        if !(rho1 > rho_l && rho1 < upper) {
            continue;
        }
        if let Some((delta2, certificate)) = pick_delta2(p, rho1, opts) {
            return Ok(Some(FeasiblePoint { rho1, delta2, phase: "guided".into(), scan_end: end, certificate }));
        }
    }

    // Fallback: log-spaced grid, first feasible point in scan order.
    let g = opts.grid_points.max(2);
    let ratio = upper / rho_l;
    let found = (0..g * g).into_par_iter().find_map_first(|idx| {
        let (i, j) = (idx / g, idx % g);
        let rho1 = rho_l * ratio.powf((i + 1) as f64 / (g + 1) as f64);
        if !(rho1 > rho_l && rho1 < upper) {
            return None;
        }
        let delta2 = 10f64.powf(-12.0 + 20.0 * j as f64 / (g - 1) as f64);
        accept(p, rho1, delta2, &opts.tol).map(|cert| (rho1, delta2, cert))
    });
    Ok(found.map(|(rho1, delta2, certificate)| FeasiblePoint {
        rho1,
        delta2,
        phase: "grid".into(),
        scan_end: end,
        certificate,
    }))
}

/// Rebuilds the full middle-wedge constants from a reduced solution:
/// `v11 = v-,1`, `u12 = v11 v12`, `C1 = |v1|² + δ1 + δ2`, `u11 = C1/2 - v12² - δ1`.
pub fn lift_to_full(p: &RiemannProblem, r: &ReducedSubsolution) -> Result<FanSubsolution> {
    if !(r.delta1 > 0.0 && r.delta2 > 0.0) {
        return Err(Error::InvariantViolation(format!(
            "lift needs positive delta1 and delta2, got {} and {}",
            r.delta1, r.delta2
        )));
    }
    let v11 = p.left.v1;
    let c1 = v11 * v11 + r.v12 * r.v12 + r.delta1 + r.delta2;
    Ok(FanSubsolution {
        rho1: r.rho1,
        v11,
        v12: r.v12,
        u11: 0.5 * c1 - r.v12 * r.v12 - r.delta1,
        u12: v11 * r.v12,
        c1,
        mu0: r.mu0,
        mu1: r.mu1,
    })
}

/// Recovers the reduced unknowns from a full fan subsolution.
pub fn extract_reduced(f: &FanSubsolution) -> ReducedSubsolution {
    let delta1 = 0.5 * f.c1 - f.v12 * f.v12 - f.u11;
    let delta2 = f.c1 - f.v11 * f.v11 - f.v12 * f.v12 - delta1;
    ReducedSubsolution { rho1: f.rho1, v12: f.v12, mu0: f.mu0, mu1: f.mu1, delta1, delta2 }
}

/// Checks all eleven conditions on a fan subsolution: speed order, six jump
/// conditions, two subsolution inequalities and two entropy inequalities.
pub fn verify_full(p: &RiemannProblem, f: &FanSubsolution, tol: &Tolerances) -> Certificate {
    let law = &p.law;
    let (l, r) = (&p.left, &p.right);
    let (mu0, mu1, rho1) = (f.mu0, f.mu1, f.rho1);
    let (v11, v12, u11, u12, c1) = (f.v11, f.v12, f.u11, f.u12, f.c1);
    let eq = tol.equation;
    let mut cert = Certificate::new();
    if !(rho1 > 0.0 && rho1.is_finite()) {
        cert.push("rho1-positive", EntryKind::StrictInequalityMargin, rho1, 0.0);
        return cert;
    }
    let (pl, p1, pr) = (law.p(l.rho), law.p(rho1), law.p(r.rho));

    cert.strict("order", mu1, mu0, &[], tol.strict);

    cert.equation("rh-left-mass", mu0 * (l.rho - rho1), l.rho * l.v2 - rho1 * v12, &[l.rho * l.v2, rho1 * v12, mu0 * l.rho, mu0 * rho1], eq);
    cert.equation(
        "rh-left-tangential",
        mu0 * (l.rho * l.v1 - rho1 * v11),
        l.rho * l.v1 * l.v2 - rho1 * u12,
        &[mu0 * l.rho * l.v1, mu0 * rho1 * v11, l.rho * l.v1 * l.v2, rho1 * u12],
        eq,
    );
    let rhs = l.rho * l.v2 * l.v2 + rho1 * u11 + pl - p1 - 0.5 * rho1 * c1;
    cert.equation(
        "rh-left-normal",
        mu0 * (l.rho * l.v2 - rho1 * v12),
        rhs,
        &[mu0 * l.rho * l.v2, mu0 * rho1 * v12, l.rho * l.v2 * l.v2, rho1 * u11, pl, p1, 0.5 * rho1 * c1],
        eq,
    );

    cert.equation("rh-right-mass", mu1 * (rho1 - r.rho), rho1 * v12 - r.rho * r.v2, &[r.rho * r.v2, rho1 * v12, mu1 * r.rho, mu1 * rho1], eq);
    cert.equation(
        "rh-right-tangential",
        mu1 * (rho1 * v11 - r.rho * r.v1),
        rho1 * u12 - r.rho * r.v1 * r.v2,
        &[mu1 * rho1 * v11, mu1 * r.rho * r.v1, rho1 * u12, r.rho * r.v1 * r.v2],
        eq,
    );
    let rhs = -rho1 * u11 - r.rho * r.v2 * r.v2 + p1 - pr + 0.5 * rho1 * c1;
    cert.equation(
        "rh-right-normal",
        mu1 * (rho1 * v12 - r.rho * r.v2),
        rhs,
        &[mu1 * rho1 * v12, mu1 * r.rho * r.v2, r.rho * r.v2 * r.v2, rho1 * u11, p1, pr, 0.5 * rho1 * c1],
        eq,
    );

    let speed2 = v11 * v11 + v12 * v12;
    cert.strict("subsolution-trace", c1, speed2, &[], tol.strict);
    let f1 = 0.5 * c1 - v11 * v11 + u11;
    let f2 = 0.5 * c1 - v12 * v12 - u11;
    let off = u12 - v11 * v12;
    cert.strict("subsolution-det", f1 * f2, off * off, &[], tol.strict);

    // Entropy inequalities are written as `rhs - lhs >= 0`.
    let (el, e1, er) = (law.e(l.rho), law.e(rho1), law.e(r.rho));
    let kin_l = 0.5 * (l.v1 * l.v1 + l.v2 * l.v2);
    let kin_r = 0.5 * (r.v1 * r.v1 + r.v2 * r.v2);
    // ρ-ε(ρ-) - ρ1ε(ρ1) through the accurate energy difference.
    let d_rho_e_l = l.rho * law.de_ab(rho1, l.rho) + (l.rho - rho1) * e1;
    let lhs = mu0 * (d_rho_e_l + l.rho * kin_l - 0.5 * rho1 * c1);
    let rhs = (l.rho * el + pl) * l.v2 - (rho1 * e1 + p1) * v12 + l.rho * l.v2 * kin_l - 0.5 * rho1 * v12 * c1;
    let terms = [mu0 * l.rho * el, mu0 * rho1 * e1, mu0 * l.rho * kin_l, mu0 * 0.5 * rho1 * c1, (l.rho * el + pl) * l.v2, (rho1 * e1 + p1) * v12, l.rho * l.v2 * kin_l, 0.5 * rho1 * v12 * c1];
    cert.nonstrict("entropy-left", rhs, lhs, &terms, tol.strict);

    let d_rho_e_r = rho1 * law.de_ab(r.rho, rho1) + (rho1 - r.rho) * er;
    let lhs = mu1 * (d_rho_e_r + 0.5 * rho1 * c1 - r.rho * kin_r);
    let rhs = (rho1 * e1 + p1) * v12 - (r.rho * er + pr) * r.v2 + 0.5 * rho1 * v12 * c1 - r.rho * r.v2 * kin_r;
    let terms = [mu1 * rho1 * e1, mu1 * r.rho * er, mu1 * 0.5 * rho1 * c1, mu1 * r.rho * kin_r, (rho1 * e1 + p1) * v12, (r.rho * er + pr) * r.v2, 0.5 * rho1 * v12 * c1, r.rho * r.v2 * kin_r];
    cert.nonstrict("entropy-right", rhs, lhs, &terms, tol.strict);
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavecurves::State;
    use approx::assert_relative_eq;

    fn problem(k: f64, gamma: f64, left: (f64, f64, f64), right: (f64, f64)) -> RiemannProblem {
        RiemannProblem::new(
            GasLaw::new(k, gamma).unwrap(),
            State::new(left.0, left.1, left.2).unwrap(),
            State::new(right.0, left.1, right.1).unwrap(),
        )
        .unwrap()
    }

    fn case5() -> RiemannProblem {
        problem(1.0, 1.0, (1.0, 0.0, 0.0), (4.0, -1.0))
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&case5()), 5.0);
        assert_eq!(discriminant(&problem(1.0, 1.4, (2.0, 0.0, 1.0), (2.0, 1.0))), 0.0);
        assert_eq!(discriminant(&problem(1.0, 1.0, (1.0, 0.0, 0.0), (4.0, -1.5))), 0.0);
    }

    #[test]
    fn closed_forms_at_rho1_two() {
        let p = case5();
        let (mu0, mu1) = fan_speeds(&p, 2.0).unwrap();
        assert_relative_eq!(mu0, -4.0 / 3.0 - 10f64.sqrt() / 3.0, max_relative = 1e-15);
        assert_relative_eq!(mu1, -4.0 / 3.0 + 2.5f64.sqrt() / 3.0, max_relative = 1e-15);
        let v12 = v12_star(&p, 2.0).unwrap();
        assert_relative_eq!(v12, -(4.0 + 10f64.sqrt()) / 6.0, max_relative = 1e-15);
        // Mass balance across the left interface.
        assert!((mu0 * (1.0 - 2.0) - (0.0 - 2.0 * v12)).abs() < 1e-14);
        let d1 = delta1_star(&p, 2.0).unwrap();
        let expected = -0.5 + (4.0 + 10f64.sqrt()).powi(2) / 36.0;
        assert_relative_eq!(d1, expected, max_relative = 1e-14);
        assert!((d1 - 0.925).abs() < 1e-3);
    }

    #[test]
    fn fan_speeds_limits() {
        let p = case5();
        let (a0, a1) = fan_speeds(&p, 1.0 + 1e-10).unwrap();
        let (b0, b1) = fan_speeds(&p, 1.0 + 1e-6).unwrap();
        assert!(a0 < b0 && a0 < -1e3);
        assert!((a1 - b1).abs() < 1e-2);
        let (c0, c1) = fan_speeds(&p, 4.0 - 1e-10).unwrap();
        assert!(c1 > 1e3 && c0.is_finite());
    }

    #[test]
    fn fan_speeds_domain_errors() {
        let p = case5();
        assert!(matches!(fan_speeds(&p, 1.0), Err(Error::OutsideInterval { .. })));
        assert!(matches!(fan_speeds(&p, 5.0), Err(Error::OutsideInterval { .. })));
        let violated = problem(1.0, 1.0, (1.0, 0.0, 0.0), (4.0, -2.0));
        assert!(matches!(fan_speeds(&violated, 2.0), Err(Error::CriterionViolated(_))));
    }

    #[test]
    fn delta1_limit_at_left_density() {
        // With D > 0 the limit is D / (ρ- (ρ+ - ρ-)); on the shock curve it is zero.
        let p = case5();
        let d1 = delta1_star(&p, 1.0 + 1e-9).unwrap();
        assert!((d1 - 5.0 / 3.0).abs() < 1e-3, "{d1}");
        let on_curve = problem(1.0, 1.0, (1.0, 0.0, 0.0), (4.0, -1.5));
        let d1 = delta1_star(&on_curve, 1.0 + 1e-9).unwrap();
        assert!(d1.abs() < 1e-6, "{d1}");
    }

    #[test]
    fn delta1_positive_along_shock_curve() {
        for gamma in [1.0, 1.4, 2.0, 3.0] {
            let law = GasLaw::new(1.3, gamma).unwrap();
            let (rho_l, rho_m) = (0.7, 2.9);
            let v2m = 0.4 - bracket(&law, rho_l, rho_m);
            let p = RiemannProblem::new(law, State::new(rho_l, 0.0, 0.4).unwrap(), State::new(rho_m, 0.0, v2m).unwrap()).unwrap();
            for i in 1..50 {
                let rho1 = rho_l + (rho_m - rho_l) * i as f64 / 50.0;
                assert!(delta1_star(&p, rho1).unwrap() > 0.0, "gamma {gamma} rho1 {rho1}");
            }
        }
    }

    #[test]
    fn check_reduced_boundary_and_large_delta2() {
        let p = case5();
        let tol = Tolerances::default();
        let cert = check_reduced(&p, 1.0, 1.0, &tol).unwrap();
        assert!(!cert.overall);
        assert_eq!(cert.entry("rho1-above-left").unwrap().value, 0.0);
        let huge = check_reduced(&p, 2.0, 1e12, &tol).unwrap();
        assert!(!huge.entry("entropy-left").unwrap().pass || !huge.entry("entropy-right").unwrap().pass);
        assert!(check_reduced(&p, -1.0, 1.0, &tol).is_err());
    }

    #[test]
    fn search_and_lift_round_trip() {
        let p = case5();
        let tol = Tolerances::default();
        if let Some(found) = search_feasible_with(&p, &SearchOptions::default()).unwrap() {
            assert!(strictly_passes(&found.certificate));
            let reduced = reduced_at(&p, found.rho1, found.delta2).unwrap();
            let full = lift_to_full(&p, &reduced).unwrap();
            let cert = verify_full(&p, &full, &tol);
            assert!(cert.overall, "{cert:#?}");
            let back = extract_reduced(&full);
            assert!((back.delta1 - reduced.delta1).abs() < 1e-12);
            assert!((back.delta2 - reduced.delta2).abs() < 1e-12);
        }
    }

    #[test]
    fn search_rejects_bad_data() {
        let violated = problem(1.0, 1.0, (1.0, 0.0, 0.0), (4.0, -2.0));
        assert!(matches!(search_feasible(&violated), Err(Error::CriterionViolated(_))));
        let reversed = problem(1.0, 1.0, (4.0, 0.0, 0.0), (1.0, 0.5));
        assert!(matches!(search_feasible(&reversed), Err(Error::Precondition(_))));
    }

    #[test]
    fn lift_identities() {
        let p = problem(1.0, 1.4, (1.0, 0.7, 0.0), (3.0, -0.2));
        let r = ReducedSubsolution { rho1: 2.0, v12: -0.3, mu0: -1.0, mu1: 1.0, delta1: 0.25, delta2: 0.25 };
        let f = lift_to_full(&p, &r).unwrap();
        let f1 = 0.5 * f.c1 - f.v11 * f.v11 + f.u11;
        let f2 = 0.5 * f.c1 - f.v12 * f.v12 - f.u11;
        let off = f.u12 - f.v11 * f.v12;
        assert_relative_eq!(f1 * f2 - off * off, 0.0625, max_relative = 1e-12);
        assert_relative_eq!(f.c1 - f.v11 * f.v11 - f.v12 * f.v12, 0.5, max_relative = 1e-12);
        let q = problem(1.0, 1.4, (1.0, 0.0, 0.0), (3.0, -0.2));
        assert_eq!(lift_to_full(&q, &r).unwrap().u12, 0.0);
        let bad = ReducedSubsolution { delta2: 0.0, ..r };
        assert!(matches!(lift_to_full(&p, &bad), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn trivial_fan_from_a_shock_is_rejected() {
        let p = problem(1.0, 1.0, (1.0, 0.0, 0.0), (4.0, -1.5));
        let sigma = -2.0;
        let rho1 = 2.5;
        let v12 = -0.75;
        let f = FanSubsolution {
            rho1,
            v11: 0.0,
            v12,
            u11: -0.5 * v12 * v12,
            u12: 0.0,
            c1: v12 * v12,
            mu0: sigma - 0.1,
            mu1: sigma + 0.1,
        };
        let cert = verify_full(&p, &f, &Tolerances::default());
        assert!(!cert.overall);
        assert!(!cert.entry("subsolution-trace").unwrap().pass);
        assert!(!cert.entry("rh-left-mass").unwrap().pass);
    }
}
