//! The one-dimensional Riemann problem behind the planar initial data:
//! classification into the seven wave patterns, the intermediate state, and
//! a certificate for the Rankine-Hugoniot and entropy conditions.

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Tolerances, ENTROPY_SLACK};
use crate::eos::GasLaw;
use crate::error::{Error, Result};
use crate::wavecurves::{bracket, mass_speed, rare, State};

/// Relative half-width of the band around each case-separating equality.
pub const BOUNDARY_BAND: f64 = 1e-12;

const MAX_BISECTIONS: usize = 200;
const MAX_DOUBLINGS: usize = 60;
const VACUUM_FLOOR: f64 = 1e-14;
/// Tolerance on the scalar middle-state equation, relative to `max(1, |Δv|)`.
pub const MIDDLE_EQUATION_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannProblem {
    pub law: GasLaw,
    pub left: State,
    pub right: State,
}

impl RiemannProblem {
    pub fn new(law: GasLaw, left: State, right: State) -> Result<Self> {
        let p = Self { law, left, right };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()?;
        if self.left.v1 != self.right.v1 {
            return Err(Error::TangentialMismatch { left: self.left.v1, right: self.right.v1 });
        }
        Ok(())
    }

    /// `v+,2 - v-,2`.
    pub fn delta_v(&self) -> f64 {
        self.right.v2 - self.left.v2
    }

    /// Rotates the coordinate system by 180 degrees: the states swap sides
    /// and both velocities change sign.
    pub fn rotate_180(&self) -> Self {
        let flip = |s: &State| State { rho: s.rho, v1: -s.v1, v2: -s.v2 };
        Self { law: self.law, left: flip(&self.right), right: flip(&self.left) }
    }
}

/// Wave pattern of the standard solution, numbered as the seven classical cases
/// plus the trivial constant state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    Constant,
    R1R3Vacuum,
    R1R3,
    SingleR,
    R1S3,
    S1R3,
    SingleS,
    S1S3,
}

impl CaseId {
    pub const ALL: [CaseId; 8] = [
        CaseId::Constant,
        CaseId::R1R3Vacuum,
        CaseId::R1R3,
        CaseId::SingleR,
        CaseId::R1S3,
        CaseId::S1R3,
        CaseId::SingleS,
        CaseId::S1S3,
    ];

    pub fn number(self) -> Option<u8> {
        match self {
            CaseId::Constant => None,
            CaseId::R1R3Vacuum => Some(1),
            CaseId::R1R3 => Some(2),
            CaseId::SingleR => Some(3),
            CaseId::R1S3 => Some(4),
            CaseId::S1R3 => Some(5),
            CaseId::SingleS => Some(6),
            CaseId::S1S3 => Some(7),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Constant => "Constant",
            CaseId::R1R3Vacuum => "R1R3Vacuum",
            CaseId::R1R3 => "R1R3",
            CaseId::SingleR => "SingleR",
            CaseId::R1S3 => "R1S3",
            CaseId::S1R3 => "S1R3",
            CaseId::SingleS => "SingleS",
            CaseId::S1S3 => "S1S3",
        }
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub case: CaseId,
    /// Set when `Δv` fell inside the tolerance band of a case-separating equality.
    pub near_boundary: bool,
}

/// `∫_0^{ρ-} + ∫_0^{ρ+}`, the jump `Δv` at which vacuum appears.
pub fn vacuum_threshold(law: &GasLaw, rho_minus: f64, rho_plus: f64) -> Result<f64> {
    if law.is_isothermal() {
        return Err(Error::NoVacuumForIsothermal);
    }
    Ok(rare(law, 0.0, rho_minus) + rare(law, 0.0, rho_plus))
}

pub fn classify(p: &RiemannProblem) -> Result<CaseId> {
    classify_detailed(p).map(|c| c.case)
}

pub fn classify_detailed(p: &RiemannProblem) -> Result<Classification> {
    p.validate()?;
    let law = &p.law;
    let (l, r) = (&p.left, &p.right);
    let dv = p.delta_v();
    let band = |boundary: f64| BOUNDARY_BAND * l.v2.abs().max(r.v2.abs()).max(boundary.abs()).max(1.0);
    let near = |boundary: f64| (dv - boundary).abs() <= band(boundary);
    let found = |case, near_boundary| Ok(Classification { case, near_boundary });

    if l.rho == r.rho && dv == 0.0 {
        return found(CaseId::Constant, false);
    }

    // Case 1 is impossible for γ = 1: the threshold integral diverges.
    if let Ok(vacuum) = vacuum_threshold(law, l.rho, r.rho) {
        if dv >= vacuum || near(vacuum) {
            return found(CaseId::R1R3Vacuum, near(vacuum));
        }
    }

    if l.rho == r.rho {
        return if near(0.0) {
            found(CaseId::Constant, true)
        } else if dv > 0.0 {
            found(CaseId::R1R3, false)
        } else {
            found(CaseId::S1S3, false)
        };
    }

    let rare_jump = rare(law, l.rho, r.rho).abs();
    let shock_jump = bracket(law, l.rho, r.rho);
    if near(rare_jump) {
        found(CaseId::SingleR, true)
    } else if dv > rare_jump {
        found(CaseId::R1R3, false)
    } else if near(-shock_jump) {
        found(CaseId::SingleS, true)
    } else if dv < -shock_jump {
        found(CaseId::S1S3, false)
    } else if l.rho > r.rho {
        found(CaseId::R1S3, false)
    } else {
        found(CaseId::S1R3, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "3")]
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WaveKind {
    Shock { speed: f64 },
    Rarefaction { left_edge: f64, right_edge: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub family: Family,
    #[serde(flatten)]
    pub kind: WaveKind,
    /// States adjacent to the wave; a vacuum side carries `rho = 0` and the
    /// edge velocity of the vacuum band.
    pub left: State,
    pub right: State,
}

impl Wave {
    /// Leftmost and rightmost speed occupied by the wave.
    pub fn speed_span(&self) -> (f64, f64) {
        match self.kind {
            WaveKind::Shock { speed } => (speed, speed),
            WaveKind::Rarefaction { left_edge, right_edge } => (left_edge, right_edge),
        }
    }

    fn shock(family: Family, left: State, right: State) -> Self {
        Wave { family, kind: WaveKind::Shock { speed: mass_speed(&left, &right) }, left, right }
    }

    fn rarefaction(law: &GasLaw, family: Family, left: State, right: State) -> Self {
        let edge = |s: &State| match family {
            Family::One => s.v2 - law.c(s.rho),
            Family::Three => s.v2 + law.c(s.rho),
        };
        let kind = WaveKind::Rarefaction { left_edge: edge(&left), right_edge: edge(&right) };
        Wave { family, kind, left, right }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Middle {
    State(State),
    /// Vacuum between the two rarefactions; `v2` is undefined on
    /// `[v2_left, v2_right]`.
    Vacuum { v1: f64, v2_left: f64, v2_right: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardSolution {
    pub case: CaseId,
    pub near_boundary: bool,
    pub middle: Option<Middle>,
    pub waves: Vec<Wave>,
}

impl StandardSolution {
    pub fn middle_state(&self) -> Option<State> {
        match self.middle {
            Some(Middle::State(s)) => Some(s),
            _ => None,
        }
    }
}

/// Bisection on a sign change of `f` over `[lo, hi]`, run to floating-point
/// resolution (at most `MAX_BISECTIONS` halvings).
pub(crate) fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.signum() != fb.signum()) || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Bracket { lo, hi });
    }
    let sign_a = fa.signum();
    for _ in 0..MAX_BISECTIONS {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == sign_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Residual of the scalar middle-density equation of `case` at `rho_m`.
pub fn middle_equation_residual(p: &RiemannProblem, case: CaseId, rho_m: f64) -> Option<f64> {
    let law = &p.law;
    let (rl, rr) = (p.left.rho, p.right.rho);
    let dv = p.delta_v();
    let value = match case {
        CaseId::R1R3 => rare(law, rho_m, rl) + rare(law, rho_m, rr),
        CaseId::R1S3 => rare(law, rho_m, rl) - bracket(law, rho_m, rr),
        CaseId::S1R3 => rare(law, rho_m, rr) - bracket(law, rho_m, rl),
        CaseId::S1S3 => -bracket(law, rho_m, rr) - bracket(law, rho_m, rl),
        _ => return None,
    };
    Some(value - dv)
}

fn solve_middle_density(p: &RiemannProblem, case: CaseId) -> Result<f64> {
    let (rl, rr) = (p.left.rho, p.right.rho);
    let (lo_rho, hi_rho) = (rl.min(rr), rl.max(rr));
    let g = |rho: f64| middle_equation_residual(p, case, rho).expect("middle equation exists");
    match case {
        CaseId::R1R3 => bisect(g, VACUUM_FLOOR * lo_rho, lo_rho),
        CaseId::R1S3 | CaseId::S1R3 => bisect(g, lo_rho, hi_rho),
        CaseId::S1S3 => {
            let mut hi = 2.0 * hi_rho;
            let mut doublings = 0;
            while g(hi) > 0.0 {
                doublings += 1;
                if doublings > MAX_DOUBLINGS {
                    return Err(Error::Bracket { lo: hi_rho, hi });
                }
                hi *= 2.0;
            }
            bisect(g, hi_rho, hi)
        }
        _ => Err(Error::InvariantViolation(format!("case {case} has no middle density equation"))),
    }
}

pub fn solve_standard(p: &RiemannProblem) -> Result<StandardSolution> {
    let Classification { case, near_boundary } = classify_detailed(p)?;
    let law = &p.law;
    let (l, r) = (p.left, p.right);
    let make = |middle, waves| Ok(StandardSolution { case, near_boundary, middle, waves });

    match case {
        CaseId::Constant => make(None, Vec::new()),
        CaseId::R1R3Vacuum => {
            let v2_left = l.v2 + rare(law, 0.0, l.rho);
            let v2_right = r.v2 - rare(law, 0.0, r.rho);
            let vac_l = State { rho: 0.0, v1: l.v1, v2: v2_left };
            let vac_r = State { rho: 0.0, v1: l.v1, v2: v2_right };
            make(
                Some(Middle::Vacuum { v1: l.v1, v2_left, v2_right }),
                vec![
                    Wave::rarefaction(law, Family::One, l, vac_l),
                    Wave::rarefaction(law, Family::Three, vac_r, r),
                ],
            )
        }
        CaseId::SingleR => {
            let family = if l.rho > r.rho { Family::One } else { Family::Three };
            make(None, vec![Wave::rarefaction(law, family, l, r)])
        }
        CaseId::SingleS => {
            let family = if l.rho < r.rho { Family::One } else { Family::Three };
            make(None, vec![Wave::shock(family, l, r)])
        }
        CaseId::R1R3 | CaseId::R1S3 | CaseId::S1R3 | CaseId::S1S3 => {
            let rho_m = solve_middle_density(p, case)?;
            let residual = middle_equation_residual(p, case, rho_m).unwrap_or(f64::NAN);
            if !(residual.abs() <= MIDDLE_EQUATION_TOL * p.delta_v().abs().max(1.0)) {
                return Err(Error::InvariantViolation(format!(
                    "middle density {rho_m} leaves residual {residual} in case {case}"
                )));
            }
            let v2_m = match case {
                CaseId::R1R3 | CaseId::R1S3 => l.v2 + rare(law, rho_m, l.rho),
                _ => l.v2 - bracket(law, rho_m, l.rho),
            };
            let m = State { rho: rho_m, v1: l.v1, v2: v2_m };
            let first = match case {
                CaseId::R1R3 | CaseId::R1S3 => Wave::rarefaction(law, Family::One, l, m),
                _ => Wave::shock(Family::One, l, m),
            };
            let second = match case {
                CaseId::R1R3 | CaseId::S1R3 => Wave::rarefaction(law, Family::Three, m, r),
                _ => Wave::shock(Family::Three, m, r),
            };
            make(Some(Middle::State(m)), vec![first, second])
        }
    }
}

fn entropy(law: &GasLaw, s: &State) -> f64 {
    s.rho * law.e(s.rho) + 0.5 * s.rho * (s.v1 * s.v1 + s.v2 * s.v2)
}

fn entropy_flux(law: &GasLaw, s: &State) -> f64 {
    (entropy(law, s) + law.p(s.rho)) * s.v2
}

/// Entropy production `[q] - σ[η]` of a discontinuity moving at `speed`;
/// admissible when nonpositive.
pub fn entropy_production(law: &GasLaw, left: &State, right: &State, speed: f64) -> f64 {
    // Differences of ρε are taken via the accurate energy difference.
    let rho_e = |s: &State| s.rho * law.e(s.rho);
    let d_rho_e = right.rho * law.de_ab(left.rho, right.rho) + (right.rho - left.rho) * law.e(left.rho);
    let kin = |s: &State| 0.5 * s.rho * (s.v1 * s.v1 + s.v2 * s.v2);
    let d_eta = d_rho_e + kin(right) - kin(left);
    let q = |s: &State, re: f64| (re + kin(s) + law.p(s.rho)) * s.v2;
    let d_q = q(right, rho_e(right)) - q(left, rho_e(left));
    d_q - speed * d_eta
}

/// Checks jump conditions, entropy production, rarefaction invariants and the
/// ordering of wave speeds. Failures are recorded, never returned as errors.
pub fn verify_standard(p: &RiemannProblem, s: &StandardSolution, tol: &Tolerances) -> Certificate {
    let law = &p.law;
    let mut cert = Certificate::new();
    if s.near_boundary {
        cert.note(format!("data lies within the classification band of case {}", s.case));
    }
    for (i, w) in s.waves.iter().enumerate() {
        let (l, r) = (&w.left, &w.right);
        match w.kind {
            WaveKind::Shock { speed } => {
                let mass_l = speed * (l.rho - r.rho);
                let mass_r = l.rho * l.v2 - r.rho * r.v2;
                cert.equation(format!("wave{i}.rh-mass"), mass_l, mass_r, &[l.rho * l.v2, r.rho * r.v2], tol.equation);
                let tan_l = speed * (l.rho * l.v1 - r.rho * r.v1);
                let tan_r = l.rho * l.v1 * l.v2 - r.rho * r.v1 * r.v2;
                cert.equation(
                    format!("wave{i}.rh-tangential"),
                    tan_l,
                    tan_r,
                    &[l.rho * l.v1 * l.v2, r.rho * r.v1 * r.v2],
                    tol.equation,
                );
                let mom_l = speed * (l.rho * l.v2 - r.rho * r.v2);
                let mom_r = l.rho * l.v2 * l.v2 + law.p(l.rho) - r.rho * r.v2 * r.v2 - law.p(r.rho);
                cert.equation(
                    format!("wave{i}.rh-normal"),
                    mom_l,
                    mom_r,
                    &[l.rho * l.v2 * l.v2, r.rho * r.v2 * r.v2, law.p(l.rho), law.p(r.rho)],
                    tol.equation,
                );
                let production = entropy_production(law, l, r, speed);
                let terms = [
                    entropy_flux(law, l),
                    entropy_flux(law, r),
                    speed * entropy(law, l),
                    speed * entropy(law, r),
                ];
                cert.nonstrict(format!("wave{i}.entropy"), 0.0, production, &terms, ENTROPY_SLACK);
            }
            WaveKind::Rarefaction { left_edge, right_edge } => {
                let expected = match w.family {
                    Family::One => rare(law, r.rho, l.rho),
                    Family::Three => rare(law, l.rho, r.rho),
                };
                cert.equation(
                    format!("wave{i}.integral"),
                    r.v2 - l.v2,
                    expected,
                    &[l.v2, r.v2],
                    tol.equation,
                );
                cert.nonstrict(format!("wave{i}.expansion"), right_edge, left_edge, &[], tol.strict);
            }
        }
    }
    for (i, pair) in s.waves.windows(2).enumerate() {
        let (_, a_hi) = pair[0].speed_span();
        let (b_lo, _) = pair[1].speed_span();
        cert.nonstrict(format!("fan-order{i}"), b_lo, a_hi, &[], tol.strict);
    }
    cert
}
