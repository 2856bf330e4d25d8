//! Seeded generators of Riemann data with a prescribed wave pattern. Each
//! generator picks the middle density first and walks the wave curves outward,
//! so the intended case and middle state are known exactly.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eos::GasLaw;
use crate::riemann::{vacuum_threshold, CaseId, RiemannProblem};
use crate::wavecurves::{bracket, rare, State};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub case: CaseId,
    pub problem: RiemannProblem,
    /// Middle density for the two-wave cases.
    pub rho_m: Option<f64>,
}

/// `K ∈ (0, 10]`, `γ ∈ [1, 3]` with `γ = 1` exactly one time in five.
pub fn random_law(rng: &mut impl Rng) -> GasLaw {
    let k = 10.0 * (1.0 - rng.gen::<f64>());
    let gamma = if rng.gen_bool(0.2) { 1.0 } else { rng.gen_range(1.0..=3.0) };
    GasLaw::new(k, gamma).expect("sampled law is valid")
}

/// `K` from a moderate range with a fixed `γ`.
pub fn random_law_with_gamma(rng: &mut impl Rng, gamma: f64) -> GasLaw {
    GasLaw::new(rng.gen_range(0.2..=5.0), gamma).expect("sampled law is valid")
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

fn density(rng: &mut impl Rng) -> f64 {
    log_uniform(rng, 0.2, 5.0)
}

/// Ratio of neighbouring densities, kept away from one so the data stays
/// clear of the case boundaries.
fn ratio(rng: &mut impl Rng) -> f64 {
    log_uniform(rng, 1.1, 8.0)
}

fn velocity(rng: &mut impl Rng) -> f64 {
    rng.gen_range(-2.0..=2.0)
}

fn state(rho: f64, v1: f64, v2: f64) -> State {
    State::new(rho, v1, v2).expect("sampled state is valid")
}

/// Data whose standard solution has the pattern `case`. The vacuum case
/// needs `γ > 1`; the constant case is not generated.
pub fn random_problem(rng: &mut impl Rng, law: GasLaw, case: CaseId) -> Option<Generated> {
    let v1 = velocity(rng);
    let vl = velocity(rng);
    let (rho_l, rho_r, vr, rho_m) = match case {
        CaseId::Constant => return None,
        CaseId::R1R3Vacuum => {
            if law.is_isothermal() {
                return None;
            }
            let (rl, rr) = (density(rng), density(rng));
            let threshold = vacuum_threshold(&law, rl, rr).ok()?;
            (rl, rr, vl + threshold * rng.gen_range(1.1..=3.0), None)
        }
        CaseId::R1R3 => {
            let (rl, rr) = (density(rng), density(rng));
            let m = rl.min(rr) / ratio(rng);
            let vm = vl + rare(&law, m, rl);
            (rl, rr, vm + rare(&law, m, rr), Some(m))
        }
        CaseId::SingleR => {
            let rl = density(rng);
            let rr = if rng.gen_bool(0.5) { rl * ratio(rng) } else { rl / ratio(rng) };
            let vr = if rl > rr { vl + rare(&law, rr, rl) } else { vl + rare(&law, rl, rr) };
            (rl, rr, vr, None)
        }
        CaseId::R1S3 => {
            let rl = density(rng);
            let m = rl / ratio(rng);
            let rr = m / ratio(rng);
            let vm = vl + rare(&law, m, rl);
            (rl, rr, vm - bracket(&law, m, rr), Some(m))
        }
        CaseId::S1R3 => {
            let rl = density(rng);
            let m = rl * ratio(rng);
            let rr = m * ratio(rng);
            let vm = vl - bracket(&law, m, rl);
            (rl, rr, vm + rare(&law, m, rr), Some(m))
        }
        CaseId::SingleS => {
            let rl = density(rng);
            let rr = if rng.gen_bool(0.5) { rl * ratio(rng) } else { rl / ratio(rng) };
            (rl, rr, vl - bracket(&law, rl, rr), None)
        }
        CaseId::S1S3 => {
            let (rl, rr) = (density(rng), density(rng));
            let m = rl.max(rr) * ratio(rng);
            let vm = vl - bracket(&law, m, rl);
            (rl, rr, vm - bracket(&law, m, rr), Some(m))
        }
    };
    let problem = RiemannProblem::new(law, state(rho_l, v1, vl), state(rho_r, v1, vr)).ok()?;
    Some(Generated { case, problem, rho_m })
}

/// A single 1-shock (`ρ- < ρ+`), the input expected by the single-shock construction.
pub fn random_single_one_shock(rng: &mut impl Rng, law: GasLaw) -> Generated {
    let v1 = velocity(rng);
    let vl = velocity(rng);
    let rl = density(rng);
    let rr = rl * ratio(rng);
    let problem = RiemannProblem::new(law, state(rl, v1, vl), state(rr, v1, vl - bracket(&law, rl, rr)))
        .expect("sampled problem is valid");
    Generated { case: CaseId::SingleS, problem, rho_m: None }
}
