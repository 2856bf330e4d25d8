//! Stand-alone evaluators for the three auxiliary inequalities behind the
//! constructions, plus a seeded batch runner.
//!
//! 1. `p(a) + p(b) - 2ab (ε(b) - ε(a))/(b - a) > 0` for `a ≠ b`.
//! 2. The shock bracket strictly exceeds the rarefaction integral.
//! 3. The shock bracket from a fixed lower density grows with the upper one.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eos::GasLaw;
use crate::error::{positive, Error, Result};
use crate::subsolution::energy_gap_law;
use crate::wavecurves::{bracket, rare};

pub const DEFAULT_SEED: u64 = 0x5eed_2017;

pub fn lemma1_gap(law: &GasLaw, rho_a: f64, rho_b: f64) -> Result<f64> {
    positive("rho_a", rho_a)?;
    positive("rho_b", rho_b)?;
    if rho_a == rho_b {
        return Err(Error::InvalidArgument("densities must differ".into()));
    }
    Ok(energy_gap_law(law, rho_a, rho_b))
}

pub fn lemma2_gap(law: &GasLaw, rho_minus: f64, rho_plus: f64) -> Result<f64> {
    positive("rho_minus", rho_minus)?;
    positive("rho_plus", rho_plus)?;
    if !(rho_minus < rho_plus) {
        return Err(Error::InvalidArgument(format!("need rho_minus < rho_plus, got {rho_minus} and {rho_plus}")));
    }
    Ok(bracket(law, rho_minus, rho_plus) - rare(law, rho_minus, rho_plus))
}

/// `(z-1)(z^γ-1) - 4γ/(γ-1)² (z^γ - 2 z^((γ+1)/2) + z)`, defined for `γ > 1`.
pub fn lemma2_f(z: f64, gamma: f64) -> Result<f64> {
    positive("z", z)?;
    if !(gamma > 1.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must exceed 1, got {gamma}")));
    }
    if z == 1.0 {
        return Ok(0.0);
    }
    let zg = z.powf(gamma);
    let g1 = gamma - 1.0;
    Ok((z - 1.0) * (zg - 1.0) - 4.0 * gamma / (g1 * g1) * (zg - 2.0 * z.powf(0.5 * (gamma + 1.0)) + z))
}

/// Isothermal form of the second inequality: `sqrt(z) - 1/sqrt(z) - log z`, positive for `z > 1`.
pub fn lemma2_isothermal_gap(z: f64) -> Result<f64> {
    positive("z", z)?;
    let r = z.sqrt();
    Ok(r - 1.0 / r - z.ln())
}

pub fn lemma3_gaps(law: &GasLaw, rho_lo: f64, rho_mid: f64, rho_hi: f64) -> Result<f64> {
    positive("rho_lo", rho_lo)?;
    positive("rho_mid", rho_mid)?;
    positive("rho_hi", rho_hi)?;
    if !(rho_lo < rho_mid && rho_mid < rho_hi) {
        return Err(Error::InvalidArgument(format!("need rho_lo < rho_mid < rho_hi, got {rho_lo}, {rho_mid}, {rho_hi}")));
    }
    Ok(bracket(law, rho_lo, rho_hi) - bracket(law, rho_lo, rho_mid))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    EnergyGap,
    ShockExceedsRarefaction,
    ShockMonotone,
    AuxiliaryF,
    IsothermalLog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<GasLaw>,
    pub inputs: Vec<f64>,
    pub gap: f64,
    pub pass: bool,
}

impl LemmaReport {
    fn new(lemma: LemmaId, law: Option<&GasLaw>, inputs: Vec<f64>, gap: f64) -> Self {
        Self { lemma, law: law.copied(), inputs, gap, pass: gap > 0.0 }
    }
}

/// Counts and worst cases of one lemma over a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub lemma: LemmaId,
    pub samples: usize,
    pub passed: usize,
    pub min_gap: f64,
    pub failures: Vec<LemmaReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSuite {
    pub seed: u64,
    pub samples: usize,
    pub summaries: Vec<LemmaSummary>,
}

impl LemmaSuite {
    pub fn all_pass(&self) -> bool {
        self.summaries.iter().all(|s| s.passed == s.samples)
    }
}

/// Gamma values exercised by the auxiliary function `f`.
pub const F_GAMMAS: [f64; 5] = [1.1, 1.4, 5.0 / 3.0, 2.0, 3.0];

/// 100 log-spaced points in `(1, 1000]`.
pub fn z_grid() -> Vec<f64> {
    (1..=100).map(|i| 1000f64.powf(i as f64 / 100.0)).collect()
}

fn random_law(rng: &mut ChaCha8Rng) -> GasLaw {
    let k = 10.0 * (1.0 - rng.gen::<f64>());
    let gamma = if rng.gen_bool(0.2) { 1.0 } else { rng.gen_range(1.0..=3.0) };
    GasLaw::new(k, gamma).expect("sampled law is valid")
}

/// Density in `[0.01, 10]` (log-uniform).
fn random_density(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.gen_range(-2.0..=1.0))
}

/// Ratio in `(1, 1000]` (log-uniform).
fn random_ratio(rng: &mut ChaCha8Rng) -> f64 {
    let r = 10f64.powf(rng.gen_range(0.0..=3.0));
    if r > 1.0 {
        r
    } else {
        1.0 + 1e-6
    }
}

fn summarize(lemma: LemmaId, reports: Vec<LemmaReport>) -> LemmaSummary {
    let passed = reports.iter().filter(|r| r.pass).count();
    let min_gap = reports.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
    let samples = reports.len();
    let failures = reports.into_iter().filter(|r| !r.pass).take(10).collect();
    LemmaSummary { lemma, samples, passed, min_gap, failures }
}

/// Samples every inequality `samples` times from the given seed. The
/// auxiliary function and the isothermal inequality run on the fixed `z` grid.
pub fn run_suite(seed: u64, samples: usize) -> LemmaSuite {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut l1 = Vec::with_capacity(samples);
    let mut l2 = Vec::with_capacity(samples);
    let mut l3 = Vec::with_capacity(samples);
    for _ in 0..samples {
        let law = random_law(&mut rng);
        let a = random_density(&mut rng);
        let b = a * random_ratio(&mut rng);
        let (x, y) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let gap = lemma1_gap(&law, x, y).unwrap_or(f64::NEG_INFINITY);
        l1.push(LemmaReport::new(LemmaId::EnergyGap, Some(&law), vec![x, y], gap));

        let law = random_law(&mut rng);
        let lo = random_density(&mut rng);
        let hi = lo * random_ratio(&mut rng);
        let gap = lemma2_gap(&law, lo, hi).unwrap_or(f64::NEG_INFINITY);
        l2.push(LemmaReport::new(LemmaId::ShockExceedsRarefaction, Some(&law), vec![lo, hi], gap));

        let law = random_law(&mut rng);
        let lo = random_density(&mut rng);
        let hi = lo * random_ratio(&mut rng);
        let mid = lo + (hi - lo) * rng.gen_range(0.001..0.999);
        let gap = lemma3_gaps(&law, lo, mid, hi).unwrap_or(f64::NEG_INFINITY);
        l3.push(LemmaReport::new(LemmaId::ShockMonotone, Some(&law), vec![lo, mid, hi], gap));
    }
    let grid = z_grid();
    let mut f = Vec::new();
    for gamma in F_GAMMAS {
        for &z in &grid {
            let gap = lemma2_f(z, gamma).unwrap_or(f64::NEG_INFINITY);
            f.push(LemmaReport::new(LemmaId::AuxiliaryF, None, vec![z, gamma], gap));
        }
    }
    let iso = grid
        .iter()
        .map(|&z| LemmaReport::new(LemmaId::IsothermalLog, None, vec![z], lemma2_isothermal_gap(z).unwrap_or(f64::NEG_INFINITY)))
        .collect();
    LemmaSuite {
        seed,
        samples,
        summaries: vec![
            summarize(LemmaId::EnergyGap, l1),
            summarize(LemmaId::ShockExceedsRarefaction, l2),
            summarize(LemmaId::ShockMonotone, l3),
            summarize(LemmaId::AuxiliaryF, f),
            summarize(LemmaId::IsothermalLog, iso),
        ],
    }
}
