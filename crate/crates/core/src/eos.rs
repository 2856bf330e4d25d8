//! Polytropic equation of state `p(ρ) = K ρ^γ`.
//!
//! The internal energy satisfies `p(ρ) = ρ² ε'(ρ)`, which for `γ > 1` gives
//! `ε(ρ) = K ρ^(γ-1) / (γ-1)` and for `γ = 1` the logarithmic law
//! `ε(ρ) = K log ρ`.

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};

/// `γ` values closer than this to one select the logarithmic energy branch.
pub const ISOTHERMAL_GAMMA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasLaw {
    k: f64,
    gamma: f64,
}

impl GasLaw {
    pub fn new(k: f64, gamma: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidLaw(format!("K must be positive, got {k}")));
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidLaw(format!("gamma must be >= 1, got {gamma}")));
        }
        Ok(Self { k, gamma })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// True when the law is treated as isothermal (`γ = 1`).
    pub fn is_isothermal(&self) -> bool {
        (self.gamma - 1.0).abs() < ISOTHERMAL_GAMMA_TOL
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        positive("rho", rho)?;
        Ok(self.p(rho))
    }

    pub fn pressure_derivative(&self, rho: f64) -> Result<f64> {
        positive("rho", rho)?;
        Ok(self.dp(rho))
    }

    pub fn internal_energy(&self, rho: f64) -> Result<f64> {
        positive("rho", rho)?;
        Ok(self.e(rho))
    }

    /// `p(b) - p(a)`, evaluated without cancellation when `a ≈ b`.
    pub fn pressure_difference(&self, a: f64, b: f64) -> Result<f64> {
        positive("rho_a", a)?;
        positive("rho_b", b)?;
        Ok(self.dp_ab(a, b))
    }

    /// `ε(b) - ε(a)`, evaluated without cancellation when `a ≈ b`.
    pub fn energy_difference(&self, a: f64, b: f64) -> Result<f64> {
        positive("rho_a", a)?;
        positive("rho_b", b)?;
        Ok(self.de_ab(a, b))
    }

    /// Sound speed `sqrt(p'(ρ))`; defined at the vacuum `ρ = 0` as well.
    pub fn sound_speed(&self, rho: f64) -> Result<f64> {
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::NonPositive { what: "rho", value: rho });
        }
        Ok(self.c(rho))
    }

    // Unchecked kernels. Callers guarantee positive densities.

    pub(crate) fn p(&self, rho: f64) -> f64 {
        if self.is_isothermal() {
            self.k * rho
        } else {
            self.k * rho.powf(self.gamma)
        }
    }

    pub(crate) fn dp(&self, rho: f64) -> f64 {
        if self.is_isothermal() {
            self.k
        } else {
            self.k * self.gamma * rho.powf(self.gamma - 1.0)
        }
    }

    pub(crate) fn c(&self, rho: f64) -> f64 {
        if self.is_isothermal() {
            self.k.sqrt()
        } else if rho == 0.0 {
            0.0
        } else {
            self.dp(rho).sqrt()
        }
    }

    pub(crate) fn e(&self, rho: f64) -> f64 {
        if self.is_isothermal() {
            self.k * rho.ln()
        } else {
            self.k * rho.powf(self.gamma - 1.0) / (self.gamma - 1.0)
        }
    }

    pub(crate) fn dp_ab(&self, a: f64, b: f64) -> f64 {
        if self.is_isothermal() {
            self.k * (b - a)
        } else {
            self.p(a) * (self.gamma * (b / a).ln()).exp_m1()
        }
    }

    pub(crate) fn de_ab(&self, a: f64, b: f64) -> f64 {
        let log_ratio = (b / a).ln();
        if self.is_isothermal() {
            self.k * log_ratio
        } else {
            let g1 = self.gamma - 1.0;
            self.k * a.powf(g1) * (g1 * log_ratio).exp_m1() / g1
        }
    }
}
