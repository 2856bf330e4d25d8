//! Scalar building blocks of the wave curves: the rarefaction integral
//! `∫ sqrt(p'(r))/r dr`, the shock bracket, characteristic speeds and the
//! mass Rankine-Hugoniot speed.

use serde::{Deserialize, Serialize};

use crate::eos::GasLaw;
use crate::error::{finite, positive, Error, Result};

/// One constant gas state: density, tangential velocity `v1` and normal
/// velocity `v2` (the normal direction is `x2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub rho: f64,
    pub v1: f64,
    pub v2: f64,
}

impl State {
    pub fn new(rho: f64, v1: f64, v2: f64) -> Result<Self> {
        positive("rho", rho)?;
        finite("v1", v1)?;
        finite("v2", v2)?;
        Ok(Self { rho, v1, v2 })
    }

    /// Checks the state invariants (positive density, finite velocities).
    pub fn validate(&self) -> Result<()> {
        Self::new(self.rho, self.v1, self.v2).map(|_| ())
    }

    pub(crate) fn with_v2(self, v2: f64) -> Self {
        Self { v2, ..self }
    }
}

fn nonnegative(what: &'static str, rho: f64) -> Result<f64> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(rho)
    } else {
        Err(Error::NonPositive { what, value: rho })
    }
}

/// `∫_{rho_a}^{rho_b} sqrt(p'(r))/r dr` in closed form.
///
/// For `γ > 1` the vacuum endpoint `0` is admitted since the integral
/// converges there; for `γ = 1` it diverges.
pub fn rarefaction_integral(law: &GasLaw, rho_a: f64, rho_b: f64) -> Result<f64> {
    nonnegative("rho_a", rho_a)?;
    nonnegative("rho_b", rho_b)?;
    if law.is_isothermal() && (rho_a == 0.0 || rho_b == 0.0) {
        return Err(Error::DivergentIntegral);
    }
    Ok(rare(law, rho_a, rho_b))
}

pub(crate) fn rare(law: &GasLaw, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -rare(law, b, a);
    }
    if law.is_isothermal() {
        return law.k().sqrt() * (b / a).ln();
    }
    let g1 = law.gamma() - 1.0;
    if a == 0.0 || b == 0.0 {
        2.0 / g1 * (law.c(b) - law.c(a))
    } else {
        2.0 / g1 * law.c(a) * (0.5 * g1 * (b / a).ln()).exp_m1()
    }
}

/// `sqrt((a - b)(p(a) - p(b)) / (a b))`, the velocity jump across a shock
/// joining densities `a` and `b`. Symmetric, zero iff `a = b`.
pub fn shock_bracket(law: &GasLaw, rho_a: f64, rho_b: f64) -> Result<f64> {
    positive("rho_a", rho_a)?;
    positive("rho_b", rho_b)?;
    Ok(bracket(law, rho_a, rho_b))
}

pub(crate) fn bracket(law: &GasLaw, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    ((hi - lo) / lo * (law.dp_ab(lo, hi) / hi)).sqrt()
}

/// Third characteristic speed `v2 + sqrt(p'(ρ))`.
pub fn lambda3(law: &GasLaw, s: &State) -> Result<f64> {
    positive("rho", s.rho)?;
    Ok(s.v2 + law.c(s.rho))
}

/// First characteristic speed `v2 - sqrt(p'(ρ))`.
pub fn lambda1(law: &GasLaw, s: &State) -> Result<f64> {
    positive("rho", s.rho)?;
    Ok(s.v2 - law.c(s.rho))
}

/// Speed of the discontinuity joining `left` and `right` from mass balance.
pub fn pure_shock_speed(left: &State, right: &State) -> Result<f64> {
    if left.rho == right.rho {
        return Err(Error::DegenerateShock(left.rho));
    }
    Ok(mass_speed(left, right))
}

pub(crate) fn mass_speed(left: &State, right: &State) -> f64 {
    (left.rho * left.v2 - right.rho * right.v2) / (left.rho - right.rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn law(k: f64, gamma: f64) -> GasLaw {
        GasLaw::new(k, gamma).unwrap()
    }

    /// Adaptive Simpson quadrature, used only as an independent oracle.
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                left + right + delta / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                    + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
            }
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    #[test]
    fn rarefaction_examples() {
        assert_relative_eq!(rarefaction_integral(&law(0.5, 2.0), 0.0, 1.0).unwrap(), 2.0);
        assert_eq!(rarefaction_integral(&law(1.3, 1.7), 2.5, 2.5).unwrap(), 0.0);
        assert_relative_eq!(
            rarefaction_integral(&law(1.0, 1.0), 1.0, std::f64::consts::E).unwrap(),
            1.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn rarefaction_errors() {
        assert_eq!(rarefaction_integral(&law(1.0, 1.0), 0.0, 1.0), Err(Error::DivergentIntegral));
        assert!(matches!(
            rarefaction_integral(&law(1.0, 2.0), -1.0, 1.0),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn shock_bracket_examples() {
        assert_eq!(shock_bracket(&law(1.0, 1.0), 1.0, 4.0).unwrap(), 1.5);
        assert_eq!(shock_bracket(&law(2.0, 1.4), 3.0, 3.0).unwrap(), 0.0);
        assert_relative_eq!(shock_bracket(&law(0.5, 2.0), 1.0, 2.0).unwrap(), 0.75f64.sqrt(), max_relative = 1e-15);
        assert!(shock_bracket(&law(1.0, 1.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn lambda3_examples() {
        let iso = law(1.0, 1.0);
        assert_eq!(lambda3(&iso, &State::new(1.0, 0.0, 0.0).unwrap()).unwrap(), 1.0);
        assert_eq!(lambda3(&law(0.5, 2.0), &State::new(4.0, 0.0, -1.0).unwrap()).unwrap(), 1.0);
        for rho in [0.01, 1.0, 77.0] {
            assert_eq!(lambda3(&iso, &State { rho, v1: 0.0, v2: 2.5 }).unwrap(), 3.5);
        }
        assert!(lambda3(&iso, &State { rho: 0.0, v1: 0.0, v2: 0.0 }).is_err());
    }

    #[test]
    fn pure_shock_speed_examples() {
        let s = |rho, v2| State { rho, v1: 0.0, v2 };
        assert_eq!(pure_shock_speed(&s(2.0, 1.0), &s(1.0, 0.0)).unwrap(), 2.0);
        assert_relative_eq!(pure_shock_speed(&s(5.0, 0.7), &s(2.0, 0.7)).unwrap(), 0.7, max_relative = 1e-15);
        assert_eq!(pure_shock_speed(&s(4.0, 0.0), &s(1.0, 3.0)).unwrap(), -1.0);
        assert_eq!(pure_shock_speed(&s(1.0, 0.0), &s(1.0, 3.0)), Err(Error::DegenerateShock(1.0)));
    }

    fn arb_law() -> impl Strategy<Value = GasLaw> {
        (0.01f64..10.0, prop_oneof![Just(1.0), 1.0f64..3.0]).prop_map(|(k, g)| law(k, g))
    }

    proptest! {
        #[test]
        fn rarefaction_matches_quadrature(l in arb_law(), a in 1e-2f64..1e2, ratio in 1.0f64..50.0) {
            let b = a * ratio;
            let f = |r: f64| l.c(r) / r;
            let oracle = simpson(&f, a, b, 1e-10);
            let closed = rarefaction_integral(&l, a, b).unwrap();
            prop_assert!((closed - oracle).abs() <= 1e-8 * oracle.abs().max(1e-300));
        }

        #[test]
        fn rarefaction_is_additive(l in arb_law(), a in 1e-2f64..1e2, r1 in 1.0f64..30.0, r2 in 1.0f64..30.0) {
            let b = a * r1;
            let c = b * r2;
            let whole = rarefaction_integral(&l, a, c).unwrap();
            let parts = rarefaction_integral(&l, a, b).unwrap() + rarefaction_integral(&l, b, c).unwrap();
            prop_assert!((whole - parts).abs() <= 1e-12 * whole.abs().max(1e-300));
            let swapped = rarefaction_integral(&l, c, a).unwrap();
            prop_assert_eq!(swapped, -whole);
        }

        #[test]
        fn bracket_identity(l in arb_law(), a in 1e-2f64..1e2, b in 1e-2f64..1e2) {
            let s = shock_bracket(&l, a, b).unwrap();
            prop_assert_eq!(s, shock_bracket(&l, b, a).unwrap());
            let lhs = s * s * a * b;
            let rhs = (a - b) * (l.p(a) - l.p(b));
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300) + 1e-14 * l.p(a).max(l.p(b)) * (a - b).abs());
        }

        #[test]
        fn rarefaction_below_shock(l in arb_law(), lo in 1e-2f64..1e2, ratio in 1.001f64..1e3) {
            let hi = lo * ratio;
            prop_assert!(rarefaction_integral(&l, lo, hi).unwrap() < shock_bracket(&l, lo, hi).unwrap());
        }

        #[test]
        fn bracket_grows_with_spread(l in arb_law(), lo in 1e-2f64..1e2, r1 in 1.001f64..30.0, r2 in 1.001f64..30.0) {
            let mid = lo * r1;
            let hi = mid * r2;
            prop_assert!(shock_bracket(&l, lo, mid).unwrap() < shock_bracket(&l, lo, hi).unwrap());
        }
    }
}
