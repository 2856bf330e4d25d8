//! Riemann problems for the two-dimensional isentropic Euler equations with
//! pressure law `p(ρ) = K ρ^γ`: exact standard solutions, admissible fan
//! subsolutions, and the auxiliary-state wedge constructions that produce
//! subsolutions where none exists for the original data.
//!
//! Every numerical claim is reported through a [`Certificate`] listing
//! residuals and inequality margins with the tolerance each was judged by.

// Negated comparisons double as NaN rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod cli;
pub mod eos;
pub mod error;
pub mod oracles;
pub mod riemann;
pub mod sampling;
pub mod subsolution;
pub mod wavecurves;
pub mod wedge;

pub use certificate::{Certificate, Entry, EntryKind, Tolerances};
pub use eos::GasLaw;
pub use error::{Error, Result};
pub use riemann::{classify, solve_standard, verify_standard, CaseId, RiemannProblem, StandardSolution};
pub use subsolution::{FanSubsolution, ReducedSubsolution};
pub use wavecurves::State;
pub use wedge::{build_s, build_sr, fan_geometry, WedgeConstruction};
