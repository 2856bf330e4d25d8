//! Command-line driver: reads a JSON problem description, runs one pipeline
//! and writes JSON reports plus a CSV geometry table.
//!
//! Exit status: 0 when every requested certificate passes, 1 for malformed
//! input or unmet preconditions, 2 when the subsolution search comes back
//! empty, 3 for numeric failures.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certificate::Tolerances;
use crate::eos::GasLaw;
use crate::error::Error;
use crate::oracles::{run_suite, DEFAULT_SEED};
use crate::riemann::{classify_detailed, solve_standard, verify_standard, RiemannProblem};
use crate::subsolution::{lift_to_full, reduced_at, search_feasible_with, verify_full, SearchOptions};
use crate::wavecurves::State;
use crate::wedge::{build, fan_geometry, WedgeConstruction, WedgeOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub const DEFAULT_LEMMA_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Classify,
    Standard,
    Subsolution,
    Wedge,
    Lemmas,
}

#[derive(Debug, Parser)]
#[command(name = "isofan", version, about = "Riemann data, fan subsolutions and wedge constructions for 2-D isentropic Euler")]
pub struct Args {
    /// Problem description (JSON). Not needed for `lemmas`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Relative tolerance for equation residuals.
    #[arg(long)]
    pub tol_eq: Option<f64>,
    /// Relative tolerance for strict inequality margins.
    #[arg(long)]
    pub tol_strict: Option<f64>,
    /// Seed for sampled suites.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample count for sampled suites.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Directory for report artifacts; the report also goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    #[serde(rename = "K", alias = "k")]
    pub k: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub rho: f64,
    pub v1: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    pub scan_points: Option<usize>,
    pub grid_points: Option<usize>,
    pub delta2_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub initial_s: Option<f64>,
    pub max_halvings: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub law: LawSpec,
    pub left: StateSpec,
    pub right: StateSpec,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub search: Option<SearchSpec>,
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub geometry_times: Option<Vec<f64>>,
}

/// Input problems reported with the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text)
            .map_err(|e| InputError(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn problem(&self) -> Result<RiemannProblem, InputError> {
        let law = GasLaw::new(self.law.k, self.law.gamma).map_err(|e| InputError(format!("law: {e}")))?;
        let side = |name: &str, s: &StateSpec| {
            State::new(s.rho, s.v1, s.v2).map_err(|e| InputError(format!("{name}: {e}")))
        };
        let (left, right) = (side("left", &self.left)?, side("right", &self.right)?);
        RiemannProblem::new(law, left, right).map_err(|e| InputError(format!("right.v1: {e}")))
    }
}

/// Flag values that override the problem file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub tol_eq: Option<f64>,
    pub tol_strict: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl Overrides {
    fn tolerances(&self, spec: Option<&ProblemSpec>) -> Tolerances {
        let base = spec.and_then(|s| s.tolerances).unwrap_or_default();
        Tolerances {
            equation: self.tol_eq.unwrap_or(base.equation),
            strict: self.tol_strict.unwrap_or(base.strict),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub status: i32,
    pub report: Value,
    pub geometry_csv: Option<String>,
}

impl RunOutput {
    fn new(status: i32, report: Value) -> Self {
        Self { status, report, geometry_csv: None }
    }

    fn input_error(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, json!({ "status": EXIT_INPUT, "error": message.into() }))
    }
}

fn error_status(e: &Error) -> i32 {
    match e {
        Error::NonPositive { .. }
        | Error::NonFinite { .. }
        | Error::InvalidLaw(_)
        | Error::TangentialMismatch { .. }
        | Error::Precondition(_)
        | Error::CriterionViolated(_)
        | Error::NoVacuumForIsothermal
        | Error::InvalidArgument(_) => EXIT_INPUT,
        _ => EXIT_NUMERIC,
    }
}

fn error_output(e: &Error) -> RunOutput {
    let status = error_status(e);
    let mut report = json!({ "status": status, "error": e.to_string() });
    if let Error::ConstructionFailed { attempts } = e {
        report["attempts"] = serde_json::to_value(attempts).expect("attempt log serializes");
    }
    RunOutput::new(status, report)
}

fn pass_status(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn search_options(spec: &ProblemSpec, tol: Tolerances) -> SearchOptions {
    let d = SearchOptions::default();
    let s = spec.search.unwrap_or_default();
    SearchOptions {
        scan_points: s.scan_points.unwrap_or(d.scan_points),
        grid_points: s.grid_points.unwrap_or(d.grid_points),
        delta2_max: s.delta2_max.unwrap_or(d.delta2_max),
        tol,
        ..d
    }
}

/// Runs one mode. `spec` may be `None` only for `lemmas`.
pub fn run(mode: Mode, spec: Option<&ProblemSpec>, flags: &Overrides) -> RunOutput {
    let tol = flags.tolerances(spec);
    if mode == Mode::Lemmas {
        let seed = flags.seed.or(spec.and_then(|s| s.seed)).unwrap_or(DEFAULT_SEED);
        let samples = flags.samples.unwrap_or(DEFAULT_LEMMA_SAMPLES);
        let suite = run_suite(seed, samples);
        let status = pass_status(suite.all_pass());
        return RunOutput::new(status, json!({ "status": status, "mode": mode, "suite": to_value(&suite) }));
    }
    let Some(spec) = spec else {
        return RunOutput::input_error(format!("mode {mode:?} needs --input"));
    };
    let p = match spec.problem() {
        Ok(p) => p,
        Err(e) => return RunOutput::input_error(e.0),
    };
    let result = match mode {
        Mode::Classify => run_classify(&p),
        Mode::Standard => run_standard(&p, &tol),
        Mode::Subsolution => run_subsolution(&p, &search_options(spec, tol), &tol),
        Mode::Wedge => run_wedge(&p, spec, tol),
        Mode::Lemmas => unreachable!("handled above"),
    };
    result.unwrap_or_else(|e| error_output(&e))
}

fn run_classify(p: &RiemannProblem) -> Result<RunOutput, Error> {
    let c = classify_detailed(p)?;
    Ok(RunOutput::new(
        EXIT_OK,
        json!({
            "status": EXIT_OK,
            "mode": Mode::Classify,
            "case": c.case,
            "case_number": c.case.number(),
            "near_boundary": c.near_boundary,
        }),
    ))
}

fn run_standard(p: &RiemannProblem, tol: &Tolerances) -> Result<RunOutput, Error> {
    let s = solve_standard(p)?;
    let cert = verify_standard(p, &s, tol);
    let status = pass_status(cert.overall);
    Ok(RunOutput::new(
        status,
        json!({ "status": status, "mode": Mode::Standard, "solution": to_value(&s), "certificate": to_value(&cert) }),
    ))
}

fn run_subsolution(p: &RiemannProblem, opts: &SearchOptions, tol: &Tolerances) -> Result<RunOutput, Error> {
    let Some(found) = search_feasible_with(p, opts)? else {
        return Ok(RunOutput::new(
            EXIT_NOT_FOUND,
            json!({ "status": EXIT_NOT_FOUND, "mode": Mode::Subsolution, "found": false }),
        ));
    };
    let reduced = reduced_at(p, found.rho1, found.delta2)?;
    let full = lift_to_full(p, &reduced)?;
    let full_cert = verify_full(p, &full, tol);
    let status = pass_status(found.certificate.overall && full_cert.overall);
    Ok(RunOutput::new(
        status,
        json!({
            "status": status,
            "mode": Mode::Subsolution,
            "found": true,
            "search": to_value(&found),
            "reduced": to_value(&reduced),
            "subsolution": to_value(&full),
            "full_certificate": to_value(&full_cert),
        }),
    ))
}

fn run_wedge(p: &RiemannProblem, spec: &ProblemSpec, tol: Tolerances) -> Result<RunOutput, Error> {
    let d = WedgeOptions::default();
    let schedule = spec.schedule.unwrap_or_default();
    let opts = WedgeOptions {
        initial_s: schedule.initial_s.unwrap_or(d.initial_s),
        max_halvings: schedule.max_halvings.unwrap_or(d.max_halvings),
        search: search_options(spec, tol),
    };
    let oriented = build(p, &opts)?;
    let w = &oriented.construction;
    let times = spec.geometry_times.clone().unwrap_or_else(|| vec![1.0]);
    let csv = emit_geometry(w, &times)?;
    let geometry: Vec<_> = times
        .iter()
        .map(|&t| json!({ "t": t, "regions": to_value(&fan_geometry(w, t).expect("times validated")) }))
        .collect();
    let status = pass_status(w.certificates.overall() && w.glue_margin > 0.0);
    let mut out = RunOutput::new(
        status,
        json!({
            "status": status,
            "mode": Mode::Wedge,
            "rotated": oriented.rotated,
            "construction": to_value(w),
            "geometry": geometry,
        }),
    );
    out.geometry_csv = Some(csv);
    Ok(out)
}

/// CSV rows `t,breakpoint,left_region,right_region`, one per interior
/// breakpoint of the fan at each sampled time.
pub fn emit_geometry(w: &WedgeConstruction, times: &[f64]) -> Result<String, Error> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("geometry needs at least one time".into()));
    }
    let mut csv = String::from("t,breakpoint,left_region,right_region\n");
    for &t in times {
        let regions = fan_geometry(w, t)?;
        for pair in regions.windows(2) {
            let x = pair[0].hi.expect("interior breakpoint is finite");
            writeln!(csv, "{t},{x},{},{}", pair[0].label, pair[1].label).expect("writing to a string");
        }
    }
    Ok(csv)
}

fn write_artifacts(dir: &Path, mode: Mode, out: &RunOutput, report: &str) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let name = format!("{}.json", to_value(&mode).as_str().unwrap_or("report"));
    std::fs::write(dir.join(name), report)?;
    if let Some(csv) = &out.geometry_csv {
        std::fs::write(dir.join("geometry.csv"), csv)?;
    }
    Ok(())
}

/// Full CLI entry point; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let flags = Overrides { tol_eq: args.tol_eq, tol_strict: args.tol_strict, seed: args.seed, samples: args.samples };
    let spec = match &args.input {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match ProblemSpec::parse(&text) {
                Ok(s) => Some(s),
                Err(e) => return report(&args, RunOutput::input_error(format!("{}: {e}", path.display()))),
            },
            Err(e) => return report(&args, RunOutput::input_error(format!("{}: {e}", path.display()))),
        },
        None => None,
    };
    let out = run(args.mode, spec.as_ref(), &flags);
    report(&args, out)
}

fn report(args: &Args, out: RunOutput) -> i32 {
    let text = serde_json::to_string_pretty(&out.report).expect("report serializes") + "\n";
    print!("{text}");
    if let Some(err) = out.report.get("error").and_then(Value::as_str) {
        eprintln!("error: {err}");
    }
    if let Some(dir) = &args.out {
        if let Err(e) = write_artifacts(dir, args.mode, &out, &text) {
            eprintln!("error: cannot write artifacts to {}: {e}", dir.display());
            return EXIT_INPUT;
        }
    }
    out.status
}
