use std::fmt;
use std::fs;

use jointmin::io::{from_json, parse_instance, to_json, InstanceInput};
use jointmin::minimality::{descend_to_minimal, is_minimal, JointInstance, DEFAULT_DESCENT_CAP};
use jointmin::observables::{joint_from_common, pairwise_reduce};
use jointmin::polyhedra::enumerate_vertices;
use jointmin::qubit::sample::{random_instance, seeded_rng, well_separated, SampleKind};
use jointmin::qubit::{cross_validate, qubit_is_minimal, region_scan, QubitInstance, DEFAULT_RANGE};
use jointmin::{Decision, Error, LinearSystem, MarkovKernel, MinimalityVerdict, Observable, Tolerance};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{Command, Common, EXIT_CONSISTENCY, EXIT_NUMERICAL, EXIT_USAGE};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    /// Batch run finished with disagreeing paths.
    Disagreement(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Disagreement(_) => EXIT_CONSISTENCY,
            CliError::Core(Error::Consistency(_)) => EXIT_CONSISTENCY,
            CliError::Core(e) if e.is_numerical() || matches!(e, Error::Infeasible(_)) => EXIT_NUMERICAL,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Disagreement(n) => write!(f, "{n} instance(s) with disagreeing decision paths"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn tolerance(c: &Common) -> Result<Tolerance> {
    let t = Tolerance::default();
    match c.tol {
        None => Ok(t),
        Some(b) if b.is_finite() && b >= 0.0 => Ok(t.with_boundary(b)),
        Some(b) => Err(CliError::Usage(format!("--tol must be a nonnegative number, got {b}"))),
    }
}

fn read_input(c: &Common) -> Result<String> {
    let path = c.input.as_ref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_output(c: &Common, text: &str) -> Result<()> {
    match &c.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit<T: Serialize>(c: &Common, value: &T) -> Result<()> {
    let mut s = to_json(value)?;
    s.push('\n');
    write_output(c, &s)
}

fn with_descent(inst: &JointInstance, v: MinimalityVerdict, descend: bool) -> Result<Value> {
    if descend && v.decision == Decision::NotMinimal {
        let d = descend_to_minimal(inst, DEFAULT_DESCENT_CAP)?;
        Ok(json!({ "verdict": v, "descent": d }))
    } else if descend {
        Ok(json!({ "verdict": v, "descent": null }))
    } else {
        Ok(serde_json::to_value(v).map_err(|e| Error::Numerical(e.to_string()))?)
    }
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Check { common, descend } => check(&common, descend),
        Command::QubitCheck { common, cross_validate, descend } => qubit_check(&common, cross_validate, descend),
        Command::Region { common, gamma, grid } => region(&common, gamma, grid),
        Command::Reduce { common } => {
            let a: Observable = from_json(&read_input(&common)?)?;
            emit(&common, &pairwise_reduce(&a, &tolerance(&common)?)?)
        }
        Command::Joint { common } => {
            let j: JointInput = from_json(&read_input(&common)?)?;
            emit(&common, &joint_from_common(&j.common, &j.kernels, &tolerance(&common)?)?)
        }
        Command::Vertices { common } => {
            let sys: LinearSystem = from_json(&read_input(&common)?)?;
            emit(&common, &enumerate_vertices(&sys, &tolerance(&common)?)?)
        }
        Command::OracleCompare { common, seed, count } => oracle_compare(&common, seed, count),
    }
}

fn check(common: &Common, descend: bool) -> Result<()> {
    let tol = tolerance(common)?;
    let inst = match parse_instance(&read_input(common)?, &tol)? {
        InstanceInput::Joint(inst) => *inst,
        InstanceInput::Qubit(q) => q.joint_instance(&tol)?,
    };
    let v = is_minimal(&inst)?;
    emit(common, &with_descent(&inst, v, descend)?)
}

fn read_qubit(common: &Common, tol: &Tolerance) -> Result<QubitInstance> {
    match parse_instance(&read_input(common)?, tol)? {
        InstanceInput::Qubit(q) => Ok(q),
        InstanceInput::Joint(_) => Err(CliError::Usage("expected a qubit instance".into())),
    }
}

fn qubit_check(common: &Common, cross: bool, descend: bool) -> Result<()> {
    let tol = tolerance(common)?;
    let q = read_qubit(common, &tol)?;
    if cross {
        let (closed, general) = cross_validate(&q, &tol)?;
        let mut out = json!({ "closed_form": closed, "general": general });
        if descend && closed.decision == Decision::NotMinimal {
            out["descent"] = json!(descend_to_minimal(&q.joint_instance(&tol)?, DEFAULT_DESCENT_CAP)?);
        }
        return emit(common, &out);
    }
    let v = qubit_is_minimal(&q.obs_a(), &q.obs_b(), &q.params(), &tol)?;
    let out = if descend { with_descent(&q.joint_instance(&tol)?, v, true)? } else { json!(v) };
    emit(common, &out)
}

fn region(common: &Common, gamma: Option<f64>, grid: usize) -> Result<()> {
    let tol = tolerance(common)?;
    let (a, b, g0) = match &common.input {
        None => ([0.3, 0.0, 0.0], [0.0, 0.3, 0.0], 0.5),
        Some(_) => {
            let q = read_qubit(common, &tol)?;
            if q.alpha != 1.0 || q.beta != 1.0 {
                return Err(CliError::Usage("region needs unbiased marginals (alpha = beta = 1)".into()));
            }
            (q.a, q.b, q.gamma)
        }
    };
    let gamma = gamma.unwrap_or(g0);
    let g = region_scan(&a, &b, gamma, DEFAULT_RANGE, DEFAULT_RANGE, grid, &tol)?;
    write_output(common, &g.to_csv())
}

#[derive(Deserialize)]
struct JointInput {
    common: Observable,
    kernels: Vec<MarkovKernel>,
}

#[derive(Serialize)]
struct Disagreement {
    instance: QubitInstance,
    closed_form: Value,
    general: Value,
}

fn outcome(r: &jointmin::Result<MinimalityVerdict>) -> (Option<Decision>, Value) {
    match r {
        Ok(v) => (Some(v.decision), json!({ "decision": v.decision, "method": v.method })),
        Err(e) => (None, json!({ "error": e.to_string() })),
    }
}

fn oracle_compare(common: &Common, seed: u64, count: usize) -> Result<()> {
    let tol = tolerance(common)?;
    let mut rng = seeded_rng(seed);
    let (mut agree, mut boundary, mut skipped) = (0usize, 0usize, 0usize);
    let (mut minimal, mut not_minimal) = (0usize, 0usize);
    let mut bad = Vec::new();
    let mut done = 0;
    while done < count {
        let kind = if done % 5 == 4 { SampleKind::UnbiasedGeneric } else { SampleKind::UnbiasedSpan };
        let q = random_instance(&mut rng, kind);
        if !well_separated(&q, &tol) {
            skipped += 1;
            continue;
        }
        done += 1;
        let closed = qubit_is_minimal(&q.obs_a(), &q.obs_b(), &q.params(), &tol);
        let general = q.joint_instance(&tol).and_then(|inst| is_minimal(&inst));
        let ((dc, vc), (dg, vg)) = (outcome(&closed), outcome(&general));
        match (dc, dg) {
            (Some(x), Some(y)) if x == y => {
                agree += 1;
                match x {
                    Decision::Minimal => minimal += 1,
                    Decision::NotMinimal => not_minimal += 1,
                    Decision::Boundary => boundary += 1,
                }
            }
            (Some(x), Some(y)) if !x.conflicts_with(y) => boundary += 1,
            _ => bad.push(Disagreement { instance: q, closed_form: vc, general: vg }),
        }
    }
    let report = json!({
        "seed": seed,
        "count": count,
        "skipped_near_threshold": skipped,
        "agree": agree,
        "boundary": boundary,
        "disagree": bad.len(),
        "minimal": minimal,
        "not_minimal": not_minimal,
        "disagreements": bad,
    });
    emit(common, &report)?;
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Disagreement(bad.len()))
    }
}
