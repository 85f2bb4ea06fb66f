use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use matairy::matrix_airy::{
    calibrate as fit, calibrate_default, evaluate, CalibrationTable, Representation,
};
use matairy::spectra::{split, MatrixArgument, Spectrum};
use matairy::verification::{run_suite, SuiteOptions};
use matairy::{Error, Evaluation, MethodTag, QuadratureConfig};

use crate::output::{csv_row, round15, JsonComplex, CSV_HEADER};
use crate::{CalibrateArgs, Calibration, CheckArgs, Common, EvalArgs, Format, SweepArgs};

const DEFAULT_TABLE: &str = "calibration.json";

pub enum CliError {
    Usage(String),
    Numerical(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Config(_) | Error::InvalidGrid(_) | Error::Domain(_) | Error::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e),
        }
    }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    message: String,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }

    pub fn report(&self) {
        match self {
            CliError::Usage(m) => eprintln!("error: {m}"),
            CliError::Numerical(e) => {
                let d = Diagnostic { error: e.kind(), message: e.to_string() };
                eprintln!("{}", serde_json::to_string(&d).unwrap_or_default());
            }
            CliError::Io(m) => {
                let d = Diagnostic { error: "io_error", message: m.clone() };
                eprintln!("{}", serde_json::to_string(&d).unwrap_or_default());
            }
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn load_config(common: &Common) -> CliResult<QuadratureConfig> {
    match &common.config {
        Some(p) => Ok(QuadratureConfig::from_file(p)?),
        None => Ok(QuadratureConfig::default()),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// The table at `calibration.calibration`, or `None` when it is absent and
/// was not asked for explicitly.
fn load_table(c: &Calibration) -> CliResult<Option<CalibrationTable>> {
    if c.uncalibrated {
        return Ok(None);
    }
    if !c.calibration.exists() {
        if c.calibration != Path::new(DEFAULT_TABLE) {
            return Err(CliError::Usage(format!("calibration file {} not found", c.calibration.display())));
        }
        return Ok(None);
    }
    Ok(Some(CalibrationTable::load(&c.calibration)?))
}

/// `κ` to apply, if the table knows it. Direct and determinant values are
/// exact and never need one.
fn kappa_for(table: Option<&CalibrationTable>, rep: Representation, n: usize) -> Option<Complex64> {
    match rep {
        Representation::Direct | Representation::DetOracle => Some(Complex64::new(1.0, 0.0)),
        _ => table.and_then(|t| t.kappa(rep, n).ok()),
    }
}

fn spectrum_arg(text: &str) -> CliResult<Vec<f64>> {
    let s: Spectrum = text.parse()?;
    Ok(s.values().to_vec())
}

fn argument(xi: Option<f64>, r: Option<f64>, spectrum: Option<&str>) -> CliResult<MatrixArgument> {
    match (xi, r, spectrum) {
        (_, _, Some(s)) => Ok(split(&spectrum_arg(s)?)?),
        (Some(xi), Some(r), None) => Ok(MatrixArgument::n2(xi, r)?),
        (Some(xi), None, None) => Ok(split(&[xi])?),
        _ => Err(CliError::Usage("give --spectrum, or --xi with optional --r".into())),
    }
}

#[derive(Serialize)]
struct EvalOutput {
    representation: Representation,
    eigenvalues: Vec<f64>,
    xi: f64,
    value: JsonComplex,
    error_estimate: f64,
    calibrated: bool,
    kappa: Option<JsonComplex>,
    nodes_used: usize,
    method_tag: MethodTag,
}

fn apply(e: Evaluation, kappa: Option<Complex64>) -> Evaluation {
    match kappa {
        Some(k) => e.scaled(k),
        None => e,
    }
}

pub fn eval(a: EvalArgs) -> CliResult<u8> {
    let cfg = load_config(&a.common)?;
    let x = argument(a.xi, a.r, a.spectrum.as_deref())?;
    let table = load_table(&a.calibration)?;
    let kappa = if a.calibration.uncalibrated { None } else { kappa_for(table.as_ref(), a.rep, x.dim()) };
    let e = apply(evaluate(a.rep, &x, &cfg)?, kappa);
    let text = match a.format {
        Format::Json => {
            let out = EvalOutput {
                representation: a.rep,
                eigenvalues: x.eigenvalues().into_iter().map(round15).collect(),
                xi: round15(x.xi),
                value: e.value.into(),
                error_estimate: round15(e.error_estimate),
                calibrated: kappa.is_some(),
                kappa: kappa.map(JsonComplex::from),
                nodes_used: e.nodes_used,
                method_tag: e.method_tag,
            };
            serde_json::to_string_pretty(&out).expect("serialisable") + "\n"
        }
        Format::Csv => {
            if x.dim() > 2 {
                return Err(CliError::Usage("csv output needs N ≤ 2; use --format json".into()));
            }
            let r = x.n2_radius().unwrap_or(0.0);
            format!("{CSV_HEADER}\n{}\n", csv_row(x.xi, r, e.value, e.error_estimate))
        }
    };
    write_output(a.common.out.as_deref(), &text)?;
    Ok(0)
}

/// `v` or `start:stop:count`.
fn parse_axis(text: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("bad axis {text:?}; expected a number or start:stop:count"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![v.trim().parse().map_err(|_| bad())?]),
        [a, b, n] => {
            let start: f64 = a.trim().parse().map_err(|_| bad())?;
            let stop: f64 = b.trim().parse().map_err(|_| bad())?;
            let count: usize = n.trim().parse().map_err(|_| bad())?;
            if count == 0 || stop < start || !start.is_finite() || !stop.is_finite() {
                return Err(CliError::Usage(format!("axis {text:?} needs count ≥ 1 and stop ≥ start")));
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            Ok((0..count).map(|k| start + (stop - start) * k as f64 / (count - 1) as f64).collect())
        }
        _ => Err(bad()),
    }
}

#[derive(Serialize)]
struct SweepPoint {
    xi: f64,
    r: Option<f64>,
    value: JsonComplex,
    error_estimate: f64,
}

#[derive(Serialize)]
struct SweepOutput {
    representation: Representation,
    calibrated: bool,
    kappa: Option<JsonComplex>,
    points: Vec<SweepPoint>,
}

pub fn sweep(a: SweepArgs) -> CliResult<u8> {
    let cfg = load_config(&a.common)?;
    let (xi_text, r_text) = match &a.grid {
        Some(g) => match g.split_once('x') {
            Some((x, r)) => (x.to_string(), Some(r.to_string())),
            None => (g.clone(), None),
        },
        None => match &a.xi {
            Some(x) => (x.clone(), a.r.clone()),
            None => return Err(CliError::Usage("sweep needs --xi or --grid".into())),
        },
    };
    let xis = parse_axis(&xi_text)?;
    let rs = r_text.as_deref().map(parse_axis).transpose()?;
    let n = if rs.is_some() { 2 } else { 1 };
    a.rep.require_dim(n).map_err(CliError::Usage)?;
    let table = load_table(&a.calibration)?;
    let kappa = if a.calibration.uncalibrated { None } else { kappa_for(table.as_ref(), a.rep, n) };

    let mut points = Vec::new();
    for &xi in &xis {
        match &rs {
            Some(rs) => {
                for &r in rs {
                    let e = apply(evaluate(a.rep, &MatrixArgument::n2(xi, r)?, &cfg)?, kappa);
                    points.push((xi, Some(r), e));
                }
            }
            None => {
                let e = apply(evaluate(a.rep, &split(&[xi])?, &cfg)?, kappa);
                points.push((xi, None, e));
            }
        }
    }
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for (xi, r, e) in &points {
                s.push_str(&csv_row(*xi, r.unwrap_or(0.0), e.value, e.error_estimate));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let out = SweepOutput {
                representation: a.rep,
                calibrated: kappa.is_some(),
                kappa: kappa.map(JsonComplex::from),
                points: points
                    .iter()
                    .map(|(xi, r, e)| SweepPoint {
                        xi: round15(*xi),
                        r: r.map(round15),
                        value: e.value.into(),
                        error_estimate: round15(e.error_estimate),
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&out).expect("serialisable") + "\n"
        }
    };
    write_output(a.common.out.as_deref(), &text)?;
    Ok(0)
}

trait RequireDim {
    fn require_dim(self, n: usize) -> Result<(), String>;
}

impl RequireDim for Representation {
    fn require_dim(self, n: usize) -> Result<(), String> {
        if self.supports(n) {
            Ok(())
        } else {
            Err(format!("{self} does not support N = {n}"))
        }
    }
}

pub fn calibrate(a: CalibrateArgs) -> CliResult<u8> {
    let cfg = load_config(&a.common)?;
    let path: PathBuf = a
        .calibration
        .clone()
        .or_else(|| a.common.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_TABLE));
    let point = match (&a.spectrum, a.xi, a.r) {
        (Some(s), _, _) => Some(split(&spectrum_arg(s)?)?),
        (None, Some(xi), Some(r)) => Some(MatrixArgument::n2(xi, r)?),
        _ => None,
    };
    let table = match point {
        Some(x) => {
            let reps: Vec<Representation> =
                Representation::ALL.into_iter().filter(|r| r.supports(x.dim())).collect();
            let mut table = if path.exists() { CalibrationTable::load(&path)? } else { CalibrationTable::default() };
            table.merge(fit(&reps, &x, &cfg)?);
            table
        }
        None => calibrate_default(&cfg)?,
    };
    table.save(&path)?;
    for e in &table.entries {
        println!(
            "{:>15} N={} kappa={},{} fit_residual={}",
            e.representation.tag(),
            e.n,
            crate::output::fmt15(e.kappa.re),
            crate::output::fmt15(e.kappa.im),
            crate::output::fmt15(e.fit_residual)
        );
    }
    eprintln!("wrote {}", path.display());
    Ok(0)
}

pub fn check(a: CheckArgs) -> CliResult<u8> {
    let cfg = load_config(&a.common)?;
    let calibration = a.calibration.as_ref().map(CalibrationTable::load).transpose()?;
    let opts = SuiteOptions { cfg, seed: a.common.seed, mc_samples: a.samples, calibration };
    let report = run_suite(a.suite, &opts)?;
    write_output(a.common.out.as_deref(), &(report.to_json() + "\n"))?;
    if a.common.out.is_some() {
        eprintln!("suite {}: {}", a.suite, if report.passed { "passed" } else { "FAILED" });
    }
    Ok(if report.passed { 0 } else { 1 })
}
