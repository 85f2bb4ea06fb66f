use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{Evaluation, QuadratureConfig};
use crate::spectra::{MatrixArgument, Spectrum};

use super::{airy_det_oracle_confluent, evaluate, Representation};

/// Largest acceptable `fit_residual`.
pub const MAX_FIT_RESIDUAL: f64 = 1e-3;
const R_CONVENTION: &str = "N = 2 arguments (xi, r) have eigenvalues xi ± r/2";

/// `κ` such that `κ·rep(x) = reference(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationEntry {
    pub representation: Representation,
    pub n: usize,
    #[serde(with = "crate::complex_json")]
    pub kappa: Complex64,
    pub reference: Representation,
    pub fit_point: MatrixArgument,
    /// Sum of the relative error estimates of both values at the fit point.
    pub fit_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTable {
    pub r_convention: String,
    pub entries: Vec<CalibrationEntry>,
}

impl Default for CalibrationTable {
    fn default() -> Self {
        CalibrationTable { r_convention: R_CONVENTION.into(), entries: Vec::new() }
    }
}

impl CalibrationTable {
    pub fn entry(&self, rep: Representation, n: usize) -> Option<&CalibrationEntry> {
        self.entries.iter().find(|e| e.representation == rep && e.n == n)
    }

    /// `κ` for `(rep, N)`. The direct integral and the determinant formula
    /// are normalised exactly and default to 1.
    pub fn kappa(&self, rep: Representation, n: usize) -> Result<Complex64> {
        match self.entry(rep, n) {
            Some(e) => Ok(e.kappa),
            None if matches!(rep, Representation::Direct | Representation::DetOracle) => {
                Ok(Complex64::new(1.0, 0.0))
            }
            None => Err(Error::Config(format!("no calibration for {rep} at N = {n}"))),
        }
    }

    /// Adds `entry`, replacing any entry for the same `(rep, N)`. Entries
    /// are kept sorted so that serialisation is canonical.
    pub fn insert(&mut self, entry: CalibrationEntry) {
        self.entries.retain(|e| !(e.representation == entry.representation && e.n == entry.n));
        self.entries.push(entry);
        self.entries.sort_by_key(|e| (e.n, e.representation));
    }

    pub fn merge(&mut self, other: CalibrationTable) {
        for e in other.entries {
            self.insert(e);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("calibration table serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let table: CalibrationTable = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("calibration table: {e}")))?;
        for e in &table.entries {
            if !(e.kappa.norm() > 0.0 && e.kappa.norm().is_finite()) {
                return Err(Error::Parse(format!("calibration for {} has κ = {}", e.representation, e.kappa)));
            }
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
    }
}

/// Fit point used by [`calibrate_default`] for each `N`.
pub fn default_fit_point(n: usize) -> Result<MatrixArgument> {
    match n {
        1 => MatrixArgument::new(0.5, Spectrum::new(vec![0.0])?),
        2 => MatrixArgument::n2(0.0, 1.0),
        3 => MatrixArgument::new(0.2, Spectrum::new(vec![0.8, 0.1, -0.9])?),
        4 => MatrixArgument::new(0.1, Spectrum::new(vec![0.9, 0.3, -0.4, -0.8])?),
        _ => Err(Error::Domain(format!("no default fit point for N = {n}"))),
    }
}

fn reference_for(n: usize) -> Representation {
    if n <= 2 {
        Representation::Direct
    } else {
        Representation::DetOracle
    }
}

fn reference_value(rep: Representation, x: &MatrixArgument, cfg: &QuadratureConfig) -> Result<Evaluation> {
    match rep {
        Representation::DetOracle => airy_det_oracle_confluent(x),
        _ => evaluate(rep, x, cfg),
    }
}

fn nondegenerate(rep: Representation, e: &Evaluation) -> Result<()> {
    let magnitude = e.value.norm();
    if !(magnitude >= 10.0 * e.error_estimate) || magnitude == 0.0 {
        return Err(Error::DegenerateFit { rep: rep.tag().into(), magnitude, error: e.error_estimate });
    }
    Ok(())
}

/// Fits `κ_rep = reference(x)/rep(x)` at `fit_point` for each listed
/// representation. The reference is the direct integral for `N ≤ 2` and
/// the determinant formula for larger `N`.
pub fn calibrate(
    representations: &[Representation],
    fit_point: &MatrixArgument,
    cfg: &QuadratureConfig,
) -> Result<CalibrationTable> {
    let n = fit_point.dim();
    for rep in representations {
        rep.require(n)?;
    }
    let reference = reference_for(n);
    let ref_eval = reference_value(reference, fit_point, cfg)?;
    nondegenerate(reference, &ref_eval)?;
    let ref_rel = ref_eval.error_estimate / ref_eval.value.norm();

    let mut table = CalibrationTable::default();
    table.insert(CalibrationEntry {
        representation: reference,
        n,
        kappa: Complex64::new(1.0, 0.0),
        reference,
        fit_point: fit_point.clone(),
        fit_residual: 0.0,
    });
    for &rep in representations {
        if rep == reference {
            continue;
        }
        let e = reference_value(rep, fit_point, cfg)?;
        nondegenerate(rep, &e)?;
        let fit_residual = ref_rel + e.error_estimate / e.value.norm();
        if fit_residual > MAX_FIT_RESIDUAL {
            return Err(Error::NonConvergence(format!(
                "calibration of {rep} at {fit_point}: fit residual {fit_residual:e} exceeds {MAX_FIT_RESIDUAL:e}"
            )));
        }
        table.insert(CalibrationEntry {
            representation: rep,
            n,
            kappa: ref_eval.value / e.value,
            reference,
            fit_point: fit_point.clone(),
            fit_residual,
        });
    }
    Ok(table)
}

/// Calibrates every representation at the default fit points for
/// `N = 1, 2, 3`.
pub fn calibrate_default(cfg: &QuadratureConfig) -> Result<CalibrationTable> {
    let mut table = CalibrationTable::default();
    for n in 1..=3 {
        let reps: Vec<Representation> = Representation::ALL.into_iter().filter(|r| r.supports(n)).collect();
        table.merge(calibrate(&reps, &default_fit_point(n)?, cfg)?);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_calibration_is_one() {
        let cfg = QuadratureConfig::default();
        let x = default_fit_point(1).unwrap();
        let t = calibrate(&[Representation::Direct, Representation::DetOracle], &x, &cfg).unwrap();
        assert_eq!(t.kappa(Representation::Direct, 1).unwrap(), Complex64::new(1.0, 0.0));
        let det = t.kappa(Representation::DetOracle, 1).unwrap();
        assert!((det - 1.0).norm() < 1e-4);
    }

    #[test]
    fn missing_entry_is_a_config_error() {
        let t = CalibrationTable::default();
        assert!(matches!(t.kappa(Representation::N2SingleEq12, 2), Err(Error::Config(_))));
        assert_eq!(t.kappa(Representation::Direct, 2).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn json_round_trip() {
        let mut t = CalibrationTable::default();
        t.insert(CalibrationEntry {
            representation: Representation::N2SingleEq12,
            n: 2,
            kappa: Complex64::new(19.9, -0.5),
            reference: Representation::Direct,
            fit_point: default_fit_point(2).unwrap(),
            fit_residual: 1e-6,
        });
        let back = CalibrationTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(CalibrationTable::from_json("{").is_err());
    }

    #[test]
    fn rejects_representation_outside_its_dimension() {
        let cfg = QuadratureConfig::default();
        let x = default_fit_point(3).unwrap();
        assert!(matches!(calibrate(&[Representation::Direct], &x, &cfg), Err(Error::Domain(_))));
    }
}
