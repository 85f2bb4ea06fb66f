//! The matrix Airy function
//!
//! ```text
//! A(X) = ∫ exp{ i( tr(Y³)/3 − tr(XY) ) } dY
//! ```
//!
//! through several integral representations. Every representation other
//! than [`Representation::Direct`] and [`Representation::DetOracle`] is
//! computed as the bare integral, without its normalising constant; the
//! constants are fitted by [`calibrate`] and stored in a
//! [`CalibrationTable`].
//!
//! For `N = 2` the argument is described by `(ξ, r)`, the eigenvalues of
//! `X` being `ξ ± r/2`.

mod audit;
mod calibrate;
mod det;
mod direct;
mod n2;
mod separated;

pub use audit::{audit_single_scale, ScaleAudit, CBRT_THREE_HALVES, CBRT_FOUR};
pub use calibrate::{calibrate, calibrate_default, default_fit_point, CalibrationEntry, CalibrationTable};
pub use det::{airy_det_oracle, airy_det_oracle_confluent};
pub use direct::airy_direct;
pub use n2::{
    airy_n2_double, airy_n2_green, airy_n2_green_with_radius, airy_n2_single,
    airy_n2_single_with_scale, DEFAULT_GREEN_RADIUS,
};
pub use separated::{airy_separated, airy_separated_dxi};

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{Evaluation, QuadratureConfig};
use crate::spectra::MatrixArgument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Direct,
    SeparatedEq5,
    N2DoubleEq10,
    N2SingleEq12,
    N2GreenEq13,
    DetOracle,
}

impl Representation {
    pub const ALL: [Representation; 6] = [
        Representation::Direct,
        Representation::SeparatedEq5,
        Representation::N2DoubleEq10,
        Representation::N2SingleEq12,
        Representation::N2GreenEq13,
        Representation::DetOracle,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Representation::Direct => "direct",
            Representation::SeparatedEq5 => "separated_eq5",
            Representation::N2DoubleEq10 => "n2_double_eq10",
            Representation::N2SingleEq12 => "n2_single_eq12",
            Representation::N2GreenEq13 => "n2_green_eq13",
            Representation::DetOracle => "det_oracle",
        }
    }

    pub fn supported_n(self) -> RangeInclusive<usize> {
        match self {
            Representation::Direct => 1..=2,
            Representation::SeparatedEq5 | Representation::DetOracle => 1..=4,
            Representation::N2DoubleEq10 | Representation::N2SingleEq12 | Representation::N2GreenEq13 => 2..=2,
        }
    }

    pub fn supports(self, n: usize) -> bool {
        self.supported_n().contains(&n)
    }

    pub(crate) fn require(self, n: usize) -> Result<()> {
        if self.supports(n) {
            Ok(())
        } else {
            let r = self.supported_n();
            Err(Error::Domain(format!(
                "{} supports {} ≤ N ≤ {}, got N = {n}",
                self.tag(),
                r.start(),
                r.end()
            )))
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Representation {
    type Err = Error;
    /// Accepts the full tags and the short forms `separated`, `n2_double`,
    /// `n2_single`, `n2_green`, `det`.
    fn from_str(s: &str) -> Result<Self> {
        let rep = match s.trim() {
            "direct" => Representation::Direct,
            "separated_eq5" | "separated" => Representation::SeparatedEq5,
            "n2_double_eq10" | "n2_double" => Representation::N2DoubleEq10,
            "n2_single_eq12" | "n2_single" => Representation::N2SingleEq12,
            "n2_green_eq13" | "n2_green" => Representation::N2GreenEq13,
            "det_oracle" | "det" => Representation::DetOracle,
            other => return Err(Error::Parse(format!("unknown representation {other:?}"))),
        };
        Ok(rep)
    }
}

/// `(ξ, r)` of an `N = 2` argument.
pub(crate) fn n2_coordinates(x: &MatrixArgument) -> Result<(f64, f64)> {
    match x.n2_radius() {
        Some(r) => Ok((x.xi, r)),
        None => Err(Error::Domain(format!("expected N = 2, got N = {}", x.dim()))),
    }
}

/// Uncalibrated value of `rep` at `x`, with default contour parameters.
pub fn evaluate(rep: Representation, x: &MatrixArgument, cfg: &QuadratureConfig) -> Result<Evaluation> {
    rep.require(x.dim())?;
    match rep {
        Representation::Direct => airy_direct(x, cfg),
        Representation::SeparatedEq5 => airy_separated(x, cfg),
        Representation::DetOracle => airy_det_oracle(x),
        Representation::N2DoubleEq10 => {
            let (xi, r) = n2_coordinates(x)?;
            airy_n2_double(xi, r, cfg)
        }
        Representation::N2SingleEq12 => {
            let (xi, r) = n2_coordinates(x)?;
            airy_n2_single(xi, r, cfg)
        }
        Representation::N2GreenEq13 => {
            let (xi, r) = n2_coordinates(x)?;
            airy_n2_green(xi, r, cfg)
        }
    }
}

/// `κ·rep(x)` using the table's constant for `(rep, N)`.
pub fn evaluate_calibrated(
    rep: Representation,
    x: &MatrixArgument,
    cfg: &QuadratureConfig,
    table: &CalibrationTable,
) -> Result<Evaluation> {
    let kappa = table.kappa(rep, x.dim())?;
    Ok(evaluate(rep, x, cfg)?.scaled(kappa))
}
