use num_complex::Complex64;

use crate::airy::MAX_QUADRATURE_ARGUMENT;
use crate::error::{Error, Result};
use crate::quad::{damped_lattice_integral, Evaluation, QuadratureConfig};
use crate::spectra::MatrixArgument;

use super::Representation;

/// Ladder scale for integrands on the shifted contour.
const SHIFTED_LADDER_SCALE: f64 = 0.1;

/// Lattice settings for an integrand moved to `Im y = c`: the box ends
/// where `exp(−c t²)` has fallen below `e^{−45}`, and since the integrand
/// already decays the damping ladder is scaled down, which shrinks the
/// extrapolation error by roughly `SHIFTED_LADDER_SCALE⁴`.
pub(crate) fn shifted_config(cfg: &QuadratureConfig) -> QuadratureConfig {
    cfg.with_truncation(cfg.truncation_radius.min((45.0 / cfg.contour_shift).sqrt()))
        .with_scaled_ladder(SHIFTED_LADDER_SCALE)
}

/// The defining integral for `N ≤ 2`.
///
/// The diagonal entries are integrated along `Im y = c` (`c` is
/// `cfg.contour_shift`), where `exp(i y³/3)` decays like `exp(−c t²)`.
/// For `N = 2` the off-diagonal entry `z` enters only through
/// `exp(i|z|²(y₁ + y₂))` and is integrated in closed form, `iπ/(y₁ + y₂)`.
/// The remaining lattice integral is damped and extrapolated (see
/// [`shifted_config`]).
///
/// On the shifted contour the integrand carries a factor `exp(c·Σx_j)`, so
/// eigenvalues are limited to `|x_j| ≤ 8` as for the scalar quadrature.
pub fn airy_direct(x: &MatrixArgument, cfg: &QuadratureConfig) -> Result<Evaluation> {
    Representation::Direct.require(x.dim())?;
    let ev = x.eigenvalues();
    if let Some(bad) = ev.iter().find(|v| v.abs() > MAX_QUADRATURE_ARGUMENT) {
        return Err(Error::Domain(format!(
            "direct integration needs eigenvalues within ±{MAX_QUADRATURE_ARGUMENT}, got {bad}"
        )));
    }
    let c = cfg.contour_shift;
    let local = shifted_config(cfg);
    let i = Complex64::i();
    if ev.len() == 1 {
        let x0 = ev[0];
        damped_lattice_integral(
            |t| {
                let y = Complex64::new(t[0], c);
                (i * (y * y * y / 3.0 - x0 * y)).exp()
            },
            1,
            &local,
        )
    } else {
        let (x1, x2) = (ev[0], ev[1]);
        damped_lattice_integral(
            |t| {
                let y1 = Complex64::new(t[0], c);
                let y2 = Complex64::new(t[1], c);
                let phase = (y1 * y1 * y1 + y2 * y2 * y2) / 3.0 - x1 * y1 - x2 * y2;
                (i * phase).exp() * i * std::f64::consts::PI / (y1 + y2)
            },
            2,
            &local,
        )
    }
}
