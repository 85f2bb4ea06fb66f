use num_complex::Complex64;

use crate::airy::{ai_integral_or_zero, MAX_ARGUMENT};
use crate::error::{Error, Result};
use crate::quad::{
    check_converged, damped_lattice_integral, Contour, Evaluation, GaussLegendre, MethodTag,
    QuadratureConfig,
};

use super::audit::CBRT_FOUR;
use super::direct::shifted_config;

/// Radius of the arc around `τ = 0` in the Green-function form.
pub const DEFAULT_GREEN_RADIUS: f64 = 0.5;
/// Rotation used by the Green-function form when `cfg` selects damping.
const FALLBACK_ANGLE: f64 = 0.9 * std::f64::consts::PI / 6.0;

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

fn check_finite(xi: f64, r: f64) -> Result<()> {
    if !xi.is_finite() || !r.is_finite() {
        return Err(Error::Domain(format!("non-finite argument (xi = {xi}, r = {r})")));
    }
    Ok(())
}

/// `∫dη ∫_0^∞ dp exp{(2i/3)(η³ + 3ηp² − 3ξη)} sinc(pr) p²`.
///
/// `η` runs along `Im η = c`, which makes the integrand decay like
/// `exp(−2c(t² + p²))`; the integrand is even in `p`, so the `p` range is
/// doubled and the result halved.
pub fn airy_n2_double(xi: f64, r: f64, cfg: &QuadratureConfig) -> Result<Evaluation> {
    check_finite(xi, r)?;
    let c = cfg.contour_shift;
    let local = shifted_config(cfg);
    let i = Complex64::i();
    let e = damped_lattice_integral(
        |t| {
            let eta = Complex64::new(t[0], c);
            let p = t[1];
            let phase = eta * eta * eta + 3.0 * eta * (p * p - xi);
            (i * phase * (2.0 / 3.0)).exp() * (sinc(p * r) * p * p)
        },
        2,
        &local,
    )?;
    Ok(e.scaled(Complex64::new(0.5, 0.0)))
}

/// `∫_0^∞ ai(s·(ξ − p²)) sinc(pr) p² dp` with `ai(x) = 2π·Ai(−x)` and the
/// Airy argument scale `s = 2^{2/3}` that the `η` integration produces.
pub fn airy_n2_single(xi: f64, r: f64, cfg: &QuadratureConfig) -> Result<Evaluation> {
    airy_n2_single_with_scale(xi, r, CBRT_FOUR, cfg)
}

/// [`airy_n2_single`] with an arbitrary argument scale `s > 0`.
pub fn airy_n2_single_with_scale(xi: f64, r: f64, scale: f64, cfg: &QuadratureConfig) -> Result<Evaluation> {
    check_finite(xi, r)?;
    if !(scale > 0.0) {
        return Err(Error::Domain(format!("scale must be positive, got {scale}")));
    }
    if scale * xi > MAX_ARGUMENT {
        return Err(Error::Domain(format!("scale·xi = {} exceeds {MAX_ARGUMENT}", scale * xi)));
    }
    // beyond p_max the Airy factor is below 2π·Ai(20) ≈ 1e−26
    let p_max = (xi.max(0.0) + 20.0 / scale).sqrt();
    let integrand = |p: f64| Complex64::new(ai_integral_or_zero(scale * (xi - p * p)) * sinc(p * r) * p * p, 0.0);
    let panels = (p_max / cfg.panel_width).ceil().max(1.0) as usize;
    let h = p_max / panels as f64;
    let fine = GaussLegendre::new(cfg.nodes_per_dim);
    let coarse = GaussLegendre::new(cfg.nodes_per_dim - 4);
    let (mut a, mut b) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for k in 0..panels {
        let (lo, hi) = (k as f64 * h, (k + 1) as f64 * h);
        a += fine.integrate(lo, hi, integrand);
        b += coarse.integrate(lo, hi, integrand);
    }
    let nodes = panels * (fine.len() + coarse.len());
    let eval = Evaluation::new(a, (a - b).norm(), nodes, MethodTag::Direct);
    check_converged(eval, cfg)
}

/// `∫ exp{(2i/3)(τ³ − 3ξτ)} τ^{−3/2} exp(−i r²/(8τ)) dτ` along the rotated
/// rays joined by an arc of radius [`DEFAULT_GREEN_RADIUS`] above `τ = 0`.
pub fn airy_n2_green(xi: f64, r: f64, cfg: &QuadratureConfig) -> Result<Evaluation> {
    airy_n2_green_with_radius(xi, r, DEFAULT_GREEN_RADIUS, cfg)
}

/// The Green-function form with arc radius `rho`. The `p` integral that
/// produces the kernel converges only for `Im τ > 0`, so the path passes
/// above the origin and `τ^{−3/2}` is the principal branch there.
pub fn airy_n2_green_with_radius(xi: f64, r: f64, rho: f64, cfg: &QuadratureConfig) -> Result<Evaluation> {
    check_finite(xi, r)?;
    if r == 0.0 {
        return Err(Error::Domain("the Green-function form needs r > 0".into()));
    }
    if !(rho > 0.0) || rho >= cfg.ray_radius {
        return Err(Error::Domain(format!("arc radius must lie in (0, {}), got {rho}", cfg.ray_radius)));
    }
    let angle = if cfg.rotation_angle > 0.0 { cfg.rotation_angle } else { FALLBACK_ANGLE };
    let contour = Contour::rays_with_upper_arc(angle, rho, cfg.ray_radius);
    let i = Complex64::i();
    let r2 = r * r;
    let integrand = |tau: Complex64| {
        let phase = (tau * tau * tau - 3.0 * xi * tau) * (2.0 / 3.0) - r2 / (8.0 * tau);
        (i * phase).exp() * tau.powf(-1.5)
    };
    let fine = GaussLegendre::new(cfg.nodes_per_dim);
    let coarse = GaussLegendre::new(cfg.nodes_per_dim - 4);
    let (value, n1) = contour.integrate(&fine, cfg.panel_width, integrand);
    let (check, n2) = contour.integrate(&coarse, cfg.panel_width, integrand);
    let ends = [
        Complex64::from_polar(cfg.ray_radius, angle),
        Complex64::from_polar(cfg.ray_radius, std::f64::consts::PI - angle),
    ];
    let tail: f64 = ends.iter().map(|z| integrand(*z).norm()).sum();
    let eval = Evaluation::new(value, (value - check).norm() + tail, n1 + n2, MethodTag::RotatedContour);
    check_converged(eval, cfg)
}
