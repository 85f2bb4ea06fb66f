use std::f64::consts::PI;

use num_complex::Complex64;

use super::contour::Contour;
use super::extrapolate::extrapolate_to_zero;
use super::gauss::GaussLegendre;
use super::{Evaluation, MethodTag, QuadratureConfig};
use crate::error::{Error, Result};

/// Per-rung values of a damped evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct DampedDiagnostics {
    pub epsilons: Vec<f64>,
    pub values: Vec<Complex64>,
    /// |I(ε_k) − I(0)| along the ladder.
    pub residuals: Vec<f64>,
}

fn cubic_phase(a: f64, b: f64, t: Complex64) -> Complex64 {
    (Complex64::i() * (a * t * t * t / 3.0 + b * t)).exp()
}

/// `∫_ℝ exp(i(a t³/3 + b t))·w(t) dt` using the regularisation selected by
/// `cfg`: rotated rays when `rotation_angle > 0`, damped extrapolation
/// otherwise.
pub fn cubic_phase_integral<W>(a: f64, b: f64, weight: W, cfg: &QuadratureConfig) -> Result<Evaluation>
where
    W: Fn(Complex64) -> Complex64,
{
    if cfg.rotation_angle > 0.0 {
        cubic_phase_rotated(a, b, weight, cfg)
    } else {
        cubic_phase_damped(a, b, weight, cfg).map(|(e, _)| e)
    }
}

/// Rotated-contour evaluation. The weight must be analytic in the sector
/// swept between the real axis and the rays (upper half-plane for `a > 0`,
/// lower for `a < 0`).
pub fn cubic_phase_rotated<W>(a: f64, b: f64, weight: W, cfg: &QuadratureConfig) -> Result<Evaluation>
where
    W: Fn(Complex64) -> Complex64,
{
    if a == 0.0 || !a.is_finite() {
        return Err(Error::Domain(format!("cubic coefficient must be non-zero, got {a}")));
    }
    if !(cfg.rotation_angle > 0.0) {
        return Err(Error::Config("rotated evaluation needs rotation_angle > 0".into()));
    }
    let angle = cfg.rotation_angle.copysign(a);
    // the decay along the ray scales with |a|^{1/3}
    let radius = cfg.ray_radius / a.abs().cbrt().min(1.0);
    let contour = Contour::rotated_rays(angle, radius);
    let integrand = |z: Complex64| cubic_phase(a, b, z) * weight(z);

    let fine = GaussLegendre::new(cfg.nodes_per_dim);
    let coarse = GaussLegendre::new(cfg.nodes_per_dim - 4);
    let (value, n_fine) = contour.integrate(&fine, cfg.panel_width, integrand);
    let (check, n_coarse) = contour.integrate(&coarse, cfg.panel_width, integrand);

    let ends = [
        Complex64::from_polar(radius, angle),
        -Complex64::from_polar(radius, -angle),
    ];
    let tail: f64 = ends.iter().map(|z| integrand(*z).norm()).sum();
    let error_estimate = (value - check).norm() + tail;

    let eval = Evaluation::new(value, error_estimate, n_fine + n_coarse, MethodTag::RotatedContour);
    check_converged(eval, cfg)
}

/// Damped evaluation on the real line, extrapolated over `cfg.epsilon_ladder`.
pub fn cubic_phase_damped<W>(
    a: f64,
    b: f64,
    weight: W,
    cfg: &QuadratureConfig,
) -> Result<(Evaluation, DampedDiagnostics)>
where
    W: Fn(Complex64) -> Complex64,
{
    if a == 0.0 || !a.is_finite() {
        return Err(Error::Domain(format!("cubic coefficient must be non-zero, got {a}")));
    }
    let eps_min = *cfg
        .epsilon_ladder
        .last()
        .ok_or_else(|| Error::Config("empty epsilon ladder".into()))?;
    // exp(−ε R²) ≤ e^{−36} on every rung
    let radius = cfg.truncation_radius.max((36.0 / eps_min).sqrt());

    // panels shrink with the local frequency |a t² + b| so that each holds
    // about one oscillation
    let mut edges = vec![0.0];
    let mut t = 0.0;
    while t < radius {
        let far = (t + cfg.panel_width).min(radius);
        let freq = a.abs() * far * far + b.abs() + 1.0;
        let h = cfg.panel_width.min(2.0 * PI / freq);
        t = (t + h).min(radius);
        edges.push(t);
    }

    let rule = GaussLegendre::new(cfg.nodes_per_dim);
    let mut sums = vec![Complex64::new(0.0, 0.0); cfg.epsilon_ladder.len()];
    let mut nodes = 0;
    for w in edges.windows(2) {
        let mut panel = vec![Complex64::new(0.0, 0.0); sums.len()];
        for (x, wt) in rule.mapped(w[0], w[1]) {
            for s in [x, -x] {
                let z = Complex64::new(s, 0.0);
                let f = cubic_phase(a, b, z) * weight(z) * wt;
                for (acc, eps) in panel.iter_mut().zip(&cfg.epsilon_ladder) {
                    *acc += f * (-eps * s * s).exp();
                }
                nodes += 1;
            }
        }
        for (acc, p) in sums.iter_mut().zip(panel) {
            *acc += p;
        }
    }

    let ex = extrapolate_to_zero(&cfg.epsilon_ladder, &sums);
    let diag = DampedDiagnostics {
        epsilons: cfg.epsilon_ladder.clone(),
        values: sums,
        residuals: ex.residuals.clone(),
    };
    let eval = Evaluation::new(ex.value, ex.error_estimate, nodes, MethodTag::DampedExtrapolated);
    Ok((check_converged(eval, cfg)?, diag))
}

pub(crate) fn check_converged(eval: Evaluation, cfg: &QuadratureConfig) -> Result<Evaluation> {
    if !eval.is_finite() {
        return Err(Error::NonConvergence(format!(
            "{:?} produced a non-finite value",
            eval.method_tag
        )));
    }
    let tol = cfg.tolerance_for(eval.value.norm());
    if eval.error_estimate > tol {
        return Err(Error::NonConvergence(format!(
            "{:?}: error estimate {:.3e} exceeds tolerance {:.3e}",
            eval.method_tag, eval.error_estimate, tol
        )));
    }
    Ok(eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn one(_: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    // 2π·Ai(0) with Ai(0) = 3^{−2/3}/Γ(2/3), evaluated by the Maclaurin
    // series oracle (leading coefficient) in the airy tests.
    const TWO_PI_AI0: f64 = 2.230_707_051_824_495_7;

    #[test]
    fn rotated_matches_airy_at_zero() {
        let cfg = QuadratureConfig::default();
        let e = cubic_phase_rotated(1.0, 0.0, one, &cfg).unwrap();
        assert_relative_eq!(e.value.re, TWO_PI_AI0, epsilon = 1e-12);
        assert!(e.value.im.abs() < 1e-12);
        assert!(e.error_estimate < 1e-10);
    }

    #[test]
    fn damped_matches_airy_at_zero() {
        let cfg = QuadratureConfig::default();
        let (e, diag) = cubic_phase_damped(1.0, 0.0, one, &cfg).unwrap();
        assert!((e.value.re - TWO_PI_AI0).abs() <= e.error_estimate.max(1e-6) * 3.0);
        assert!(diag.residuals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn zero_cubic_coefficient_is_rejected() {
        let cfg = QuadratureConfig::default();
        assert!(matches!(cubic_phase_rotated(0.0, 1.0, one, &cfg), Err(Error::Domain(_))));
        assert!(matches!(cubic_phase_damped(0.0, 1.0, one, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn negative_cubic_coefficient_is_the_conjugate() {
        let cfg = QuadratureConfig::default();
        let p = cubic_phase_rotated(1.0, 0.7, one, &cfg).unwrap().value;
        let m = cubic_phase_rotated(-1.0, -0.7, one, &cfg).unwrap().value;
        assert_relative_eq!(p.re, m.re, epsilon = 1e-12);
        assert_relative_eq!(p.im, -m.im, epsilon = 1e-12);
    }

    #[test]
    fn dispatch_follows_rotation_angle() {
        let mut cfg = QuadratureConfig::default();
        assert_eq!(cubic_phase_integral(1.0, 0.0, one, &cfg).unwrap().method_tag, MethodTag::RotatedContour);
        cfg.rotation_angle = 0.0;
        assert_eq!(
            cubic_phase_integral(1.0, 0.0, one, &cfg).unwrap().method_tag,
            MethodTag::DampedExtrapolated
        );
    }
}
