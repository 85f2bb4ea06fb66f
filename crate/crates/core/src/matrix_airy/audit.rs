use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::airy::ai_std_derivatives;
use crate::error::{Error, Result};
use crate::quad::{cubic_phase_integral, QuadratureConfig};

/// `(3/2)^{1/3}`.
pub const CBRT_THREE_HALVES: f64 = 1.144_714_242_553_331_8;
/// `2^{2/3}`.
pub const CBRT_FOUR: f64 = 1.587_401_051_968_199_4;
const AUDIT_TOL: f64 = 1e-3;
const SAMPLES: usize = 61;
const U_RANGE: f64 = 3.0;

/// Result of fitting `g(u) = ∫ exp{(2i/3)(η³ + 3uη)} dη ≈ a·Ai(b·u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleAudit {
    pub fitted_scale: f64,
    /// Two-standard-deviation interval for the scale.
    pub scale_ci: [f64; 2],
    pub fitted_amplitude: f64,
    pub amplitude_ci: [f64; 2],
    /// `2π·2^{−1/3}`, what a change of variables predicts for `a`.
    pub expected_amplitude: f64,
    pub cbrt_three_halves: f64,
    pub cbrt_four: f64,
    pub agrees_with_cbrt_three_halves: bool,
    pub agrees_with_cbrt_four: bool,
    /// RMS residual of the fit relative to the RMS of the data.
    pub fit_residual: f64,
    /// Largest imaginary part of the sampled `g` (should vanish).
    pub max_imaginary: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
}

fn model(a: f64, b: f64, u: f64) -> (f64, f64, f64) {
    let d = ai_std_derivatives(b * u, 1).expect("argument within range");
    (a * d[0], d[0], a * u * d[1])
}

/// `(a, RSS)` for fixed `b`, with `a` from linear least squares.
fn best_amplitude(b: f64, us: &[f64], gs: &[f64]) -> (f64, f64) {
    let ai: Vec<f64> = us.iter().map(|u| model(1.0, b, *u).1).collect();
    let a = ai.iter().zip(gs).map(|(x, g)| x * g).sum::<f64>() / ai.iter().map(|x| x * x).sum::<f64>();
    let rss = ai.iter().zip(gs).map(|(x, g)| (a * x - g).powi(2)).sum();
    (a, rss)
}

/// Measures the Airy-argument scale of the single-integral form by
/// sampling the `η` integral on `u ∈ [−3, 3]` and fitting `a·Ai(b·u)`:
/// a coarse scan over `b`, then Gauss–Newton.
pub fn audit_single_scale(cfg: &QuadratureConfig) -> Result<ScaleAudit> {
    let us: Vec<f64> = (0..SAMPLES)
        .map(|k| -U_RANGE + 2.0 * U_RANGE * k as f64 / (SAMPLES - 1) as f64)
        .collect();
    let mut gs = Vec::with_capacity(SAMPLES);
    let mut max_imaginary = 0.0f64;
    let mut max_quad_err = 0.0f64;
    for &u in &us {
        let e = cubic_phase_integral(2.0, 2.0 * u, |_| Complex64::new(1.0, 0.0), cfg)?;
        gs.push(e.value.re);
        max_imaginary = max_imaginary.max(e.value.im.abs());
        max_quad_err = max_quad_err.max(e.error_estimate);
    }

    let (mut b, _) = (0..=280)
        .map(|k| 0.8 + 0.005 * k as f64)
        .map(|b| (b, best_amplitude(b, &us, &gs).1))
        .fold((f64::NAN, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let mut a = best_amplitude(b, &us, &gs).0;

    let mut normal = [[0.0; 2]; 2];
    let mut rss = 0.0;
    for _ in 0..50 {
        normal = [[0.0; 2]; 2];
        let mut rhs = [0.0; 2];
        rss = 0.0;
        for (&u, &g) in us.iter().zip(&gs) {
            let (f, da, db) = model(a, b, u);
            let r = g - f;
            rss += r * r;
            normal[0][0] += da * da;
            normal[0][1] += da * db;
            normal[1][1] += db * db;
            rhs[0] += da * r;
            rhs[1] += db * r;
        }
        normal[1][0] = normal[0][1];
        let det = normal[0][0] * normal[1][1] - normal[0][1] * normal[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NonConvergence("scale fit has a singular normal matrix".into()));
        }
        let step_a = (normal[1][1] * rhs[0] - normal[0][1] * rhs[1]) / det;
        let step_b = (normal[0][0] * rhs[1] - normal[1][0] * rhs[0]) / det;
        a += step_a;
        b += step_b;
        if step_a.abs() < 1e-15 * a.abs() && step_b.abs() < 1e-15 * b.abs() {
            break;
        }
    }

    let n = SAMPLES as f64;
    let sigma2 = (rss / (n - 2.0)).max(max_quad_err * max_quad_err);
    let det = normal[0][0] * normal[1][1] - normal[0][1] * normal[1][0];
    let var_a = sigma2 * normal[1][1] / det;
    let var_b = sigma2 * normal[0][0] / det;
    let (wa, wb) = (2.0 * var_a.sqrt(), 2.0 * var_b.sqrt());
    let data_rms = (gs.iter().map(|g| g * g).sum::<f64>() / n).sqrt();
    let fit_residual = (rss / n).sqrt() / data_rms;
    let band = wb.max(AUDIT_TOL);

    Ok(ScaleAudit {
        fitted_scale: b,
        scale_ci: [b - wb, b + wb],
        fitted_amplitude: a,
        amplitude_ci: [a - wa, a + wa],
        expected_amplitude: 2.0 * std::f64::consts::PI * 2f64.powf(-1.0 / 3.0),
        cbrt_three_halves: CBRT_THREE_HALVES,
        cbrt_four: CBRT_FOUR,
        agrees_with_cbrt_three_halves: (b - CBRT_THREE_HALVES).abs() <= band,
        agrees_with_cbrt_four: (b - CBRT_FOUR).abs() <= band,
        fit_residual,
        max_imaginary,
        samples: SAMPLES,
        tolerance: AUDIT_TOL,
        passed: fit_residual <= AUDIT_TOL && wb <= AUDIT_TOL,
    })
}
