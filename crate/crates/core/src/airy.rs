//! Classical Airy function of the first kind.
//!
//! Two normalisations are carried side by side:
//!
//! * `ai_std` – the usual `Ai(x)`, solution of `y'' = x y` decaying as
//!   `x → +∞`;
//! * `ai_integral` – the Fourier integral `∫ exp(i(y³/3 − xy)) dy = 2π·Ai(−x)`,
//!   solution of `y'' + x y = 0` that stays bounded on the real axis. This is
//!   the `N = 1` matrix Airy function.
//!
//! `Ai` and `Ai'` come from the Maclaurin series (summed in double-double
//! arithmetic) for `|x| ≤ 7` and from the optimally truncated asymptotic
//! expansions beyond. Higher derivatives follow from the differential
//! equation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::quad::{cubic_phase_integral, Evaluation, QuadratureConfig};

pub const MAX_ARGUMENT: f64 = 30.0;
pub const MAX_ORDER: u32 = 6;
/// Series branch for `|x| ≤ SERIES_LIMIT`, asymptotic branch beyond.
pub const SERIES_LIMIT: f64 = 7.0;
pub const MAX_QUADRATURE_ARGUMENT: f64 = 8.0;

/// First zero of `Ai`, located by bisection on the series branch.
pub const FIRST_ZERO: f64 = -2.338_107_410_459_767;

/// 3^{−2/3}/Γ(2/3) as a double-double (hi, lo).
const AI0: (f64, f64) = (0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
/// 3^{−1/3}/Γ(1/3) as a double-double (hi, lo).
const NEG_AIP0: (f64, f64) = (0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryValue {
    pub x: f64,
    pub derivative_order: u32,
    /// `Ai^{(k)}(x)`.
    pub ai_std: f64,
    /// `d^k/dx^k [2π·Ai(−x)] = 2π·(−1)^k·Ai^{(k)}(−x)`.
    pub ai_integral: f64,
}

fn check_argument(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::Domain(format!("|x| must be ≤ {MAX_ARGUMENT}, got {x}")));
    }
    Ok(())
}

fn check_order(order: u32) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::Domain(format!("derivative order must be ≤ {MAX_ORDER}, got {order}")));
    }
    Ok(())
}

/// `Ai(x)` or one of its derivatives in both normalisations.
pub fn airy(x: f64, order: u32) -> Result<AiryValue> {
    check_argument(x)?;
    check_order(order)?;
    let std = ai_std_derivatives(x, order)?[order as usize];
    let refl = ai_std_derivatives(-x, order)?[order as usize];
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(AiryValue {
        x,
        derivative_order: order,
        ai_std: std,
        ai_integral: 2.0 * PI * sign * refl,
    })
}

/// `[Ai(x), Ai'(x), …, Ai^{(order)}(x)]`.
pub fn ai_std_derivatives(x: f64, order: u32) -> Result<Vec<f64>> {
    check_argument(x)?;
    check_order(order)?;
    let (a0, a1) = ai_and_derivative(x);
    let mut out = vec![a0, a1];
    // Ai^{(k+2)} = x·Ai^{(k)} + k·Ai^{(k−1)}
    for k in 0..order.saturating_sub(1) as usize {
        let prev = if k == 0 { 0.0 } else { k as f64 * out[k - 1] };
        out.push(x * out[k] + prev);
    }
    out.truncate(order as usize + 1);
    Ok(out)
}

/// `[f(x), f'(x), …, f^{(order)}(x)]` for `f(x) = 2π·Ai(−x)`.
pub fn ai_integral_derivatives(x: f64, order: u32) -> Result<Vec<f64>> {
    let std = ai_std_derivatives(-x, order)?;
    Ok(std
        .into_iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 0 { 2.0 * PI * v } else { -2.0 * PI * v })
        .collect())
}

/// `2π·Ai(−x)` for integrands sampled far into the decaying region, where
/// the value underflows anything the quadrature can resolve.
pub(crate) fn ai_integral_or_zero(x: f64) -> f64 {
    if x < -MAX_ARGUMENT {
        0.0
    } else if x > MAX_ARGUMENT {
        f64::NAN
    } else {
        2.0 * PI * ai_and_derivative(-x).0
    }
}

/// `d/dx [2π·Ai(−x)]` with the same conventions as [`ai_integral_or_zero`].
pub(crate) fn ai_integral_prime_or_zero(x: f64) -> f64 {
    if x < -MAX_ARGUMENT {
        0.0
    } else if x > MAX_ARGUMENT {
        f64::NAN
    } else {
        -2.0 * PI * ai_and_derivative(-x).1
    }
}

fn ai_and_derivative(x: f64) -> (f64, f64) {
    if x.abs() <= SERIES_LIMIT {
        airy_series(x)
    } else {
        airy_asymptotic(x)
    }
}

/// Maclaurin series `Ai = c₁ f − c₂ g`, summed in double-double so that the
/// cancellation between `f` and `g` for `x > 0` costs no accuracy up to
/// `|x| ≈ 10`.
pub fn airy_series(x: f64) -> (f64, f64) {
    let c1 = TwoFloat::new_add(AI0.0, AI0.1);
    let c2 = TwoFloat::new_add(NEG_AIP0.0, NEG_AIP0.1);
    let xt = TwoFloat::from(x);
    let x3 = xt * xt * xt;

    let mut f = TwoFloat::from(1.0);
    let mut g = xt;
    let mut df = TwoFloat::from(0.0);
    let mut dg = TwoFloat::from(1.0);
    let mut f_term = TwoFloat::from(1.0);
    let mut g_term = xt;
    let mut df_term = xt * xt / 2.0;
    let mut dg_term = TwoFloat::from(1.0);
    df += df_term;

    for k in 1..200u32 {
        let k3 = 3.0 * f64::from(k);
        f_term = f_term * x3 / ((k3 - 1.0) * k3);
        g_term = g_term * x3 / (k3 * (k3 + 1.0));
        dg_term = dg_term * x3 / (k3 * (k3 - 2.0));
        if k >= 2 {
            df_term = df_term * x3 / ((k3 - 3.0) * (k3 - 1.0));
            df += df_term;
        }
        f += f_term;
        g += g_term;
        dg += dg_term;
        let small = |t: TwoFloat, s: TwoFloat| t.hi().abs() <= 1e-33 * s.hi().abs().max(1e-300);
        if small(f_term, f) && small(g_term, g) && small(df_term, df) && small(dg_term, dg) {
            break;
        }
    }
    let ai = c1 * f - c2 * g;
    let aip = c1 * df - c2 * dg;
    (ai.hi() + ai.lo(), aip.hi() + aip.lo())
}

/// Optimally truncated asymptotic expansions for large `|x|`.
pub fn airy_asymptotic(x: f64) -> (f64, f64) {
    let y = x.abs();
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let quarter = y.powf(0.25);

    // terms t_k = u_k ζ^{−k} and s_k = v_k ζ^{−k}, kept while decreasing
    let mut u_terms = vec![1.0];
    let mut v_terms = vec![1.0];
    let mut u = 1.0;
    let mut zpow = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zpow /= zeta;
        let (tu, tv) = (u * zpow, v * zpow);
        let last = *u_terms.last().unwrap_or(&1.0);
        if tu.abs() >= f64::abs(last) || tu.abs() < 1e-18 {
            if tu.abs() < 1e-18 {
                u_terms.push(tu);
                v_terms.push(tv);
            }
            break;
        }
        u_terms.push(tu);
        v_terms.push(tv);
    }

    if x > 0.0 {
        let alt = |terms: &[f64]| -> f64 {
            terms
                .iter()
                .enumerate()
                .rev()
                .map(|(k, t)| if k % 2 == 0 { *t } else { -*t })
                .sum()
        };
        let e = (-zeta).exp() / (2.0 * PI.sqrt());
        (e / quarter * alt(&u_terms), -e * quarter * alt(&v_terms))
    } else {
        // Σ_k (−1)^k t_{2k+parity}
        let split = |terms: &[f64], parity: usize| -> f64 {
            terms
                .iter()
                .enumerate()
                .filter(|(k, _)| k % 2 == parity)
                .rev()
                .map(|(k, t)| if (k / 2) % 2 == 0 { *t } else { -*t })
                .sum()
        };
        let theta = zeta - PI / 4.0;
        let (s, c) = theta.sin_cos();
        let ai = (c * split(&u_terms, 0) + s * split(&u_terms, 1)) / (PI.sqrt() * quarter);
        let aip = quarter / PI.sqrt() * (s * split(&v_terms, 0) - c * split(&v_terms, 1));
        (ai, aip)
    }
}

/// The one-dimensional Fourier integral `∫ exp(i(y³/3 − xy)) dy`, evaluated
/// by the cubic-phase quadrature engine. Equals `airy(x, 0).ai_integral`.
pub fn airy_via_quadrature(x: f64, cfg: &QuadratureConfig) -> Result<Evaluation> {
    if !x.is_finite() || x.abs() > MAX_QUADRATURE_ARGUMENT {
        return Err(Error::Domain(format!(
            "|x| must be ≤ {MAX_QUADRATURE_ARGUMENT} for quadrature, got {x}"
        )));
    }
    cubic_phase_integral(1.0, -x, |_| Complex64::new(1.0, 0.0), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// (x, Ai(x), Ai'(x)) from an arbitrary-precision reference.
    const REFERENCE: &[(f64, f64, f64)] = &[
        (-30.0, -0.08796818845684216, 1.228620602637485),
        (-20.0, -0.1764061270779847, 0.8928628567364713),
        (-12.0, -0.06655517505437313, 1.0231104533679707),
        (-9.0, -0.022133721547341403, -0.9756639809263316),
        (-7.5, 0.3217757163806479, 0.3188095066985546),
        (-6.5, -0.2380203019971158, -0.6749524925132022),
        (-5.0, 0.35076100902411433, 0.32719281855444315),
        (-3.0, -0.37881429367765806, 0.3145837692165988),
        (-1.0, 0.5355608832923521, -0.01016056711664521),
        (-0.5, 0.4757280916105396, -0.20408167033954738),
        (0.0, 0.3550280538878172, -0.2588194037928068),
        (0.5, 0.23169360648083348, -0.2249105326646839),
        (1.0, 0.13529241631288141, -0.1591474412967932),
        (2.0, 0.03492413042327438, -0.05309038443365363),
        (3.0, 0.006591139357460719, -0.011912976705951319),
        (4.5, 0.00033025032351430896, -0.0007178665675575089),
        (6.5, 2.7958823432049136e-06, -7.231931466601793e-06),
        (7.5, 1.9172560675134309e-07, -5.312713959720545e-07),
        (9.0, 2.47116843087249e-09, -7.480641389658946e-09),
        (12.0, 1.3931846888753607e-13, -4.854736554985309e-13),
        (20.0, 1.6916728686705404e-27, -7.586391625748354e-27),
        (30.0, 3.2082175915504954e-49, -1.759876581432726e-48),
    ];

    /// Relative error, measured against the oscillation envelope on the
    /// negative axis where `Ai` has zeros.
    fn scaled_err(x: f64, got: f64, want: f64, deriv: bool) -> f64 {
        let envelope = if x < 0.0 {
            let q = x.abs().powf(0.25);
            if deriv { q / PI.sqrt() } else { 1.0 / (q * PI.sqrt()) }
        } else {
            0.0
        };
        (got - want).abs() / want.abs().max(envelope)
    }

    #[test]
    fn matches_reference_table() {
        for &(x, ai, aip) in REFERENCE {
            let v = ai_std_derivatives(x, 1).unwrap();
            assert!(scaled_err(x, v[0], ai, false) < 1e-10, "Ai({x}) = {} vs {ai}", v[0]);
            assert!(scaled_err(x, v[1], aip, true) < 1e-10, "Ai'({x}) = {} vs {aip}", v[1]);
        }
    }

    #[test]
    fn value_at_origin() {
        // leading Maclaurin coefficient 3^{−2/3}/Γ(2/3)
        let v = airy(0.0, 0).unwrap();
        assert_relative_eq!(v.ai_std, 0.355_028_053_887_817_2, max_relative = 1e-15);
        assert_relative_eq!(v.ai_integral, 2.0 * PI * v.ai_std, max_relative = 1e-15);
    }

    #[test]
    fn first_zero_by_bisection() {
        let (mut lo, mut hi) = (-2.5, -2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if airy_series(mid).0 > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((0.5 * (lo + hi) - FIRST_ZERO).abs() < 1e-14);
        assert!(airy(FIRST_ZERO, 0).unwrap().ai_std.abs() < 1e-8);
    }

    #[test]
    fn ode_identity_for_second_derivative() {
        for x in [-6.0, -2.5, 0.0, 1.3, 4.0, 15.0] {
            let d = ai_std_derivatives(x, 2).unwrap();
            assert_relative_eq!(d[2], x * d[0], epsilon = 1e-300);
            let p = ai_integral_derivatives(x, 2).unwrap();
            assert!((p[2] + x * p[0]).abs() < 1e-14);
        }
    }

    #[test]
    fn higher_derivatives_follow_recurrence_and_finite_differences() {
        // Ai''' = Ai + x Ai', checked against a finite difference of Ai''
        let x = 0.7;
        let d = ai_std_derivatives(x, 6).unwrap();
        assert_relative_eq!(d[3], d[0] + x * d[1], max_relative = 1e-14);
        let h = 1e-4;
        for k in 1..6 {
            let plus = ai_std_derivatives(x + h, 6).unwrap()[k - 1];
            let minus = ai_std_derivatives(x - h, 6).unwrap()[k - 1];
            let fd = (plus - minus) / (2.0 * h);
            assert!((fd - d[k]).abs() < 1e-7 * d[k].abs().max(1.0), "order {k}");
        }
    }

    #[test]
    fn integral_normalisation_is_reflected_standard() {
        for x in [-3.0, -0.4, 0.0, 1.1, 5.0] {
            for k in 0..=MAX_ORDER {
                let v = airy(x, k).unwrap();
                let s = ai_std_derivatives(-x, k).unwrap()[k as usize];
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(v.ai_integral, 2.0 * PI * sign * s);
            }
        }
    }

    #[test]
    fn positive_axis_is_positive_and_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=300 {
            let x = 0.1 * i as f64;
            let v = airy(x, 0).unwrap().ai_std;
            assert!(v > 0.0 && v < prev, "x = {x}");
            prev = v;
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(airy(30.5, 0), Err(Error::Domain(_))));
        assert!(matches!(airy(-31.0, 0), Err(Error::Domain(_))));
        assert!(matches!(airy(f64::NAN, 0), Err(Error::Domain(_))));
        assert!(matches!(airy(1.0, 7), Err(Error::Domain(_))));
        let cfg = QuadratureConfig::default();
        assert!(matches!(airy_via_quadrature(8.5, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn series_and_asymptotic_overlap() {
        // both branches are accurate to better than 1e−9 on 6 ≤ |x| ≤ 8
        for i in 0..=40 {
            let y = 6.0 + 0.05 * i as f64;
            for x in [y, -y] {
                let (s0, s1) = airy_series(x);
                let (a0, a1) = airy_asymptotic(x);
                assert!(scaled_err(x, a0, s0, false) < 1e-9, "Ai at {x}: {a0} vs {s0}");
                assert!(scaled_err(x, a1, s1, true) < 1e-9, "Ai' at {x}: {a1} vs {s1}");
            }
        }
    }

    #[test]
    fn asymptotic_branch_is_too_coarse_near_five() {
        // why the branch switch sits at |x| = 7: at x = 5 the optimally
        // truncated expansion is only good to ~1e−8
        let (s, _) = airy_series(5.0);
        let (a, _) = airy_asymptotic(5.0);
        let rel = (a - s).abs() / s;
        assert!(rel > 1e-9 && rel < 1e-7, "{rel}");
    }

    #[test]
    fn quadrature_matches_series() {
        let cfg = QuadratureConfig::default();
        for x in [-4.0, -2.0, 0.0, 1.0, 2.0, 2.5] {
            let q = airy_via_quadrature(x, &cfg).unwrap();
            let s = airy(x, 0).unwrap().ai_integral;
            assert!((q.value.re - s).abs() < q.error_estimate + 1e-6, "x = {x}");
            assert!(q.value.im.abs() < 1e-10);
        }
        // the integral form vanishes at the reflected first zero
        let q = airy_via_quadrature(-FIRST_ZERO, &cfg).unwrap();
        assert!(q.value.norm() < 2e-5);
    }
}
