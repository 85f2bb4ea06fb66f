use num_complex::Complex64;

use crate::airy::{ai_integral_or_zero, ai_integral_prime_or_zero, airy, MAX_ARGUMENT};
use crate::error::{Error, Result};
use crate::quad::{lattice_integral, Evaluation, QuadratureConfig};
use crate::spectra::{phi_times_measure, MatrixArgument};

use super::Representation;

/// Orthonormal basis of `{p : Σ p_j = 0}`; row `k` is
/// `(1, …, 1, −k, 0, …)/√(k(k+1))` with `k` leading ones.
fn helmert_basis(n: usize) -> Vec<Vec<f64>> {
    (1..n)
        .map(|k| {
            let norm = ((k * (k + 1)) as f64).sqrt();
            (0..n)
                .map(|j| match j.cmp(&k) {
                    std::cmp::Ordering::Less => 1.0 / norm,
                    std::cmp::Ordering::Equal => -(k as f64) / norm,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Factor {
    Value,
    XiDerivative,
}

fn separated(x: &MatrixArgument, cfg: &QuadratureConfig, factor: Factor) -> Result<Evaluation> {
    let n = x.dim();
    Representation::SeparatedEq5.require(n)?;
    let nf = n as f64;
    let cbrt_n = nf.cbrt();
    let top = nf * x.xi / cbrt_n;
    if top > MAX_ARGUMENT {
        return Err(Error::Domain(format!("Airy argument N^{{2/3}}ξ = {top} exceeds {MAX_ARGUMENT}")));
    }
    if n == 1 {
        let order = match factor {
            Factor::Value => 0,
            Factor::XiDerivative => 1,
        };
        return Ok(Evaluation::exact(Complex64::new(airy(x.xi, order)?.ai_integral, 0.0)));
    }

    let neg_q: Vec<f64> = x.traceless.values().iter().map(|q| -q).collect();
    let basis = helmert_basis(n);
    // beyond this radius the Airy factor is below 2π·Ai(16)
    let radius = ((nf * x.xi).max(0.0) + 16.0 * cbrt_n).sqrt();
    let local = cfg.with_truncation(radius);
    let integrand = |u: &[f64]| {
        let mut p = vec![0.0; n];
        for (uk, row) in u.iter().zip(&basis) {
            for (pj, bj) in p.iter_mut().zip(row) {
                *pj += uk * bj;
            }
        }
        let s2: f64 = p.iter().map(|v| v * v).sum();
        let s3: f64 = p.iter().map(|v| v * v * v).sum();
        let arg = (nf * x.xi - s2) / cbrt_n;
        let airy_factor = match factor {
            Factor::Value => ai_integral_or_zero(arg) / cbrt_n,
            Factor::XiDerivative => ai_integral_prime_or_zero(arg) * cbrt_n,
        };
        if airy_factor == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let kernel = phi_times_measure(&p, &neg_q).unwrap_or(Complex64::new(f64::NAN, 0.0));
        Complex64::from_polar(airy_factor, s3 / 3.0) * kernel
    };
    lattice_integral(integrand, n - 1, &local)
}

/// The separated representation
///
/// ```text
/// N^{−1/3} ∫ exp{(i/3) tr P³} ai(N^{−1/3}(Nξ − tr P²)) Φ(−Q̃|P) V(P)² dP
/// ```
///
/// over the traceless hyperplane `Σ p_j = 0`, in orthonormal coordinates.
/// `ai(x) = 2π·Ai(−x)` decays superexponentially once `tr P² > Nξ`, so
/// the integral converges absolutely and is evaluated without damping.
///
/// `Φ` is taken at `−Q̃`: the angular integral of `exp(−i tr X̃Ỹ)` is
/// `Φ(−Q̃|P)` up to a constant. For `N ≤ 2` the sign makes no difference.
pub fn airy_separated(x: &MatrixArgument, cfg: &QuadratureConfig) -> Result<Evaluation> {
    separated(x, cfg, Factor::Value)
}

/// `∂/∂ξ` of [`airy_separated`] with the derivative taken under the
/// integral, where it only reaches the scalar Airy factor.
pub fn airy_separated_dxi(x: &MatrixArgument, cfg: &QuadratureConfig) -> Result<Evaluation> {
    separated(x, cfg, Factor::XiDerivative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::split;

    #[test]
    fn helmert_rows_are_orthonormal_and_traceless() {
        let b = helmert_basis(4);
        for (i, r) in b.iter().enumerate() {
            assert!(r.iter().sum::<f64>().abs() < 1e-15);
            for (j, s) in b.iter().enumerate() {
                let dot: f64 = r.iter().zip(s).map(|(a, b)| a * b).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn one_dimensional_case() {
        let cfg = QuadratureConfig::default();
        let e = airy_separated(&split(&[0.4]).unwrap(), &cfg).unwrap();
        assert_eq!(e.value.re, airy(0.4, 0).unwrap().ai_integral);
        assert_eq!(e.error_estimate, 0.0);
    }

    #[test]
    fn n2_is_proportional_to_single_integral() {
        let cfg = QuadratureConfig::default();
        let mut ratios = Vec::new();
        for (xi, r) in [(0.0, 1.0), (-1.0, 0.5), (1.0, 2.0), (0.5, 0.0)] {
            let s = airy_separated(&MatrixArgument::n2(xi, r).unwrap(), &cfg).unwrap();
            let one = super::super::airy_n2_single(xi, r, &cfg).unwrap();
            ratios.push(s.value / one.value);
        }
        for w in ratios.windows(2) {
            assert!((w[0] - w[1]).norm() < 1e-6 * w[0].norm(), "{ratios:?}");
        }
    }

    #[test]
    fn scalar_matrix_n3_is_finite() {
        let cfg = QuadratureConfig::default();
        let e = airy_separated(&split(&[0.2, 0.2, 0.2]).unwrap(), &cfg).unwrap();
        assert!(e.is_finite() && e.value.norm() > 0.0);
    }
}
