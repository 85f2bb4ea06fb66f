use num_complex::Complex64;
use rayon::prelude::*;

use super::cubic::check_converged;
use super::extrapolate::extrapolate_to_zero;
use super::gauss::{panel_edges, GaussLegendre};
use super::{Evaluation, MethodTag, QuadratureConfig};
use crate::error::{Error, Result};

pub const MAX_LATTICE_DIM: usize = 4;

/// Tensor Gauss–Legendre nodes on `[−R, R]` with a panel edge at 0.
fn axis(rule: &GaussLegendre, radius: f64, panel_width: f64) -> (Vec<f64>, Vec<f64>) {
    let mut edges = panel_edges(-radius, 0.0, panel_width);
    edges.extend(panel_edges(0.0, radius, panel_width).into_iter().skip(1));
    let mut xs = Vec::with_capacity(edges.len() * rule.len());
    let mut ws = Vec::with_capacity(xs.capacity());
    for w in edges.windows(2) {
        for (x, wt) in rule.mapped(w[0], w[1]) {
            xs.push(x);
            ws.push(wt);
        }
    }
    (xs, ws)
}

fn pairwise_sum(mut parts: Vec<Complex64>) -> Complex64 {
    if parts.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|c| c.iter().sum::<Complex64>())
            .collect();
    }
    parts[0]
}

/// Sums `Σ w(t) f(t) exp(−ε_k |t|²)` for every `ε_k` in `eps` (use `[0.0]`
/// for an undamped sum). Slices along the first axis are summed
/// independently and combined pairwise in index order, so the result does
/// not depend on the thread schedule.
fn tensor_sums<F>(f: &F, d: usize, rule: &GaussLegendre, cfg: &QuadratureConfig, eps: &[f64]) -> (Vec<Complex64>, usize)
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let (xs, ws) = axis(rule, cfg.truncation_radius, cfg.panel_width);
    let m = xs.len();
    let slices: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|i0| {
            let mut acc = vec![Complex64::new(0.0, 0.0); eps.len()];
            let mut idx = vec![0usize; d];
            idx[0] = i0;
            let mut point = vec![0.0; d];
            loop {
                let mut w = 1.0;
                let mut r2 = 0.0;
                for (k, &i) in idx.iter().enumerate() {
                    point[k] = xs[i];
                    w *= ws[i];
                    r2 += xs[i] * xs[i];
                }
                let v = f(&point) * w;
                for (a, e) in acc.iter_mut().zip(eps) {
                    *a += if *e == 0.0 { v } else { v * (-e * r2).exp() };
                }
                // odometer over axes 1..d
                let mut k = d;
                loop {
                    if k == 1 {
                        return acc;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < m {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        })
        .collect();
    let sums = (0..eps.len())
        .map(|k| pairwise_sum(slices.iter().map(|s| s[k]).collect()))
        .collect();
    (sums, m.pow(d as u32))
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_LATTICE_DIM {
        return Err(Error::Domain(format!(
            "lattice dimension must be in 1..={MAX_LATTICE_DIM}, got {d}"
        )));
    }
    Ok(())
}

/// Tensor-grid quadrature of `f(t)·exp(−ε|t|²)` over `[−R, R]^d` for every
/// rung of the damping ladder, extrapolated polynomially to `ε = 0`.
pub fn damped_lattice_integral<F>(f: F, d: usize, cfg: &QuadratureConfig) -> Result<Evaluation>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    check_dim(d)?;
    cfg.validate()?;
    let rule = GaussLegendre::new(cfg.nodes_per_dim);
    let (sums, nodes) = tensor_sums(&f, d, &rule, cfg, &cfg.epsilon_ladder);
    let ex = extrapolate_to_zero(&cfg.epsilon_ladder, &sums);
    let eval = Evaluation::new(ex.value, ex.error_estimate, nodes, MethodTag::DampedExtrapolated);
    check_converged(eval, cfg)
}

/// Undamped tensor-grid quadrature over `[−R, R]^d`, for integrands that
/// already decay. The error estimate compares against a rule with two
/// fewer nodes per panel.
pub fn lattice_integral<F>(f: F, d: usize, cfg: &QuadratureConfig) -> Result<Evaluation>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    check_dim(d)?;
    cfg.validate()?;
    let fine = GaussLegendre::new(cfg.nodes_per_dim);
    let coarse = GaussLegendre::new(cfg.nodes_per_dim - 2);
    let (a, na) = tensor_sums(&f, d, &fine, cfg, &[0.0]);
    let (b, nb) = tensor_sums(&f, d, &coarse, cfg, &[0.0]);
    let eval = Evaluation::new(a[0], (a[0] - b[0]).norm(), na + nb, MethodTag::Direct);
    check_converged(eval, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_in_two_dimensions() {
        let mut cfg = QuadratureConfig { truncation_radius: 7.0, ..QuadratureConfig::default() };
        cfg.set("damping_epsilon", "0.02").unwrap();
        let f = |t: &[f64]| Complex64::new((-(t[0] * t[0] + t[1] * t[1])).exp(), 0.0);
        let e = damped_lattice_integral(f, 2, &cfg).unwrap();
        assert_relative_eq!(e.value.re, PI, epsilon = 1e-8);
        let e = lattice_integral(f, 2, &cfg).unwrap();
        assert_relative_eq!(e.value.re, PI, epsilon = 1e-10);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let cfg = QuadratureConfig { truncation_radius: 6.0, ..QuadratureConfig::default() };
        let f = |t: &[f64]| Complex64::new(t[1] * (-(t[0] * t[0] + t[1] * t[1])).exp(), t[0].sin());
        let e = damped_lattice_integral(f, 2, &cfg).unwrap();
        assert!(e.value.norm() < cfg.abs_tol);
    }

    #[test]
    fn dimension_limits() {
        let cfg = QuadratureConfig::default();
        let f = |_: &[f64]| Complex64::new(1.0, 0.0);
        assert!(matches!(damped_lattice_integral(f, 0, &cfg), Err(Error::Domain(_))));
        assert!(matches!(damped_lattice_integral(f, 5, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn four_dimensional_box() {
        let cfg = QuadratureConfig {
            truncation_radius: 5.0,
            panel_width: 1.0,
            nodes_per_dim: 8,
            ..QuadratureConfig::default()
        };
        let f = |t: &[f64]| Complex64::new((-t.iter().map(|x| x * x).sum::<f64>()).exp(), 0.0);
        let e = lattice_integral(f, 4, &cfg).unwrap();
        assert_relative_eq!(e.value.re, PI * PI, epsilon = 1e-8);
    }
}
