//! Reduction of conjugation-invariant Hermitian matrix integrals to
//! eigenvalue integrals, and a Monte-Carlo oracle in matrix coordinates.
//!
//! With `dY` the flat measure on `Y_ii`, `Re Y_ij`, `Im Y_ij` (`i < j`) and
//! `M = N(N−1)/2`,
//!
//! ```text
//! ∫ f(Y) e^{−i tr QY} dY = (iπ)^M / V(Q) · ∫_{ℝ^N} f(P) V(P) e^{−i tr QP} dP.
//! ```
//!
//! The single power of `V(P)` is what remains of the eigenvalue Jacobian
//! `V(P)²` once the angular integral `∝ Φ(P|Q)` supplies `1/(V(P)V(Q))`.
//! [`Convention::SquaredVandermonde`] keeps the variant with prefactor `(−2πi)^M`
//! and weight `V(P)²`, for comparison only: it is not invariant under
//! permutations of `Q` and does not match the matrix integral.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{
    damped_lattice_integral, extrapolate_to_zero, lattice_integral, Evaluation, MethodTag,
    QuadratureConfig, MAX_LATTICE_DIM,
};
use crate::spectra::{coincidence_threshold, min_gap, spread_clusters, vandermonde, Spectrum};

pub const MIN_SAMPLES: usize = 10_000;
const CHUNK: usize = 1 << 16;
const SPOT_CHECKS: usize = 5;
const SPOT_CHECK_TOL: f64 = 1e-10;
/// Perturbation sizes for confluent `Q`.
pub const CONFLUENT_LADDER: [f64; 3] = [0.2, 0.1, 0.05];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayHint {
    /// Rapid decay; plain quadrature and Monte Carlo both apply.
    Schwartz,
    /// Conditionally convergent; needs damping.
    Oscillatory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `(iπ)^M / V(Q)` with weight `V(P)`.
    Corrected,
    /// `(−2πi)^M / V(Q)` with weight `V(P)²`.
    SquaredVandermonde,
}

type EigenFn = dyn Fn(&[f64]) -> Complex64 + Send + Sync;

/// An invariant function `f(Y)` given through its eigenvalues.
#[derive(Clone)]
pub struct InvariantIntegrand {
    dim: usize,
    decay_hint: DecayHint,
    eigen_fn: Arc<EigenFn>,
}

impl std::fmt::Debug for InvariantIntegrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InvariantIntegrand")
            .field("dim", &self.dim)
            .field("decay_hint", &self.decay_hint)
            .finish_non_exhaustive()
    }
}

impl InvariantIntegrand {
    /// Registers `eigen_fn` for `N = dim`, after checking its symmetry
    /// under five random permutations of a random spectrum.
    pub fn new<F>(dim: usize, decay_hint: DecayHint, eigen_fn: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(Error::Domain("integrand dimension must be ≥ 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let point: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let base = eigen_fn(&point);
        for _ in 0..SPOT_CHECKS {
            let mut perm = point.clone();
            for i in (1..dim).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let v = eigen_fn(&perm);
            if (v - base).norm() > SPOT_CHECK_TOL * base.norm().max(f64::MIN_POSITIVE) {
                return Err(Error::Domain(format!(
                    "integrand is not symmetric: f({point:?}) = {base} but f({perm:?}) = {v}"
                )));
            }
        }
        Ok(Self { dim, decay_hint, eigen_fn: Arc::new(eigen_fn) })
    }

    /// `exp(−tr Y²)`.
    pub fn gaussian(dim: usize) -> Self {
        Self::new(dim, DecayHint::Schwartz, |p| {
            Complex64::new((-p.iter().map(|x| x * x).sum::<f64>()).exp(), 0.0)
        })
        .expect("gaussian is symmetric")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn decay_hint(&self) -> DecayHint {
        self.decay_hint
    }

    pub fn eval(&self, p: &[f64]) -> Complex64 {
        (self.eigen_fn)(p)
    }
}

fn check_dim(f: &InvariantIntegrand, n: usize) -> Result<()> {
    if f.dim != n {
        return Err(Error::DimensionMismatch { left: f.dim, right: n });
    }
    Ok(())
}

fn prefactor(n: usize, convention: Convention) -> Complex64 {
    let m = (n * (n - 1) / 2) as u32;
    match convention {
        Convention::Corrected => Complex64::new(0.0, std::f64::consts::PI).powu(m),
        Convention::SquaredVandermonde => Complex64::new(0.0, -2.0 * std::f64::consts::PI).powu(m),
    }
}

/// Right-hand side of the reduction for `Q` in the order given.
pub fn reduced_integral_raw(
    f: &InvariantIntegrand,
    q: &[f64],
    cfg: &QuadratureConfig,
    convention: Convention,
) -> Result<Evaluation> {
    let n = q.len();
    check_dim(f, n)?;
    if n > MAX_LATTICE_DIM {
        return Err(Error::Domain(format!("N = {n} exceeds lattice limit {MAX_LATTICE_DIM}")));
    }
    let gap = min_gap(q);
    let threshold = coincidence_threshold(q);
    if gap < threshold {
        return Err(Error::ConfluentSpectrum { gap, threshold });
    }
    let power = match convention {
        Convention::Corrected => 1,
        Convention::SquaredVandermonde => 2,
    };
    let integrand = |p: &[f64]| {
        let phase: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
        f.eval(p) * vandermonde(p).powi(power) * Complex64::from_polar(1.0, -phase)
    };
    let eval = match f.decay_hint {
        DecayHint::Schwartz => lattice_integral(integrand, n, cfg)?,
        DecayHint::Oscillatory => damped_lattice_integral(integrand, n, cfg)?,
    };
    Ok(eval.scaled(prefactor(n, convention) / vandermonde(q)))
}

/// `∫ f(Y) e^{−i tr QY} dY` through the eigenvalue integral.
pub fn reduced_integral(f: &InvariantIntegrand, q: &Spectrum, cfg: &QuadratureConfig) -> Result<Evaluation> {
    reduced_integral_raw(f, q.values(), cfg, Convention::Corrected)
}

/// [`reduced_integral`] for `Q` with coincident entries: each cluster is
/// spread symmetrically by `δ` for `δ` in [`CONFLUENT_LADDER`], and the
/// results (even in `δ`) are extrapolated in `δ²` to zero.
pub fn reduced_integral_confluent(
    f: &InvariantIntegrand,
    q: &Spectrum,
    cfg: &QuadratureConfig,
) -> Result<Evaluation> {
    let mut eps = Vec::new();
    let mut vals = Vec::new();
    let mut nodes = 0;
    let mut worst = 0.0f64;
    for delta in CONFLUENT_LADDER {
        let perturbed = spread_clusters(q.values(), delta);
        let e = reduced_integral_raw(f, &perturbed, cfg, Convention::Corrected)?;
        eps.push(delta * delta);
        vals.push(e.value);
        nodes += e.nodes_used;
        worst = worst.max(e.error_estimate);
    }
    let ex = extrapolate_to_zero(&eps, &vals);
    Ok(Evaluation::new(ex.value, ex.error_estimate + worst, nodes, MethodTag::DampedExtrapolated))
}

fn hermitian_2x2_eigenvalues(a: f64, d: f64, re: f64, im: f64) -> [f64; 2] {
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + re * re + im * im).sqrt();
    [mid + rad, mid - rad]
}

/// Monte-Carlo estimate of `∫ f(Y) e^{−i tr QY} dY` for `N ≤ 2`.
///
/// Every real coordinate is drawn from a standard normal and the sample is
/// reweighted by the inverse proposal density. Samples are generated in
/// chunks of 65536, chunk `k` from the ChaCha8 stream `k` of `seed`, and
/// chunk sums are combined in index order, so the result depends only on
/// `(f, Q, samples, seed)`. The error estimate is one standard deviation.
pub fn direct_matrix_integral(
    f: &InvariantIntegrand,
    q: &Spectrum,
    samples: usize,
    seed: u64,
) -> Result<Evaluation> {
    let n = q.len();
    check_dim(f, n)?;
    if n > 2 {
        return Err(Error::Domain(format!("direct matrix integral supports N ≤ 2, got {n}")));
    }
    if f.decay_hint != DecayHint::Schwartz {
        return Err(Error::Domain("Monte Carlo needs a Schwartz-class integrand".into()));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let qv = q.values();
    let coords = n * n;
    let log_norm = -0.5 * coords as f64 * (2.0 * std::f64::consts::PI).ln();
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(Complex64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let count = CHUNK.min(samples - k * CHUNK);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut sq = 0.0;
            let mut y = [0.0f64; 4];
            for _ in 0..count {
                let mut r2 = 0.0;
                for v in y.iter_mut().take(coords) {
                    *v = rng.sample(StandardNormal);
                    r2 += *v * *v;
                }
                let inv_pdf = (0.5 * r2 - log_norm).exp();
                let (eig, phase) = if n == 1 {
                    (vec![y[0]], qv[0] * y[0])
                } else {
                    (
                        hermitian_2x2_eigenvalues(y[0], y[1], y[2], y[3]).to_vec(),
                        qv[0] * y[0] + qv[1] * y[1],
                    )
                };
                let w = f.eval(&eig) * Complex64::from_polar(inv_pdf, -phase);
                sum += w;
                sq += w.norm_sqr();
            }
            (sum, sq)
        })
        .collect();
    let (sum, sq) = partial
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = samples as f64;
    let mean = sum / m;
    let var = (sq / m - mean.norm_sqr()).max(0.0) * m / (m - 1.0);
    Ok(Evaluation::new(mean, (var / m).sqrt(), samples, MethodTag::MonteCarlo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig { truncation_radius: 7.0, ..QuadratureConfig::default() }
    }

    fn spectrum(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn one_dimensional_fourier_transform() {
        let f = InvariantIntegrand::gaussian(1);
        let e = reduced_integral(&f, &spectrum(&[0.0]), &cfg()).unwrap();
        assert!((e.value - PI.sqrt()).norm() < 1e-8);
        let e = reduced_integral(&f, &spectrum(&[1.0]), &cfg()).unwrap();
        assert!((e.value - PI.sqrt() * (-0.25f64).exp()).norm() < 1e-8);
    }

    #[test]
    fn gaussian_reduction_closed_form() {
        // regression constant: (π²/2)·exp(−q²/2)
        let f = InvariantIntegrand::gaussian(2);
        for q in [0.1, 0.5, 2.0] {
            let e = reduced_integral(&f, &spectrum(&[q, -q]), &cfg()).unwrap();
            let want = PI * PI / 2.0 * (-q * q / 2.0).exp();
            assert!((e.value - want).norm() < 1e-9, "q = {q}: {}", e.value);
        }
    }

    #[test]
    fn permuting_q_is_exact() {
        let f = InvariantIntegrand::gaussian(2);
        let a = reduced_integral_raw(&f, &[0.7, -0.2], &cfg(), Convention::Corrected).unwrap();
        let b = reduced_integral_raw(&f, &[-0.2, 0.7], &cfg(), Convention::Corrected).unwrap();
        assert!((a.value - b.value).norm() < 1e-14);
        // the weight V(P)² is even under the swap while 1/V(Q) is odd
        let a = reduced_integral_raw(&f, &[0.7, -0.2], &cfg(), Convention::SquaredVandermonde).unwrap();
        let b = reduced_integral_raw(&f, &[-0.2, 0.7], &cfg(), Convention::SquaredVandermonde).unwrap();
        assert!((a.value + b.value).norm() < 1e-12);
    }

    #[test]
    fn confluent_q() {
        let f = InvariantIntegrand::gaussian(2);
        assert!(matches!(
            reduced_integral(&f, &spectrum(&[0.0, 0.0]), &cfg()),
            Err(Error::ConfluentSpectrum { .. })
        ));
        let e = reduced_integral_confluent(&f, &spectrum(&[0.0, 0.0]), &cfg()).unwrap();
        assert!((e.value - PI * PI / 2.0).norm() < 1e-5, "{}", e.value);
        assert!(e.value.im.abs() < 1e-9);
    }

    #[test]
    fn asymmetric_integrand_rejected() {
        let r = InvariantIntegrand::new(2, DecayHint::Schwartz, |p| Complex64::new(p[0], 0.0));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn monte_carlo_gaussian() {
        let f = InvariantIntegrand::gaussian(2);
        let e = direct_matrix_integral(&f, &spectrum(&[0.0, 0.0]), 200_000, 3).unwrap();
        assert!((e.value - PI * PI / 2.0).norm() < 4.0 * e.error_estimate, "{e:?}");
        let f1 = InvariantIntegrand::gaussian(1);
        let e = direct_matrix_integral(&f1, &spectrum(&[0.0]), 100_000, 3).unwrap();
        assert!((e.value - PI.sqrt()).norm() < 4.0 * e.error_estimate);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let f = InvariantIntegrand::gaussian(2);
        let q = spectrum(&[0.5, -0.5]);
        let a = direct_matrix_integral(&f, &q, 150_000, 11).unwrap();
        let b = direct_matrix_integral(&f, &q, 150_000, 11).unwrap();
        assert_eq!(a, b);
        let c = direct_matrix_integral(&f, &q, 150_000, 12).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn monte_carlo_preconditions() {
        let f = InvariantIntegrand::gaussian(3);
        assert!(matches!(
            direct_matrix_integral(&f, &spectrum(&[1.0, 0.0, -1.0]), 20_000, 1),
            Err(Error::Domain(_))
        ));
        let osc = InvariantIntegrand::new(1, DecayHint::Oscillatory, |p| Complex64::from_polar(1.0, p[0].powi(3))).unwrap();
        assert!(direct_matrix_integral(&osc, &spectrum(&[0.0]), 20_000, 1).is_err());
        let g = InvariantIntegrand::gaussian(1);
        assert!(direct_matrix_integral(&g, &spectrum(&[0.0]), 100, 1).is_err());
    }
}
