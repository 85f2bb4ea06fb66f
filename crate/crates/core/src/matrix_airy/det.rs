use num_complex::Complex64;
use nalgebra::DMatrix;

use crate::airy::ai_integral_derivatives;
use crate::error::{Error, Result};
use crate::quad::{extrapolate_to_zero, Evaluation, MethodTag};
use crate::spectra::{coincidence_threshold, min_gap, spread_clusters, vandermonde, MatrixArgument};

use super::Representation;

/// Cluster perturbations used by [`airy_det_oracle_confluent`].
const CONFLUENT_LADDER: [f64; 4] = [0.04, 0.02, 0.01, 0.005];
const ROUNDING: f64 = 1e-12;

fn det_formula(x: &[f64]) -> Result<Evaluation> {
    let n = x.len();
    let i = Complex64::i();
    let mut rows = Vec::with_capacity(n);
    for &xj in x {
        rows.push(ai_integral_derivatives(xj, (n - 1) as u32)?);
    }
    let m = DMatrix::from_fn(n, n, |j, k| i.powu(k as u32) * rows[j][k]);
    let pref = Complex64::new(0.0, -std::f64::consts::PI).powu((n * (n - 1) / 2) as u32);
    let v = vandermonde(x);
    let value = pref * m.determinant() / v;
    // Hadamard bound on the determinant, times a relative rounding level
    let bound: f64 = rows
        .iter()
        .map(|r| r.iter().map(|a| a * a).sum::<f64>().sqrt())
        .product();
    let err = ROUNDING * pref.norm() * bound / v.abs();
    Ok(Evaluation::new(value, err, n * n, MethodTag::Direct))
}

/// Closed form `(−iπ)^M det[(i d/dx)^{k} ai(x_j)]_{j,k} / V(x)`, with
/// `ai(x) = 2π·Ai(−x)` and `M = N(N−1)/2`. Exactly normalised: it equals
/// the defining integral.
pub fn airy_det_oracle(x: &MatrixArgument) -> Result<Evaluation> {
    Representation::DetOracle.require(x.dim())?;
    let ev = x.eigenvalues();
    let gap = min_gap(&ev);
    let threshold = coincidence_threshold(&ev);
    if gap < threshold {
        return Err(Error::ConfluentSpectrum { gap, threshold });
    }
    det_formula(&ev)
}

/// [`airy_det_oracle`] extended to coincident eigenvalues by spreading each
/// cluster by `δ` and extrapolating in `δ²`.
pub fn airy_det_oracle_confluent(x: &MatrixArgument) -> Result<Evaluation> {
    Representation::DetOracle.require(x.dim())?;
    let ev = x.eigenvalues();
    if min_gap(&ev) >= coincidence_threshold(&ev) {
        return det_formula(&ev);
    }
    let mut eps = Vec::new();
    let mut vals = Vec::new();
    for delta in CONFLUENT_LADDER {
        eps.push(delta * delta);
        vals.push(det_formula(&spread_clusters(&ev, delta))?.value);
    }
    let ex = extrapolate_to_zero(&eps, &vals);
    let err = ex.error_estimate + ROUNDING * ex.value.norm() / CONFLUENT_LADDER[3].powi(2);
    Ok(Evaluation::new(ex.value, err, CONFLUENT_LADDER.len(), MethodTag::DampedExtrapolated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::airy;
    use crate::spectra::split;

    #[test]
    fn one_by_one_is_scalar_airy() {
        let e = airy_det_oracle(&split(&[0.7]).unwrap()).unwrap();
        assert_eq!(e.value, Complex64::new(airy(0.7, 0).unwrap().ai_integral, 0.0));
    }

    #[test]
    fn order_of_eigenvalues_is_irrelevant() {
        let a = det_formula(&[1.3, -0.4, 0.2]).unwrap();
        let b = det_formula(&[-0.4, 0.2, 1.3]).unwrap();
        assert!((a.value - b.value).norm() < 1e-13 * a.value.norm());
    }

    #[test]
    fn confluent_limit_is_continuous() {
        let x = split(&[0.5, 0.5, -1.0]).unwrap();
        assert!(matches!(airy_det_oracle(&x), Err(Error::ConfluentSpectrum { .. })));
        let c = airy_det_oracle_confluent(&x).unwrap();
        let near = det_formula(&[0.5 + 1e-3, 0.5 - 1e-3, -1.0]).unwrap();
        assert!((c.value - near.value).norm() < 1e-5 * c.value.norm());
        // scalar matrix, all three coincide
        let s = airy_det_oracle_confluent(&split(&[0.3, 0.3, 0.3]).unwrap()).unwrap();
        assert!(s.value.norm().is_finite() && s.value.norm() > 0.0);
    }
}
