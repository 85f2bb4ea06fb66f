use num_complex::Complex64;

/// Result of extrapolating a damped ladder to zero damping.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderExtrapolation {
    pub value: Complex64,
    /// |full-degree extrapolant − extrapolant without the largest rung|.
    pub error_estimate: f64,
    /// |I(ε_k) − value| for each rung, in ladder order.
    pub residuals: Vec<f64>,
}

/// Neville evaluation at 0 of the interpolating polynomial through
/// `(xs[k], ys[k])`.
fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p: Vec<Complex64> = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    p[0]
}

/// Polynomial extrapolation of `values[k] ≈ I(eps[k])` to `eps = 0`.
pub fn extrapolate_to_zero(eps: &[f64], values: &[Complex64]) -> LadderExtrapolation {
    assert_eq!(eps.len(), values.len());
    assert!(!eps.is_empty());
    let value = neville_at_zero(eps, values);
    let error_estimate = if eps.len() > 1 {
        (value - neville_at_zero(&eps[1..], &values[1..])).norm()
    } else {
        f64::INFINITY
    };
    let residuals = values.iter().map(|v| (v - value).norm()).collect();
    LadderExtrapolation {
        value,
        error_estimate,
        residuals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cubic_is_reproduced_by_four_rungs() {
        let eps = [0.2, 0.1, 0.05, 0.025];
        let f = |e: f64| Complex64::new(1.5 - 2.0 * e + 0.5 * e * e, e * e * e);
        let vals: Vec<_> = eps.iter().map(|&e| f(e)).collect();
        let ex = extrapolate_to_zero(&eps, &vals);
        assert_relative_eq!(ex.value.re, 1.5, epsilon = 1e-13);
        assert!(ex.value.im.abs() < 1e-13);
        // the three-rung sub-extrapolant cannot see the cubic term
        assert!(ex.error_estimate > 0.0 && ex.error_estimate < 1e-3);
    }

    #[test]
    fn error_estimate_tracks_truncation() {
        let eps = [0.2, 0.1, 0.05, 0.025];
        let vals: Vec<_> = eps.iter().map(|&e: &f64| Complex64::new((-e).exp(), 0.0)).collect();
        let ex = extrapolate_to_zero(&eps, &vals);
        let true_err = (ex.value.re - 1.0).abs();
        assert!(true_err < 1e-5);
        assert!(ex.error_estimate >= true_err);
    }
}
