//! Eigenvalue-space helpers: spectra, the trace/traceless split, the
//! Vandermonde determinant and the zonal spherical function
//!
//! ```text
//! Φ(P|Q) = det[exp(i q_j p_k)] / (V(P) V(Q)).
//! ```
//!
//! Coincident eigenvalues are handled by the confluent form of both
//! determinants: repeated entries are replaced by scaled derivative rows
//! (columns) `∂^l/l!`, which leaves the ratio continuous.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries closer than `COINCIDENCE_REL · (1 + spread)` are treated as equal.
pub const COINCIDENCE_REL: f64 = 1e-8;
/// Tolerance on `Σ traceless = 0`, relative to `max(1, Σ|q|)`.
pub const TRACELESS_TOL: f64 = 1e-12;

/// Real eigenvalues stored in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("spectrum must have at least one entry".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("spectrum entry {v} is not finite")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Smallest gap between neighbouring entries (`∞` for `N = 1`).
    pub fn min_gap(&self) -> f64 {
        min_gap(&self.values)
    }

    pub fn spread(&self) -> f64 {
        spread(&self.values)
    }
}

impl TryFrom<Vec<f64>> for Spectrum {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Spectrum::new(v)
    }
}

impl From<Spectrum> for Vec<f64> {
    fn from(s: Spectrum) -> Self {
        s.values
    }
}

impl FromStr for Spectrum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad spectrum entry {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Spectrum::new(values)
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A Hermitian argument `X = X̃ + ξI`, described by `ξ = tr X / N` and the
/// eigenvalues of the traceless part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixArgument {
    pub xi: f64,
    pub traceless: Spectrum,
}

impl MatrixArgument {
    pub fn new(xi: f64, traceless: Spectrum) -> Result<Self> {
        if !xi.is_finite() {
            return Err(Error::Domain(format!("xi = {xi} is not finite")));
        }
        let scale = traceless.values().iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        if traceless.sum().abs() > TRACELESS_TOL * scale {
            return Err(Error::Domain(format!(
                "traceless part sums to {}, not 0",
                traceless.sum()
            )));
        }
        Ok(Self { xi, traceless })
    }

    /// `N = 2` argument with eigenvalues `ξ ± r/2`.
    pub fn n2(xi: f64, r: f64) -> Result<Self> {
        let a = 0.5 * r.abs();
        Self::new(xi, Spectrum::new(vec![a, -a])?)
    }

    pub fn dim(&self) -> usize {
        self.traceless.len()
    }

    /// Eigenvalues of `X`, nonincreasing.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.traceless.values().iter().map(|q| q + self.xi).collect()
    }

    /// Eigenvalue separation `r = x₁ − x₂` of an `N = 2` argument.
    pub fn n2_radius(&self) -> Option<f64> {
        match self.traceless.values() {
            [a, b] => Some(a - b),
            _ => None,
        }
    }
}

impl fmt::Display for MatrixArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi={} traceless=[{}]", self.xi, self.traceless)
    }
}

/// `ξ = mean(raw)` and `X̃ = raw − ξ`. The input order does not matter.
pub fn split(raw: &[f64]) -> Result<MatrixArgument> {
    if raw.is_empty() {
        return Err(Error::Domain("empty eigenvalue list".into()));
    }
    let mut sorted = raw.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let xi = sorted.iter().sum::<f64>() / sorted.len() as f64;
    let mut traceless: Vec<f64> = sorted.iter().map(|v| v - xi).collect();
    // push the rounding residue into the largest entry so the sum is 0
    let residue: f64 = traceless.iter().sum();
    if let Some(big) = traceless
        .iter_mut()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
    {
        *big -= residue;
    }
    MatrixArgument::new(xi, Spectrum::new(traceless)?)
}

/// `∏_{j<k} (p_j − p_k)`.
pub fn vandermonde(p: &[f64]) -> f64 {
    let mut v = 1.0;
    for j in 0..p.len() {
        for k in j + 1..p.len() {
            v *= p[j] - p[k];
        }
    }
    v
}

/// `V(P)²`, the eigenvalue density of the Hermitian measure.
pub fn spherical_measure(p: &Spectrum) -> f64 {
    let v = vandermonde(p.values());
    v * v
}

pub(crate) fn min_gap(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    s.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

pub(crate) fn coincidence_threshold(v: &[f64]) -> f64 {
    COINCIDENCE_REL * (1.0 + spread(v))
}

/// Entries grouped into clusters of near-coincident values, each slot
/// given as `(cluster centre, derivative order within the cluster)`.
pub(crate) fn confluent_slots(v: &[f64]) -> Vec<(f64, usize)> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let tol = coincidence_threshold(v);
    let mut slots = Vec::with_capacity(s.len());
    let mut start = 0;
    for i in 1..=s.len() {
        if i == s.len() || s[i] - s[i - 1] >= tol {
            let cluster = &s[start..i];
            let centre = cluster.iter().sum::<f64>() / cluster.len() as f64;
            slots.extend((0..cluster.len()).map(|l| (centre, l)));
            start = i;
        }
    }
    slots
}

/// Sorted copy of `v` in which every cluster of near-coincident entries is
/// replaced by points `δ` apart, symmetric about the cluster centre. The
/// sum of the entries is unchanged.
pub(crate) fn spread_clusters(v: &[f64], delta: f64) -> Vec<f64> {
    let slots = confluent_slots(v);
    let mut out = Vec::with_capacity(slots.len());
    let mut i = 0;
    while i < slots.len() {
        let mut m = 1;
        while i + m < slots.len() && slots[i + m].1 == m {
            m += 1;
        }
        let centre = slots[i].0;
        out.extend((0..m).map(|l| centre + delta * (l as f64 - (m as f64 - 1.0) / 2.0)));
        i += m;
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * j as f64)
}

/// Confluent Vandermonde-type determinant: row `k` is
/// `(1/l!) ∂^l [1, x, …, x^{N−1}]` at the slot's centre.
fn confluent_w_det(slots: &[(f64, usize)]) -> f64 {
    let n = slots.len();
    let w = DMatrix::from_fn(n, n, |row, col| {
        let (x, l) = slots[row];
        if col < l {
            0.0
        } else {
            binomial(col, l) * x.powi((col - l) as i32)
        }
    });
    w.determinant()
}

/// `(1/(l! m!)) ∂_q^l ∂_p^m exp(i q p)`.
fn confluent_kernel(q: f64, l: usize, p: f64, m: usize) -> Complex64 {
    let i = Complex64::i();
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 0..=l.min(m) {
        let coef = binomial(l, s) * factorial(m) / factorial(m - s);
        acc += i.powu(m as u32) * coef * q.powi((m - s) as i32) * (i * p).powu((l - s) as u32);
    }
    acc * Complex64::from_polar(1.0, q * p) / (factorial(l) * factorial(m))
}

fn check_dims(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { left: p.len(), right: q.len() });
    }
    if p.is_empty() {
        return Err(Error::Domain("empty spectrum".into()));
    }
    Ok(())
}

/// Zonal spherical function on raw eigenvalue lists (any order).
/// Both lists are sorted and the pair is put in lexicographic order first,
/// so permutations and `P ↔ Q` reproduce the result bit for bit.
pub fn zonal_phi(p: &[f64], q: &[f64]) -> Result<Complex64> {
    check_dims(p, q)?;
    let mut ps = confluent_slots(p);
    let mut qs = confluent_slots(q);
    let key = |s: &[(f64, usize)]| s.iter().map(|x| x.0).collect::<Vec<_>>();
    if key(&qs).partial_cmp(&key(&ps)) == Some(std::cmp::Ordering::Less) {
        std::mem::swap(&mut ps, &mut qs);
    }
    let n = p.len();
    let e = DMatrix::from_fn(n, n, |j, k| confluent_kernel(qs[j].0, qs[j].1, ps[k].0, ps[k].1));
    Ok(e.determinant() / (confluent_w_det(&ps) * confluent_w_det(&qs)))
}

/// `Φ(P|Q)`.
pub fn spherical_phi(p: &Spectrum, q: &Spectrum) -> Result<Complex64> {
    zonal_phi(p.values(), q.values())
}

/// `Φ(P|Q)·V(P)²`, smooth in `P` everywhere. Only `Q` goes through the
/// confluent path, so this is the form to sample on an integration lattice
/// over `P`.
pub fn phi_times_measure(p: &[f64], q: &[f64]) -> Result<Complex64> {
    check_dims(p, q)?;
    let n = p.len();
    let qs = confluent_slots(q);
    let e = DMatrix::from_fn(n, n, |j, k| confluent_kernel(qs[j].0, qs[j].1, p[k], 0));
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(e.determinant() * vandermonde(p) * sign / confluent_w_det(&qs))
}
