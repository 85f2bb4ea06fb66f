use num_complex::Complex64;

use super::gauss::{panel_edges, GaussLegendre};

/// One piece of a piecewise-smooth integration path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    /// `center + radius·e^{iφ}` for φ running from `start` to `end`.
    Arc { center: Complex64, radius: f64, start: f64, end: f64 },
}

impl Segment {
    fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, start, end, .. } => radius * (end - start).abs(),
        }
    }

    /// Point and `dz/ds` at parameter `s ∈ [0, 1]`.
    fn point(&self, s: f64) -> (Complex64, Complex64) {
        match *self {
            Segment::Line { from, to } => (from + (to - from) * s, to - from),
            Segment::Arc { center, radius, start, end } => {
                let phi = start + (end - start) * s;
                let e = Complex64::from_polar(radius, phi);
                (center + e, Complex64::i() * e * (end - start))
            }
        }
    }
}

/// An oriented path made of [`Segment`]s.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Contour {
    pub segments: Vec<Segment>,
}

impl Contour {
    pub fn new(segments: Vec<Segment>) -> Self {
        Contour { segments }
    }

    /// The V-shaped path `s·e^{iθ}` (s > 0) and `−s·e^{−iθ}` (s < 0),
    /// `|s| ≤ radius`, traversed from left to right. A negative `angle`
    /// bends the path into the lower half-plane.
    pub fn rotated_rays(angle: f64, radius: f64) -> Self {
        let right = Complex64::from_polar(radius, angle);
        let left = -Complex64::from_polar(radius, -angle);
        Contour::new(vec![
            Segment::Line { from: left, to: Complex64::new(0.0, 0.0) },
            Segment::Line { from: Complex64::new(0.0, 0.0), to: right },
        ])
    }

    /// Rotated rays that avoid the origin through an arc of radius `rho`
    /// in the upper half-plane.
    pub fn rays_with_upper_arc(angle: f64, rho: f64, radius: f64) -> Self {
        let left_dir = Complex64::from_polar(1.0, std::f64::consts::PI - angle);
        let right_dir = Complex64::from_polar(1.0, angle);
        Contour::new(vec![
            Segment::Line { from: left_dir * radius, to: left_dir * rho },
            Segment::Arc {
                center: Complex64::new(0.0, 0.0),
                radius: rho,
                start: std::f64::consts::PI - angle,
                end: angle,
            },
            Segment::Line { from: right_dir * rho, to: right_dir * radius },
        ])
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// `∫ f(z) dz` with Gauss–Legendre panels no longer than `panel_len`.
    /// Returns the value and the number of integrand evaluations.
    pub fn integrate<F>(&self, rule: &GaussLegendre, panel_len: f64, mut f: F) -> (Complex64, usize)
    where
        F: FnMut(Complex64) -> Complex64,
    {
        let mut total = Complex64::new(0.0, 0.0);
        let mut count = 0;
        for seg in &self.segments {
            let len = seg.length();
            if len == 0.0 {
                continue;
            }
            let edges = panel_edges(0.0, 1.0, panel_len / len);
            for w in edges.windows(2) {
                let mut panel = Complex64::new(0.0, 0.0);
                for (s, weight) in rule.mapped(w[0], w[1]) {
                    let (z, dz) = seg.point(s);
                    panel += f(z) * dz * weight;
                    count += 1;
                }
                total += panel;
            }
        }
        (total, count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn closed_circle_gives_residue() {
        let c = Contour::new(vec![Segment::Arc {
            center: Complex64::new(0.3, -0.2),
            radius: 0.5,
            start: 0.0,
            end: 2.0 * PI,
        }]);
        let rule = GaussLegendre::new(16);
        let (v, _) = c.integrate(&rule, 0.2, |z| (z - Complex64::new(0.3, -0.2)).inv());
        assert_relative_eq!(v.im, 2.0 * PI, epsilon = 1e-12);
        assert!(v.re.abs() < 1e-12);
    }

    #[test]
    fn entire_function_is_path_independent() {
        let rule = GaussLegendre::new(16);
        let f = |z: Complex64| (-z * z).exp();
        let a = Contour::rotated_rays(0.4, 6.0).integrate(&rule, 0.25, f).0;
        let b = Contour::rays_with_upper_arc(0.4, 0.7, 6.0).integrate(&rule, 0.25, f).0;
        // rays at 0.4 rad stay inside the sector where exp(−z²) decays
        assert_relative_eq!(a.re, PI.sqrt(), epsilon = 1e-10);
        assert_relative_eq!(b.re, a.re, epsilon = 1e-10);
        assert_relative_eq!(b.im, a.im, epsilon = 1e-10);
    }
}
