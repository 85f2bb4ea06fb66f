use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Regularisation and discretisation parameters shared by every integrator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Largest damping strength; the default ladder halves it three times.
    pub damping_epsilon: f64,
    /// Damping strengths used for extrapolation to `ε = 0`, strictly decreasing.
    pub epsilon_ladder: Vec<f64>,
    /// Angle of the rotated rays, in `[0, π/6]`.
    pub rotation_angle: f64,
    /// Half-width of the real box used by damped and lattice quadrature.
    pub truncation_radius: f64,
    /// Length of the rotated rays.
    pub ray_radius: f64,
    /// Maximum length of one Gauss–Legendre panel.
    pub panel_width: f64,
    /// Gauss–Legendre nodes per panel (and per dimension of a lattice cell).
    pub nodes_per_dim: usize,
    /// Imaginary offset applied to trace-like coordinates of multi-dimensional
    /// integrands before they are handed to the lattice.
    pub contour_shift: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            damping_epsilon: 0.2,
            epsilon_ladder: vec![0.2, 0.1, 0.05, 0.025],
            rotation_angle: 0.9 * PI / 6.0,
            truncation_radius: 12.0,
            ray_radius: 8.0,
            panel_width: 0.25,
            nodes_per_dim: 12,
            contour_shift: 1.0,
            abs_tol: 1e-8,
            rel_tol: 1e-4,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{value}' as a number")))
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("damping_epsilon", self.damping_epsilon),
            ("truncation_radius", self.truncation_radius),
            ("ray_radius", self.ray_radius),
            ("panel_width", self.panel_width),
            ("contour_shift", self.contour_shift),
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.epsilon_ladder.is_empty() {
            return Err(Error::Config("epsilon_ladder must not be empty".into()));
        }
        if self.epsilon_ladder.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::Config("epsilon_ladder entries must be positive".into()));
        }
        if self.epsilon_ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("epsilon_ladder must be strictly decreasing".into()));
        }
        // beyond π/6 the rays leave the sector where the cubic phase decays fast
        if !(0.0..=PI / 6.0 + 1e-15).contains(&self.rotation_angle) {
            return Err(Error::Config(format!(
                "rotation_angle must lie in [0, π/6], got {}",
                self.rotation_angle
            )));
        }
        if self.nodes_per_dim < 8 {
            return Err(Error::Config(format!("nodes_per_dim must be ≥ 8, got {}", self.nodes_per_dim)));
        }
        Ok(())
    }

    /// Apply one `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "damping_epsilon" => {
                let eps = parse_f64(key, value)?;
                self.damping_epsilon = eps;
                self.epsilon_ladder = (0..4).map(|k| eps / f64::from(1 << k)).collect();
            }
            "epsilon_ladder" => {
                self.epsilon_ladder = value
                    .split(',')
                    .map(|v| parse_f64(key, v))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(first) = self.epsilon_ladder.first() {
                    self.damping_epsilon = *first;
                }
            }
            "rotation_angle" => self.rotation_angle = parse_f64(key, value)?,
            "truncation_radius" => self.truncation_radius = parse_f64(key, value)?,
            "ray_radius" => self.ray_radius = parse_f64(key, value)?,
            "panel_width" => self.panel_width = parse_f64(key, value)?,
            "nodes_per_dim" => {
                self.nodes_per_dim = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("nodes_per_dim: cannot parse '{value}'")))?
            }
            "contour_shift" => self.contour_shift = parse_f64(key, value)?,
            "abs_tol" => self.abs_tol = parse_f64(key, value)?,
            "rel_tol" => self.rel_tol = parse_f64(key, value)?,
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Parse `key=value` lines on top of the defaults. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = QuadratureConfig::default();
        cfg.apply_kv_str(text)?;
        Ok(cfg)
    }

    pub fn apply_kv_str(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            self.set(key, value)?;
        }
        self.validate()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_kv_str(&text)
    }

    pub fn to_kv_string(&self) -> String {
        let ladder: Vec<String> = self.epsilon_ladder.iter().map(|e| e.to_string()).collect();
        format!(
            "damping_epsilon={}\nepsilon_ladder={}\nrotation_angle={}\ntruncation_radius={}\n\
             ray_radius={}\npanel_width={}\nnodes_per_dim={}\ncontour_shift={}\nabs_tol={}\nrel_tol={}\n",
            self.damping_epsilon,
            ladder.join(","),
            self.rotation_angle,
            self.truncation_radius,
            self.ray_radius,
            self.panel_width,
            self.nodes_per_dim,
            self.contour_shift,
            self.abs_tol,
            self.rel_tol
        )
    }

    /// Tolerance that a converged result with magnitude `scale` must meet.
    pub fn tolerance_for(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale)
    }

    /// Copy with every rung of the damping ladder multiplied by `factor`.
    pub(crate) fn with_scaled_ladder(&self, factor: f64) -> Self {
        let epsilon_ladder: Vec<f64> = self.epsilon_ladder.iter().map(|e| e * factor).collect();
        QuadratureConfig {
            damping_epsilon: epsilon_ladder[0],
            epsilon_ladder,
            ..self.clone()
        }
    }

    pub(crate) fn with_truncation(&self, radius: f64) -> Self {
        QuadratureConfig {
            truncation_radius: radius,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        QuadratureConfig::default().validate().unwrap();
    }

    #[test]
    fn kv_round_trip() {
        let cfg = QuadratureConfig {
            nodes_per_dim: 20,
            damping_epsilon: 0.4,
            epsilon_ladder: vec![0.4, 0.2, 0.1],
            ..QuadratureConfig::default()
        };
        let back = QuadratureConfig::from_kv_str(&cfg.to_kv_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = QuadratureConfig::from_kv_str("# comment\n\n nodes_per_dim = 16 \n").unwrap();
        assert_eq!(cfg.nodes_per_dim, 16);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "epsilon_ladder=0.1,0.2",
            "epsilon_ladder=0.1,-0.05",
            "rotation_angle=0.6",
            "nodes_per_dim=4",
            "truncation_radius=0",
            "bogus=1",
            "nodes_per_dim",
        ] {
            assert!(QuadratureConfig::from_kv_str(text).is_err(), "{text}");
        }
    }

    #[test]
    fn damping_epsilon_regenerates_ladder() {
        let cfg = QuadratureConfig::from_kv_str("damping_epsilon=0.4").unwrap();
        assert_eq!(cfg.epsilon_ladder, vec![0.4, 0.2, 0.1, 0.05]);
    }
}
