//! Quadrature for conditionally convergent integrals with cubic-phase
//! oscillation.
//!
//! Two regularisations are provided and are expected to agree:
//!
//! * **rotated contour** – the real line is replaced by the rays
//!   `t = s·e^{±iθ}` on which `exp(i a t³/3)` decays like `exp(−|a| s³ sin3θ / 3)`;
//! * **damped extrapolation** – the integrand is multiplied by
//!   `exp(−ε|t|²)` for each rung of a decreasing ladder of `ε`, and the
//!   results are extrapolated polynomially to `ε = 0`.
//!
//! The multi-dimensional lattice works on the real box `[−R, R]^d`; callers
//! whose integrands are only conditionally convergent first move them onto
//! a complex-shifted contour (see [`QuadratureConfig::contour_shift`]).

mod config;
mod contour;
mod cubic;
mod extrapolate;
mod gauss;
mod lattice;

pub use config::QuadratureConfig;
pub use contour::{Contour, Segment};
pub use cubic::{cubic_phase_damped, cubic_phase_integral, cubic_phase_rotated, DampedDiagnostics};
pub use extrapolate::{extrapolate_to_zero, LadderExtrapolation};
pub use gauss::GaussLegendre;
pub use lattice::{damped_lattice_integral, lattice_integral, MAX_LATTICE_DIM};

pub(crate) use cubic::check_converged;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// How an [`Evaluation`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodTag {
    DampedExtrapolated,
    RotatedContour,
    /// Plain quadrature or a closed form, no regularisation involved.
    Direct,
    MonteCarlo,
}

/// A numerical value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    #[serde(with = "crate::complex_json")]
    pub value: Complex64,
    pub error_estimate: f64,
    pub nodes_used: usize,
    pub method_tag: MethodTag,
}

impl Evaluation {
    pub fn new(value: Complex64, error_estimate: f64, nodes_used: usize, method_tag: MethodTag) -> Self {
        Evaluation {
            value,
            error_estimate,
            nodes_used,
            method_tag,
        }
    }

    pub fn exact(value: Complex64) -> Self {
        Evaluation::new(value, 0.0, 0, MethodTag::Direct)
    }

    pub fn is_finite(&self) -> bool {
        self.value.re.is_finite() && self.value.im.is_finite() && self.error_estimate.is_finite()
    }

    /// Multiply by a constant, scaling the error estimate accordingly.
    pub fn scaled(self, factor: Complex64) -> Self {
        Evaluation {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.norm(),
            ..self
        }
    }
}
