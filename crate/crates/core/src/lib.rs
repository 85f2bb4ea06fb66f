//! Numerical evaluation of the matrix Airy function
//!
//! ```text
//! A(X) = ∫ exp{ i( tr(Y³)/3 − tr(XY) ) } dY,   X, Y Hermitian N×N
//! ```
//!
//! through several mutually redundant integral representations, together
//! with the machinery needed to cross-check them: a cubic-phase quadrature
//! engine, a classical Airy function, eigenvalue-space helpers (Vandermonde,
//! zonal spherical function), a numerical Harish-Chandra–Itzykson–Zuber
//! reduction with a Monte-Carlo oracle, and residual / comparison reports.
//!
//! Conventions used throughout the crate:
//!
//! * `ai_integral(x) = ∫ exp(i(y³/3 − xy)) dy = 2π·Ai(−x)`, the one-dimensional
//!   case of `A`, which satisfies `f'' + x f = 0`.
//! * The Hermitian measure `dY` is flat Lebesgue measure on the diagonal
//!   entries and the real and imaginary parts of the upper off-diagonal
//!   entries.
//! * The Vandermonde determinant is `V(p) = ∏_{j<k} (p_j − p_k)`.

pub mod airy;
pub mod error;
pub mod hciz;
pub mod matrix_airy;
pub mod quad;
pub mod spectra;
pub mod verification;

mod complex_json;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use quad::{Evaluation, MethodTag, QuadratureConfig};
pub use spectra::{MatrixArgument, Spectrum};
