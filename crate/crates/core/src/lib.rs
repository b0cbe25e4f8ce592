//! # curvn
//!
//! Numerical evaluation of the transverse-tangent double integral
//!
//! ```text
//! n = -2 ∫∫ dx^T · dx'^T / |x - x'|²
//! ```
//!
//! over smooth curves in the plane or in space, where `dx^T` is the tangent
//! element with its component along the chord `x - x'` removed. The number is
//! dimensionless and invariant under similarities and reparameterization; for
//! every circle it equals `2π²`.
//!
//! The crate covers:
//!
//! * [`curve`]: built-in curve families, Fourier loops, cubic spline fits and
//!   validation (regularity, seam smoothness, asymptote identification,
//!   simpleness).
//! * [`kernel`]: the Euclidean kernel with its analytic diagonal limit and the
//!   closed/open curve numbers, integrated by deterministic product trapezoid
//!   rules ([`quadrature`]).
//! * [`conformal`]: inversions of curves, the inversion invariance of `n`, and
//!   the universal `2π²` shift when an inversion opens or closes a curve.
//! * [`minkowski`]: the photon number of a charge on a timelike worldline in
//!   position space, together with a far-field spectral cross-check and
//!   Lorentz boosts.
//! * [`optimize`]: gradient descent over Fourier loops, used to probe whether
//!   the circle minimizes `n`.
//! * [`cli`]: JSON spec parsing, job dispatch and report/CSV/SVG writers behind
//!   the `curvn` binary.
//!
//! ```
//! use curvn::{curve::CurveSpec, kernel::{curve_number_closed, ClosedOptions}};
//!
//! let circle = CurveSpec::circle(1.0);
//! let result = curve_number_closed(&circle, &ClosedOptions::default()).unwrap();
//! let two_pi_sq = 2.0 * std::f64::consts::PI.powi(2);
//! assert!((result.value - two_pi_sq).abs() < 1e-10);
//! ```

pub mod cli;
pub mod conformal;
pub mod curve;
pub mod error;
pub mod geom;
pub mod kernel;
pub mod minkowski;
pub mod optimize;
pub mod quadrature;
pub mod sum;

pub use error::{Error, Result};

/// `2π²`, the curve number of every circle.
pub const CIRCLE_NUMBER: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
