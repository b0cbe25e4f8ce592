//! Curves in the plane or in space.
//!
//! Closed curves are parameterized with period `2π` regardless of kind. Open
//! curves either run over the whole real line ([`OpenDomain::Unbounded`]) or,
//! for images of closed curves under an inversion centred on the curve, over
//! `(0, 2π)` with the point at infinity at both ends ([`OpenDomain::Punctured`]).
//!
//! Every curve is evaluated in three dimensions; planar kinds have `z = 0`.

mod fourier;
mod spline;
mod validate;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::conformal::InvertedCurve;
use crate::error::{Error, Result};
use crate::geom::{rotation, Coords, Vec3};

pub use fourier::FourierLoop;
pub use spline::{fit_spline, Spline};
pub use validate::{validate, Check, ValidationReport};
pub use validate::{DIRECTION_TOLERANCE, PROXIMITY_FLOOR, VALIDATION_SAMPLES};

/// Parameter period of every closed curve.
pub const PERIOD: f64 = TAU;

/// Half-width of the parameter window used to sample open curves when no
/// quadrature window is in play (validation, plotting, kernel grids).
pub const DEFAULT_OPEN_WINDOW: f64 = 8.0;

/// Position and its first two parameter derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
}

impl CurveSample {
    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }

    /// `|v × a| / |v|³`, or `None` at a stationary point.
    pub fn curvature(&self) -> Option<f64> {
        let speed = self.speed();
        (speed > 0.0).then(|| self.velocity.cross(&self.acceleration).norm() / speed.powi(3))
    }

    /// Limit of the kernel on the diagonal, `|v|² κ² / 2 = |v × a|² / (2 |v|⁴)`.
    pub fn diagonal_kernel(&self) -> f64 {
        let v2 = self.velocity.norm_squared();
        self.velocity.cross(&self.acceleration).norm_squared() / (2.0 * v2 * v2)
    }

    fn is_finite(&self) -> bool {
        self.position.iter().all(|x| x.is_finite())
            && self.velocity.iter().all(|x| x.is_finite())
            && self.acceleration.iter().all(|x| x.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpenDomain {
    /// Parameter runs over all of ℝ. All non-straight structure lies within
    /// `core` of `center`.
    Unbounded { center: f64, core: f64 },
    /// Parameter runs over `(0, 2π)`; both ends go to infinity.
    Punctured,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Topology {
    /// Period `2π`. With `singular_seam` the curve cannot be evaluated at
    /// `s = 0` itself (it is the image of a point at infinity), so grids are
    /// offset by half a step.
    Closed { singular_seam: bool },
    Open(OpenDomain),
}

impl Topology {
    pub fn is_closed(&self) -> bool {
        matches!(self, Topology::Closed { .. })
    }
}

/// Reparameterization applied on top of a source curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Warp {
    /// Orientation reversal `s -> -s` (or `2π - s` on punctured domains).
    Reverse,
    /// `s -> s + ε sin s`, monotone for `|ε| < 1`.
    Sine(f64),
}

/// A similarity `x -> scale · R x + translation` applied to a source curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transformed {
    pub source: Box<CurveSpec>,
    #[serde(default = "unit_scale")]
    pub scale: f64,
    /// Rotation angle in radians.
    #[serde(default)]
    pub rotation: f64,
    /// Rotation axis; the `z` axis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Coords>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Coords>,
}

fn unit_scale() -> f64 {
    1.0
}

fn plane_origin() -> Coords {
    Coords::origin(2)
}

/// Analytic or fitted description of a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        #[serde(default = "plane_origin")]
        center: Coords,
        radius: f64,
    },
    /// Centred at the origin with the major axis along `x`; `b = a √(1 - ecc²)`.
    Ellipse { a: f64, ecc: f64 },
    Line { point: Coords, direction: Coords },
    FourierLoop(FourierLoop),
    /// `x(s) = (s, A exp(-s² / w²))`.
    OpenBump { amplitude: f64, width: f64 },
    Spline(Spline),
    Transformed(Transformed),
    Reparameterized { source: Box<CurveSpec>, warp: Warp },
    Inverted(InvertedCurve),
}

impl CurveSpec {
    pub fn circle(radius: f64) -> Self {
        CurveSpec::Circle {
            center: plane_origin(),
            radius,
        }
    }

    pub fn circle_at(center: impl Into<Coords>, radius: f64) -> Self {
        CurveSpec::Circle {
            center: center.into(),
            radius,
        }
    }

    pub fn ellipse(a: f64, ecc: f64) -> Self {
        CurveSpec::Ellipse { a, ecc }
    }

    pub fn line(point: impl Into<Coords>, direction: impl Into<Coords>) -> Self {
        CurveSpec::Line {
            point: point.into(),
            direction: direction.into(),
        }
    }

    pub fn open_bump(amplitude: f64, width: f64) -> Self {
        CurveSpec::OpenBump { amplitude, width }
    }

    fn wrap(self, scale: f64, rotation: f64, translation: Option<Coords>) -> Self {
        CurveSpec::Transformed(Transformed {
            source: Box::new(self),
            scale,
            rotation,
            axis: None,
            translation,
        })
    }

    pub fn translated(self, by: impl Into<Coords>) -> Self {
        self.wrap(1.0, 0.0, Some(by.into()))
    }

    /// Rotation about the `z` axis.
    pub fn rotated(self, angle: f64) -> Self {
        self.wrap(1.0, angle, None)
    }

    pub fn rotated_about(self, angle: f64, axis: impl Into<Coords>) -> Self {
        CurveSpec::Transformed(Transformed {
            source: Box::new(self),
            scale: 1.0,
            rotation: angle,
            axis: Some(axis.into()),
            translation: None,
        })
    }

    pub fn scaled(self, factor: f64) -> Self {
        self.wrap(factor, 0.0, None)
    }

    pub fn reversed(self) -> Self {
        CurveSpec::Reparameterized {
            source: Box::new(self),
            warp: Warp::Reverse,
        }
    }

    pub fn warped(self, epsilon: f64) -> Self {
        CurveSpec::Reparameterized {
            source: Box::new(self),
            warp: Warp::Sine(epsilon),
        }
    }

    /// Range and consistency checks on the spec's parameters. Errors name the
    /// offending field.
    pub fn check_parameters(&self) -> Result<()> {
        fn positive(field: &str, value: f64) -> Result<()> {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::spec(field, format!("must be finite and > 0, got {value}")))
            }
        }
        match self {
            CurveSpec::Circle { radius, .. } => positive("radius", *radius),
            CurveSpec::Ellipse { a, ecc } => {
                positive("a", *a)?;
                if !(ecc.is_finite() && (0.0..1.0).contains(ecc)) {
                    return Err(Error::spec(
                        "ecc",
                        format!("must lie in the range [0, 1), got {ecc}"),
                    ));
                }
                Ok(())
            }
            CurveSpec::Line { point, direction } => {
                if point.dim() != direction.dim() {
                    return Err(Error::spec("direction", "dimension differs from `point`"));
                }
                if direction.to_vec3().norm() == 0.0 {
                    return Err(Error::spec("direction", "must be nonzero"));
                }
                Ok(())
            }
            CurveSpec::FourierLoop(f) => f.check(),
            CurveSpec::OpenBump { amplitude, width } => {
                if !amplitude.is_finite() {
                    return Err(Error::spec("amplitude", "must be finite"));
                }
                positive("width", *width)
            }
            CurveSpec::Spline(_) => Ok(()),
            CurveSpec::Transformed(t) => {
                positive("scale", t.scale)?;
                if !t.rotation.is_finite() {
                    return Err(Error::spec("rotation", "must be finite"));
                }
                rotation(t.rotation, t.axis.as_ref())?;
                t.source.check_parameters()
            }
            CurveSpec::Reparameterized { source, warp } => {
                if let Warp::Sine(eps) = warp {
                    if !(eps.is_finite() && eps.abs() < 1.0) {
                        return Err(Error::spec(
                            "sine",
                            format!("warp amplitude must satisfy |ε| < 1, got {eps}"),
                        ));
                    }
                }
                source.check_parameters()
            }
            CurveSpec::Inverted(inv) => inv.source().check_parameters(),
        }
    }

    /// Ambient dimension of the spec (2 or 3).
    pub fn dimension(&self) -> usize {
        match self {
            CurveSpec::Circle { center, .. } => center.dim(),
            CurveSpec::Ellipse { .. } | CurveSpec::OpenBump { .. } => 2,
            CurveSpec::Line { point, .. } => point.dim(),
            CurveSpec::FourierLoop(f) => f.dimension(),
            CurveSpec::Spline(s) => s.dimension(),
            CurveSpec::Transformed(t) => {
                let mut dim = t.source.dimension();
                if t.axis.is_some() {
                    dim = 3;
                }
                if let Some(tr) = &t.translation {
                    dim = dim.max(tr.dim());
                }
                dim
            }
            CurveSpec::Reparameterized { source, .. } => source.dimension(),
            CurveSpec::Inverted(inv) => inv.dimension(),
        }
    }

    pub fn topology(&self) -> Topology {
        match self {
            CurveSpec::Circle { .. } | CurveSpec::Ellipse { .. } | CurveSpec::FourierLoop(_) => {
                Topology::Closed {
                    singular_seam: false,
                }
            }
            CurveSpec::Line { .. } => Topology::Open(OpenDomain::Unbounded {
                center: 0.0,
                core: 0.0,
            }),
            CurveSpec::OpenBump { width, .. } => Topology::Open(OpenDomain::Unbounded {
                center: 0.0,
                core: 3.0 * width,
            }),
            CurveSpec::Spline(s) => s.topology(),
            CurveSpec::Transformed(t) => t.source.topology(),
            CurveSpec::Reparameterized { source, warp } => match (source.topology(), warp) {
                (Topology::Open(OpenDomain::Unbounded { center, core }), Warp::Reverse) => {
                    Topology::Open(OpenDomain::Unbounded {
                        center: -center,
                        core,
                    })
                }
                (Topology::Open(OpenDomain::Unbounded { center, core }), Warp::Sine(eps)) => {
                    Topology::Open(OpenDomain::Unbounded {
                        center,
                        core: core + eps.abs(),
                    })
                }
                (other, _) => other,
            },
            CurveSpec::Inverted(inv) => inv.topology(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.topology().is_closed()
    }

    /// Position, velocity and acceleration at parameter `s`.
    ///
    /// Closed curves fold `s` into `[0, 2π)`; punctured open curves reject
    /// parameters outside `(0, 2π)`.
    pub fn evaluate(&self, s: f64) -> Result<CurveSample> {
        if !s.is_finite() {
            return Err(Error::NonFinite("curve parameter"));
        }
        let s = match self.topology() {
            Topology::Closed { .. } => s.rem_euclid(PERIOD),
            Topology::Open(OpenDomain::Punctured) => {
                if !(s > 0.0 && s < PERIOD) {
                    return Err(Error::Domain {
                        param: s,
                        reason: "punctured open curves are defined on (0, 2π)",
                    });
                }
                s
            }
            Topology::Open(OpenDomain::Unbounded { .. }) => s,
        };
        let sample = self.eval_unchecked(s)?;
        if !sample.is_finite() {
            return Err(Error::NonFinite("curve sample"));
        }
        Ok(sample)
    }

    fn eval_unchecked(&self, s: f64) -> Result<CurveSample> {
        Ok(match self {
            CurveSpec::Circle { center, radius } => {
                let (sin, cos) = s.sin_cos();
                CurveSample {
                    position: center.to_vec3() + Vec3::new(radius * cos, radius * sin, 0.0),
                    velocity: Vec3::new(-radius * sin, radius * cos, 0.0),
                    acceleration: Vec3::new(-radius * cos, -radius * sin, 0.0),
                }
            }
            CurveSpec::Ellipse { a, ecc } => {
                let b = a * (1.0 - ecc * ecc).sqrt();
                let (sin, cos) = s.sin_cos();
                CurveSample {
                    position: Vec3::new(a * cos, b * sin, 0.0),
                    velocity: Vec3::new(-a * sin, b * cos, 0.0),
                    acceleration: Vec3::new(-a * cos, -b * sin, 0.0),
                }
            }
            CurveSpec::Line { point, direction } => {
                let d = direction.to_vec3();
                CurveSample {
                    position: point.to_vec3() + d * s,
                    velocity: d,
                    acceleration: Vec3::zeros(),
                }
            }
            CurveSpec::FourierLoop(f) => f.eval(s),
            CurveSpec::OpenBump { amplitude, width } => {
                let w2 = width * width;
                let f = amplitude * (-s * s / w2).exp();
                let fp = -2.0 * s / w2 * f;
                let fpp = (4.0 * s * s / (w2 * w2) - 2.0 / w2) * f;
                CurveSample {
                    position: Vec3::new(s, f, 0.0),
                    velocity: Vec3::new(1.0, fp, 0.0),
                    acceleration: Vec3::new(0.0, fpp, 0.0),
                }
            }
            CurveSpec::Spline(sp) => sp.eval(s),
            CurveSpec::Transformed(t) => {
                let src = t.source.evaluate(s)?;
                let m = rotation(t.rotation, t.axis.as_ref())? * t.scale;
                let shift = t.translation.as_ref().map(Coords::to_vec3).unwrap_or_default();
                CurveSample {
                    position: m * src.position + shift,
                    velocity: m * src.velocity,
                    acceleration: m * src.acceleration,
                }
            }
            CurveSpec::Reparameterized { source, warp } => {
                let (phi, dphi, ddphi) = match warp {
                    Warp::Reverse => match source.topology() {
                        Topology::Open(OpenDomain::Punctured) => (PERIOD - s, -1.0, 0.0),
                        _ => (-s, -1.0, 0.0),
                    },
                    Warp::Sine(eps) => {
                        let (sin, cos) = s.sin_cos();
                        (s + eps * sin, 1.0 + eps * cos, -eps * sin)
                    }
                };
                let src = source.evaluate(phi)?;
                CurveSample {
                    position: src.position,
                    velocity: src.velocity * dphi,
                    acceleration: src.acceleration * (dphi * dphi) + src.velocity * ddphi,
                }
            }
            CurveSpec::Inverted(inv) => inv.eval(s)?,
        })
    }

    /// Curvature `κ(s)`.
    pub fn curvature(&self, s: f64) -> Result<f64> {
        self.evaluate(s)?.curvature().ok_or(Error::ZeroVelocity(s))
    }

    /// Half-width of the default sampling window for open curves.
    pub fn default_window(&self) -> f64 {
        match self.topology() {
            Topology::Open(OpenDomain::Unbounded { core, .. }) => {
                DEFAULT_OPEN_WINDOW.max(2.0 * core)
            }
            _ => PERIOD / 2.0,
        }
    }

    /// `n` parameters covering the curve: a uniform periodic grid for closed
    /// curves (offset by half a step when the seam is singular), the interior
    /// of `(0, 2π)` for punctured curves, and the default window for
    /// unbounded open curves.
    pub fn sample_parameters(&self, n: usize) -> Vec<f64> {
        match self.topology() {
            Topology::Closed {
                singular_seam: false,
            } => (0..n).map(|k| PERIOD * k as f64 / n as f64).collect(),
            Topology::Closed {
                singular_seam: true,
            }
            | Topology::Open(OpenDomain::Punctured) => (0..n)
                .map(|k| PERIOD * (k as f64 + 0.5) / n as f64)
                .collect(),
            Topology::Open(OpenDomain::Unbounded { center, .. }) => {
                let half = self.default_window();
                let step = 2.0 * half / (n - 1) as f64;
                (0..n).map(|k| center - half + step * k as f64).collect()
            }
        }
    }
}

/// Free-function form of [`CurveSpec::evaluate`].
pub fn evaluate(curve: &CurveSpec, s: f64) -> Result<CurveSample> {
    curve.evaluate(s)
}

/// Free-function form of [`CurveSpec::curvature`].
pub fn curvature(curve: &CurveSpec, s: f64) -> Result<f64> {
    curve.curvature(s)
}
