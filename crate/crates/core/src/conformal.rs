//! Inversions `x -> c + r² (x - c) / |x - c|²` of curves.
//!
//! An inversion whose center is off the curve maps closed curves to closed
//! curves and leaves `n` unchanged. When the center lies on a closed curve the
//! image is open (that point goes to infinity) and `n` drops by exactly `2π²`;
//! inverting an open curve about a point off it closes the curve up and adds
//! the same amount.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveSample, CurveSpec, OpenDomain, Topology, PERIOD};
use crate::error::{Error, Result};
use crate::geom::{Coords, Vec3};
use crate::kernel::{curve_number, ClosedOptions, OpenOptions};
use crate::quadrature::QuadratureResult;
use crate::CIRCLE_NUMBER;

/// Samples used to locate the inversion center on a curve.
pub const CENTER_SAMPLES: usize = 4096;
/// The center is on the curve when its distance to the curve is below this
/// fraction of the curve's extent.
pub const ON_CURVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionMap {
    pub center: Coords,
    #[serde(default = "unit_radius")]
    pub radius: f64,
}

fn unit_radius() -> f64 {
    1.0
}

impl InversionMap {
    pub fn new(center: impl Into<Coords>, radius: f64) -> Result<Self> {
        let map = InversionMap {
            center: center.into(),
            radius,
        };
        map.check()?;
        Ok(map)
    }

    fn check(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::spec(
                "radius",
                format!("must be finite and > 0, got {}", self.radius),
            ));
        }
        Ok(())
    }

    fn c(&self) -> Vec3 {
        self.center.to_vec3()
    }

    /// Where the center sits relative to `curve`: `Some(s)` with the parameter
    /// of the nearest curve point when it lies on the curve.
    pub fn locate_on(&self, curve: &CurveSpec) -> Result<Option<f64>> {
        let c = self.c();
        let params = curve.sample_parameters(CENTER_SAMPLES);
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        let mut best = (f64::INFINITY, params[0]);
        for &s in &params {
            let x = curve.evaluate(s)?.position;
            lo = lo.inf(&x);
            hi = hi.sup(&x);
            let d = (x - c).norm();
            if d < best.0 {
                best = (d, s);
            }
        }
        let extent = (hi - lo).norm();
        let spacing = (params[1] - params[0]).abs();
        let s = refine_nearest(curve, c, best.1, spacing)?;
        let distance = (curve.evaluate(s)?.position - c).norm();
        Ok((distance < ON_CURVE_TOLERANCE * extent).then_some(s))
    }
}

/// Newton iteration on `(x(s) - c)·x'(s) = 0`, steps clamped to one sample
/// spacing.
fn refine_nearest(curve: &CurveSpec, c: Vec3, mut s: f64, spacing: f64) -> Result<f64> {
    for _ in 0..60 {
        let p = curve.evaluate(s)?;
        let d = p.position - c;
        let g = d.dot(&p.velocity);
        let h = p.velocity.norm_squared() + d.dot(&p.acceleration);
        let step = if h > 0.0 {
            (g / h).clamp(-spacing, spacing)
        } else {
            -g.signum() * spacing
        };
        let next = s - step;
        if curve.evaluate(next).is_err() {
            break;
        }
        s = next;
        if step.abs() < 1e-15 * (1.0 + s.abs()) {
            break;
        }
    }
    Ok(s)
}

/// `map(x)`; the involution fixes the sphere `|x - c| = r`.
pub fn invert_point(map: &InversionMap, x: &Vec3) -> Result<Vec3> {
    let d = x - map.c();
    let q = d.norm_squared();
    if q == 0.0 {
        return Err(Error::AtInversionCenter);
    }
    Ok(map.c() + d * (map.radius * map.radius / q))
}

/// Pushes position, velocity and acceleration through the inversion.
fn invert_sample(map: &InversionMap, src: &CurveSample) -> Result<CurveSample> {
    let (x, v, a) = (src.position, src.velocity, src.acceleration);
    let d = x - map.c();
    let q = d.norm_squared();
    if q == 0.0 {
        return Err(Error::AtInversionCenter);
    }
    let r2 = map.radius * map.radius;
    let p = d.dot(&v);
    let q2 = q * q;
    Ok(CurveSample {
        position: map.c() + d * (r2 / q),
        velocity: (v / q - d * (2.0 * p / q2)) * r2,
        acceleration: (a / q - v * (4.0 * p / q2)
            - d * (2.0 * (v.norm_squared() + d.dot(&a)) / q2)
            + d * (8.0 * p * p / (q2 * q)))
            * r2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Image {
    /// Closed source, center off the curve.
    Closed { singular_seam: bool },
    /// Closed source through the center; the image parameter `s ∈ (0, 2π)`
    /// reads the source at `seam + s`.
    Punctured { seam: f64 },
    /// Source on the whole line, center off it; the image parameter
    /// `σ ∈ [0, 2π)` reads the source at `t = center + scale · tan((σ - π)/2)`.
    Compactified { center: f64, scale: f64 },
}

/// Document form of an inverted curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionSpec {
    pub source: Box<CurveSpec>,
    pub center: Coords,
    #[serde(default = "unit_radius")]
    pub radius: f64,
}

/// A curve composed with an inversion. Built by [`invert_curve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InversionSpec", into = "InversionSpec")]
pub struct InvertedCurve {
    source: Box<CurveSpec>,
    map: InversionMap,
    image: Image,
}

impl TryFrom<InversionSpec> for InvertedCurve {
    type Error = Error;

    fn try_from(spec: InversionSpec) -> Result<Self> {
        let map = InversionMap {
            center: spec.center,
            radius: spec.radius,
        };
        map.check()?;
        invert_curve(&spec.source, &map)
    }
}

impl From<InvertedCurve> for InversionSpec {
    fn from(inv: InvertedCurve) -> Self {
        InversionSpec {
            source: inv.source,
            center: inv.map.center,
            radius: inv.map.radius,
        }
    }
}

impl From<InvertedCurve> for CurveSpec {
    fn from(inv: InvertedCurve) -> Self {
        CurveSpec::Inverted(inv)
    }
}

impl InvertedCurve {
    pub fn source(&self) -> &CurveSpec {
        &self.source
    }

    pub fn map(&self) -> &InversionMap {
        &self.map
    }

    /// The center lies on the source curve, so the image is open.
    pub fn is_exceptional(&self) -> bool {
        matches!(self.image, Image::Punctured { .. })
    }

    /// Source parameter sent to infinity, for exceptional inversions.
    pub fn seam(&self) -> Option<f64> {
        match self.image {
            Image::Punctured { seam } => Some(seam),
            _ => None,
        }
    }

    pub fn dimension(&self) -> usize {
        self.source.dimension().max(self.map.center.dim())
    }

    pub fn topology(&self) -> Topology {
        match self.image {
            Image::Closed { singular_seam } => Topology::Closed { singular_seam },
            Image::Punctured { .. } => Topology::Open(OpenDomain::Punctured),
            Image::Compactified { .. } => Topology::Closed {
                singular_seam: true,
            },
        }
    }

    pub(crate) fn eval(&self, s: f64) -> Result<CurveSample> {
        let src = match self.image {
            Image::Closed { .. } => self.source.evaluate(s)?,
            Image::Punctured { seam } => self.source.evaluate(seam + s)?,
            Image::Compactified { center, scale } => {
                let theta = 0.5 * (s - PI);
                let (sin, cos) = theta.sin_cos();
                let tan = sin / cos;
                let dt = 0.5 * scale / (cos * cos);
                let ddt = dt * tan;
                let c = self.source.evaluate(center + scale * tan)?;
                CurveSample {
                    position: c.position,
                    velocity: c.velocity * dt,
                    acceleration: c.acceleration * (dt * dt) + c.velocity * ddt,
                }
            }
        };
        invert_sample(&self.map, &src)
    }
}

/// Composes `curve` with `map`.
///
/// Closed curves through the center become punctured open curves whose seam
/// sits at the center's preimage. Curves on the whole line become closed
/// curves through the center, reparameterized onto a period by a tangent
/// map.
pub fn invert_curve(curve: &CurveSpec, map: &InversionMap) -> Result<InvertedCurve> {
    map.check()?;
    curve.check_parameters()?;
    let on_curve = map.locate_on(curve)?;
    let image = match (curve.topology(), on_curve) {
        (Topology::Closed { singular_seam }, None) => Image::Closed { singular_seam },
        (Topology::Closed { singular_seam: false }, Some(seam)) => Image::Punctured {
            seam: seam.rem_euclid(PERIOD),
        },
        (Topology::Open(OpenDomain::Unbounded { center, core }), None) => Image::Compactified {
            center,
            scale: core.max(1.0),
        },
        (Topology::Closed { singular_seam: true }, Some(_)) => {
            return Err(Error::Inversion(
                "the inversion center lies on a curve that already passes through infinity's image; \
                 pick a center off the curve"
                    .into(),
            ))
        }
        (Topology::Open(OpenDomain::Unbounded { .. }), Some(_)) => {
            return Err(Error::Inversion(
                "inverting an open curve about one of its own points is not supported; \
                 pick a center off the curve"
                    .into(),
            ))
        }
        (Topology::Open(OpenDomain::Punctured), _) => {
            return Err(Error::Inversion(
                "punctured open curves cannot be inverted again; invert the original closed curve"
                    .into(),
            ))
        }
    };
    Ok(InvertedCurve {
        source: Box::new(curve.clone()),
        map: map.clone(),
        image,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub source: QuadratureResult,
    pub image: QuadratureResult,
    /// Expected `n(image) - n(source)`: zero, or `2π²` when an open curve is
    /// closed up by the inversion.
    pub expected_shift: f64,
    pub relative_difference: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn number(curve: &CurveSpec) -> Result<QuadratureResult> {
    let tol = if curve.is_closed() {
        ClosedOptions::default().tol
    } else {
        OpenOptions::default().tol
    };
    curve_number(curve, Some(tol))
}

/// Compares `n` of `curve` and of its image under a non-exceptional `map`.
pub fn check_inversion_invariance(
    curve: &CurveSpec,
    map: &InversionMap,
    tol: f64,
) -> Result<InvarianceReport> {
    let image = invert_curve(curve, map)?;
    if image.is_exceptional() {
        return Err(Error::Inversion(
            "the inversion center lies on the curve; use the anomaly check instead".into(),
        ));
    }
    let expected_shift = if curve.is_closed() { 0.0 } else { CIRCLE_NUMBER };
    let source = number(curve)?;
    let image = number(&image.into())?;
    let relative_difference =
        (image.value - source.value - expected_shift).abs() / image.value.abs().max(f64::MIN_POSITIVE);
    Ok(InvarianceReport {
        passed: relative_difference < tol && source.converged && image.converged,
        source,
        image,
        expected_shift,
        relative_difference,
        tolerance: tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnomalyReport {
    pub closed: QuadratureResult,
    pub open: QuadratureResult,
    /// `n_closed - n_open`.
    pub difference: f64,
    pub expected: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Computes `n_closed - n_open` for a closed curve and its image under an
/// inversion centred on the curve, and compares it with `2π²`.
pub fn anomaly_check(curve: &CurveSpec, map: &InversionMap, tol: f64) -> Result<AnomalyReport> {
    if !curve.is_closed() {
        return Err(Error::Topology { expected: "closed" });
    }
    let image = invert_curve(curve, map)?;
    if !image.is_exceptional() {
        return Err(Error::Inversion(
            "the inversion center is not on the curve; use the invariance check instead".into(),
        ));
    }
    let closed = number(curve)?;
    let open = number(&image.into())?;
    let difference = closed.value - open.value;
    let deviation = (difference - CIRCLE_NUMBER).abs();
    Ok(AnomalyReport {
        passed: deviation < tol && closed.converged && open.converged,
        closed,
        open,
        difference,
        expected: CIRCLE_NUMBER,
        deviation,
        tolerance: tol,
    })
}
