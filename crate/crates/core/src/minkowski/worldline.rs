use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{rotation, Coords, Vec3};

/// Samples used to check that a worldline stays subluminal.
const SPEED_SAMPLES: usize = 4096;

/// Position, velocity and acceleration at coordinate time `t` (`c = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
}

impl Event {
    /// `γ² = 1 / (1 - v²)`.
    pub fn gamma_squared(&self) -> f64 {
        1.0 / (1.0 - self.velocity.norm_squared())
    }
}

fn origin3() -> Coords {
    Coords::origin(3)
}

fn x_axis() -> Coords {
    Coords::from([1.0, 0.0, 0.0])
}

/// A timelike trajectory parameterized by coordinate time.
///
/// Every kind accelerates only inside a finite [`support`](WorldLine::support)
/// and moves inertially outside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WorldLine {
    Inertial {
        #[serde(default = "origin3")]
        position: Coords,
        velocity: Coords,
    },
    /// `x(t) = drift · t + a E(t) sin(ω t) ê` with the envelope
    /// `E(t) = cos⁸(π t / 2T)` on `|t| < T` and zero outside.
    Wiggle {
        amplitude: f64,
        omega: f64,
        half_width: f64,
        #[serde(default = "x_axis")]
        axis: Coords,
        #[serde(default = "origin3")]
        drift: Coords,
    },
    /// Velocity changes smoothly from `velocity` to `velocity + δ ê` over
    /// `|t| < T`. The asymptotic velocities differ, so the photon number is
    /// infrared divergent.
    Kick {
        delta: f64,
        half_width: f64,
        #[serde(default = "x_axis")]
        axis: Coords,
        #[serde(default = "origin3")]
        velocity: Coords,
    },
    /// Spacetime translation and spatial rotation of a source worldline:
    /// `x'(t) = R x(t - t₀) + b`.
    Moved {
        source: Box<WorldLine>,
        #[serde(default)]
        time_shift: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        translation: Option<Coords>,
        #[serde(default)]
        rotation: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axis: Option<Coords>,
    },
    /// The source seen from a frame moving with velocity `beta`,
    /// reparameterized by the new coordinate time.
    Boosted { source: Box<WorldLine>, beta: Coords },
}

fn unit(axis: &Coords, field: &str) -> Result<Vec3> {
    let v = axis.to_vec3();
    let n = v.norm();
    if n == 0.0 {
        return Err(Error::spec(field, "must be nonzero"));
    }
    Ok(v / n)
}

fn finite_positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::spec(field, format!("must be finite and > 0, got {value}")))
    }
}

/// Lorentz boost by velocity `beta` acting on events `(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost {
    beta: Vec3,
    gamma: f64,
}

impl Boost {
    pub fn new(beta: Vec3) -> Result<Self> {
        let b2 = beta.norm_squared();
        if b2.is_nan() || b2 >= 1.0 {
            return Err(Error::BoostVelocity(b2.sqrt()));
        }
        Ok(Boost {
            beta,
            gamma: 1.0 / (1.0 - b2).sqrt(),
        })
    }

    /// Applies the boost to the 4-vector `(t, x)`.
    pub fn apply(&self, t: f64, x: &Vec3) -> (f64, Vec3) {
        let b2 = self.beta.norm_squared();
        if b2 == 0.0 {
            return (t, *x);
        }
        let bx = self.beta.dot(x);
        let t2 = self.gamma * (t - bx);
        let x2 = x + self.beta * ((self.gamma - 1.0) * bx / b2 - self.gamma * t);
        (t2, x2)
    }

    /// Boosted time of the event `(t, x)`.
    fn time(&self, t: f64, x: &Vec3) -> f64 {
        self.gamma * (t - self.beta.dot(x))
    }

    /// Transforms an event together with its first two time derivatives.
    fn event(&self, e: &Event) -> Event {
        let (t, x) = self.apply(e.t, &e.position);
        // derivatives along the source time, as 4-vectors (1, v) and (0, a)
        let (dt, dx) = self.apply(1.0, &e.velocity);
        let (ddt, ddx) = self.apply(0.0, &e.acceleration);
        Event {
            t,
            position: x,
            velocity: dx / dt,
            acceleration: (ddx * dt - dx * ddt) / (dt * dt * dt),
        }
    }

    /// `|dt'/dt| ≥ γ (1 - |β|)` for any subluminal worldline.
    fn min_rate(&self) -> f64 {
        self.gamma * (1.0 - self.beta.norm())
    }
}

impl WorldLine {
    pub fn inertial(position: [f64; 3], velocity: [f64; 3]) -> Self {
        WorldLine::Inertial {
            position: position.into(),
            velocity: velocity.into(),
        }
    }

    /// Wiggle along `x` with no drift.
    pub fn wiggle(amplitude: f64, omega: f64, half_width: f64) -> Self {
        WorldLine::Wiggle {
            amplitude,
            omega,
            half_width,
            axis: x_axis(),
            drift: origin3(),
        }
    }

    /// Kick along `x` starting from rest.
    pub fn kick(delta: f64, half_width: f64) -> Self {
        WorldLine::Kick {
            delta,
            half_width,
            axis: x_axis(),
            velocity: origin3(),
        }
    }

    pub fn boosted(self, beta: [f64; 3]) -> Self {
        WorldLine::Boosted {
            source: Box::new(self),
            beta: beta.into(),
        }
    }

    pub fn shifted(self, time_shift: f64, translation: [f64; 3]) -> Self {
        WorldLine::Moved {
            source: Box::new(self),
            time_shift,
            translation: Some(translation.into()),
            rotation: 0.0,
            axis: None,
        }
    }

    pub fn rotated(self, angle: f64, axis: [f64; 3]) -> Self {
        WorldLine::Moved {
            source: Box::new(self),
            time_shift: 0.0,
            translation: None,
            rotation: angle,
            axis: Some(axis.into()),
        }
    }

    /// Parameter checks, including that the speed stays below 1 on a dense
    /// sample of the support and on both asymptotes.
    pub fn check(&self) -> Result<()> {
        self.check_parameters()?;
        let (t0, t1) = self.support();
        let span = (t1 - t0).max(1.0);
        for k in 0..=SPEED_SAMPLES {
            let t = t0 - 0.1 * span + 1.2 * span * k as f64 / SPEED_SAMPLES as f64;
            let e = self.state(t)?;
            let speed = e.velocity.norm();
            if speed.is_nan() || speed >= 1.0 {
                return Err(Error::Superluminal { t, speed });
            }
        }
        Ok(())
    }

    fn check_parameters(&self) -> Result<()> {
        match self {
            WorldLine::Inertial { position, velocity } => {
                if position.dim() != 3 || velocity.dim() != 3 {
                    return Err(Error::spec("velocity", "worldline vectors have 3 components"));
                }
                let speed = velocity.to_vec3().norm();
                if speed.is_nan() || speed >= 1.0 {
                    return Err(Error::Superluminal { t: 0.0, speed });
                }
                Ok(())
            }
            WorldLine::Wiggle {
                amplitude,
                omega,
                half_width,
                axis,
                ..
            } => {
                if !amplitude.is_finite() {
                    return Err(Error::spec("amplitude", "must be finite"));
                }
                finite_positive("omega", *omega)?;
                finite_positive("half_width", *half_width)?;
                unit(axis, "axis").map(|_| ())
            }
            WorldLine::Kick {
                delta,
                half_width,
                axis,
                ..
            } => {
                if !delta.is_finite() {
                    return Err(Error::spec("delta", "must be finite"));
                }
                finite_positive("half_width", *half_width)?;
                unit(axis, "axis").map(|_| ())
            }
            WorldLine::Moved {
                source,
                time_shift,
                rotation: angle,
                axis,
                ..
            } => {
                if !time_shift.is_finite() || !angle.is_finite() {
                    return Err(Error::spec("time_shift", "must be finite"));
                }
                rotation(*angle, axis.as_ref())?;
                source.check_parameters()
            }
            WorldLine::Boosted { source, beta } => {
                if beta.dim() != 3 {
                    return Err(Error::spec("beta", "expected 3 components"));
                }
                Boost::new(beta.to_vec3())?;
                source.check_parameters()
            }
        }
    }

    /// Time interval outside which the acceleration vanishes.
    pub fn support(&self) -> (f64, f64) {
        match self {
            WorldLine::Inertial { .. } => (0.0, 0.0),
            WorldLine::Wiggle { half_width, .. } | WorldLine::Kick { half_width, .. } => {
                (-half_width, *half_width)
            }
            WorldLine::Moved {
                source, time_shift, ..
            } => {
                let (a, b) = source.support();
                (a + time_shift, b + time_shift)
            }
            WorldLine::Boosted { source, beta } => {
                let (a, b) = source.support();
                let Ok(boost) = Boost::new(beta.to_vec3()) else {
                    return (a, b);
                };
                let time = |t: f64| {
                    source
                        .state(t)
                        .map(|e| boost.time(t, &e.position))
                        .unwrap_or(t)
                };
                (time(a), time(b))
            }
        }
    }

    /// Velocities before and after the support.
    pub fn asymptotic_velocities(&self) -> Result<(Vec3, Vec3)> {
        let (t0, t1) = self.support();
        let margin = 1.0 + (t1 - t0).abs();
        Ok((
            self.state(t0 - margin)?.velocity,
            self.state(t1 + margin)?.velocity,
        ))
    }

    /// `|v_out - v_in|`; zero for identified worldlines.
    pub fn identification_mismatch(&self) -> Result<f64> {
        let (a, b) = self.asymptotic_velocities()?;
        Ok((b - a).norm())
    }

    pub fn state(&self, t: f64) -> Result<Event> {
        if !t.is_finite() {
            return Err(Error::NonFinite("worldline time"));
        }
        let e = self.state_unchecked(t)?;
        let finite = |v: &Vec3| v.iter().all(|x| x.is_finite());
        if !(finite(&e.position) && finite(&e.velocity) && finite(&e.acceleration)) {
            return Err(Error::NonFinite("worldline event"));
        }
        Ok(e)
    }

    fn state_unchecked(&self, t: f64) -> Result<Event> {
        Ok(match self {
            WorldLine::Inertial { position, velocity } => {
                let v = velocity.to_vec3();
                Event {
                    t,
                    position: position.to_vec3() + v * t,
                    velocity: v,
                    acceleration: Vec3::zeros(),
                }
            }
            WorldLine::Wiggle {
                amplitude,
                omega,
                half_width,
                axis,
                drift,
            } => {
                let e = unit(axis, "axis")?;
                let u = drift.to_vec3();
                let (f, fp, fpp) = if t.abs() < *half_width {
                    let (env, env_p, env_pp) = envelope(t, *half_width);
                    let (sin, cos) = (omega * t).sin_cos();
                    (
                        env * sin,
                        env_p * sin + env * omega * cos,
                        env_pp * sin + 2.0 * env_p * omega * cos - env * omega * omega * sin,
                    )
                } else {
                    (0.0, 0.0, 0.0)
                };
                Event {
                    t,
                    position: u * t + e * (amplitude * f),
                    velocity: u + e * (amplitude * fp),
                    acceleration: e * (amplitude * fpp),
                }
            }
            WorldLine::Kick {
                delta,
                half_width,
                axis,
                velocity,
            } => {
                let e = unit(axis, "axis")?;
                let v0 = velocity.to_vec3();
                let (g, s, sp) = smooth_step(t, *half_width);
                Event {
                    t,
                    position: v0 * t + e * (delta * g),
                    velocity: v0 + e * (delta * s),
                    acceleration: e * (delta * sp),
                }
            }
            WorldLine::Moved {
                source,
                time_shift,
                translation,
                rotation: angle,
                axis,
            } => {
                let r: Matrix3<f64> = rotation(*angle, axis.as_ref())?;
                let src = source.state(t - time_shift)?;
                let shift = translation.as_ref().map(Coords::to_vec3).unwrap_or_default();
                Event {
                    t,
                    position: r * src.position + shift,
                    velocity: r * src.velocity,
                    acceleration: r * src.acceleration,
                }
            }
            WorldLine::Boosted { source, beta } => {
                let boost = Boost::new(beta.to_vec3())?;
                let s = source_time(source, &boost, t)?;
                let mut e = boost.event(&source.state(s)?);
                e.t = t;
                e
            }
        })
    }
}

/// Source time whose boosted time is `target`. The boosted time is strictly
/// increasing in the source time, so Newton steps are safeguarded by a
/// bracket.
fn source_time(source: &WorldLine, boost: &Boost, target: f64) -> Result<f64> {
    let f = |s: f64| -> Result<(f64, f64)> {
        let e = source.state(s)?;
        let value = boost.time(s, &e.position) - target;
        let slope = boost.gamma * (1.0 - boost.beta.dot(&e.velocity));
        Ok((value, slope))
    };
    let rate = boost.min_rate();
    let mut s = target / boost.gamma;
    let (v, _) = f(s)?;
    // |f(s) - f(s*)| ≥ rate |s - s*| brackets the root
    let reach = v.abs() / rate + 1e-12 * (1.0 + s.abs());
    let (mut lo, mut hi) = (s - reach, s + reach);
    for _ in 0..200 {
        let (value, slope) = f(s)?;
        if value == 0.0 {
            return Ok(s);
        }
        if value > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let mut next = s - value / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - s).abs() <= 1e-15 * (1.0 + s.abs()) || hi - lo <= 1e-15 * (1.0 + s.abs()) {
            return Ok(next);
        }
        s = next;
    }
    Ok(s)
}

/// `cos⁸(π t / 2T)` and its first two derivatives, for `|t| < T`.
fn envelope(t: f64, half_width: f64) -> (f64, f64, f64) {
    let k = PI / (2.0 * half_width);
    let (sin, cos) = (k * t).sin_cos();
    let c6 = cos.powi(6);
    let e = c6 * cos * cos;
    let ep = -8.0 * k * c6 * cos * sin;
    let epp = 8.0 * k * k * c6 * (7.0 * sin * sin - cos * cos);
    (e, ep, epp)
}

/// Quintic smooth step from 0 (t ≤ -T) to 1 (t ≥ T): returns its integral
/// from `-T`, value and derivative. The second derivative also vanishes at
/// both ends, so kicked worldlines are C².
fn smooth_step(t: f64, half_width: f64) -> (f64, f64, f64) {
    let w = 2.0 * half_width;
    if t <= -half_width {
        return (0.0, 0.0, 0.0);
    }
    if t >= half_width {
        return (0.5 * w + (t - half_width), 1.0, 0.0);
    }
    let u = (t + half_width) / w;
    let u2 = u * u;
    let u3 = u2 * u;
    let integral = w * u3 * u * (u2 - 3.0 * u + 2.5);
    let value = u3 * (10.0 - 15.0 * u + 6.0 * u2);
    let slope = 30.0 * u2 * (1.0 - u) * (1.0 - u) / w;
    (integral, value, slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn wiggles() -> Vec<WorldLine> {
        vec![
            WorldLine::wiggle(0.01, 1.0, 20.0),
            WorldLine::Wiggle {
                amplitude: 0.3,
                omega: 1.5,
                half_width: 6.0,
                axis: [0.0, 1.0, 1.0].into(),
                drift: [0.2, 0.0, -0.1].into(),
            },
            WorldLine::kick(0.3, 4.0),
            WorldLine::wiggle(0.2, 1.0, 8.0).boosted([0.5, 0.2, 0.0]),
            WorldLine::wiggle(0.2, 1.0, 8.0)
                .rotated(0.7, [1.0, 1.0, 0.0])
                .shifted(3.0, [1.0, 2.0, 3.0]),
        ]
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for w in wiggles() {
            for t in [-3.3, -0.4, 0.9, 2.5] {
                let h = 1e-5;
                let (p, m, c) = (w.state(t + h).unwrap(), w.state(t - h).unwrap(), w.state(t).unwrap());
                let v = (p.position - m.position) / (2.0 * h);
                let a = (p.velocity - m.velocity) / (2.0 * h);
                assert!((v - c.velocity).norm() < 1e-8, "{w:?} at {t}");
                assert!((a - c.acceleration).norm() < 1e-7, "{w:?} at {t}");
            }
        }
    }

    #[test]
    fn envelope_is_c2_at_the_edges() {
        let (e, ep, epp) = envelope(20.0 - 1e-9, 20.0);
        assert!(e.abs() < 1e-50 && ep.abs() < 1e-40 && epp.abs() < 1e-30);
    }

    #[test]
    fn smooth_step_is_continuous() {
        let (g0, s0, _) = smooth_step(3.0 - 1e-12, 3.0);
        let (g1, s1, _) = smooth_step(3.0 + 1e-12, 3.0);
        assert_abs_diff_eq!(g0, g1, epsilon = 1e-10);
        assert_abs_diff_eq!(s0, s1, epsilon = 1e-10);
        assert_abs_diff_eq!(smooth_step(0.0, 3.0).1, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn zero_boost_is_identity() {
        let w = WorldLine::wiggle(0.1, 1.0, 5.0);
        let b = w.clone().boosted([0.0, 0.0, 0.0]);
        for t in [-6.0, -1.0, 0.3, 4.0] {
            assert_eq!(w.state(t).unwrap(), b.state(t).unwrap());
        }
    }

    #[test]
    fn boosted_inertial_stays_inertial() {
        let w = WorldLine::inertial([0.0, 1.0, 0.0], [0.1, 0.0, 0.0]).boosted([0.5, 0.0, 0.0]);
        let e = w.state(2.0).unwrap();
        // relativistic velocity addition: (0.1 - 0.5) / (1 - 0.05)
        assert_abs_diff_eq!(e.velocity.x, -0.4 / 0.95, epsilon = 1e-14);
        assert!(e.acceleration.norm() < 1e-15);
    }

    #[test]
    fn boost_preserves_the_interval() {
        let b = Boost::new(Vec3::new(0.3, -0.4, 0.2)).unwrap();
        let (t, x) = b.apply(1.7, &Vec3::new(0.2, 0.5, -1.0));
        let before = 1.7f64.powi(2) - (0.04 + 0.25 + 1.0);
        assert_abs_diff_eq!(t * t - x.norm_squared(), before, epsilon = 1e-13);
    }

    #[test]
    fn boosted_time_round_trips() {
        let w = WorldLine::wiggle(0.3, 2.0, 5.0);
        let boost = Boost::new(Vec3::new(0.8, 0.1, 0.0)).unwrap();
        for target in [-20.0, -1.0, 0.0, 3.5] {
            let s = source_time(&w, &boost, target).unwrap();
            let e = w.state(s).unwrap();
            assert_abs_diff_eq!(boost.time(s, &e.position), target, epsilon = 1e-12);
        }
    }

    #[test]
    fn superluminal_rejected() {
        assert!(matches!(
            WorldLine::wiggle(1.0, 2.0, 5.0).check(),
            Err(Error::Superluminal { .. })
        ));
        assert!(matches!(
            WorldLine::wiggle(0.01, 1.0, 5.0).boosted([1.0, 0.0, 0.0]).check(),
            Err(Error::BoostVelocity(_))
        ));
    }

    #[test]
    fn identification() {
        assert_eq!(WorldLine::wiggle(0.01, 1.0, 20.0).identification_mismatch().unwrap(), 0.0);
        assert_abs_diff_eq!(
            WorldLine::kick(0.01, 5.0).identification_mismatch().unwrap(),
            0.01,
            epsilon = 1e-15
        );
    }
}
