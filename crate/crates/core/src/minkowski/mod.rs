//! Photon number of a classical charge on a timelike worldline.
//!
//! In position space the mean number of radiated photons is a double integral
//! over coordinate times with the transverse-tangent kernel, here written in
//! terms of the chord velocity `w = (x - x') / (t - t')`:
//!
//! ```text
//! K(t, t') = (2α/π) [-(v - w)·(v' - w) + (v × w)·(v' × w)] / ((t - t')² (1 - w²)²)
//! ```
//!
//! On the diagonal `K → (2α/π)(γ²|a|² + γ⁴ (v·a)²) / 4`. The integral is finite
//! only when the initial and final velocities coincide; [`spectral`] provides
//! an independent frequency-domain evaluation.

pub mod spectral;
mod worldline;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::kernel::DIAGONAL_SWITCH;
use crate::quadrature::{integrate_window, window_sum, PairIntegrand, QuadratureResult, WindowOptions};

pub use spectral::{spectral_photon_number, write_spectrum_csv, SpectralCount, SpectralOptions, SpectrumPoint};
pub use worldline::{Boost, Event, WorldLine};

/// Fine-structure constant.
pub const ALPHA: f64 = 7.2973525693e-3;

/// Asymptotic velocities closer than this count as identified.
pub const IDENTIFICATION_TOLERANCE: f64 = 1e-12;

const PREFACTOR: f64 = 2.0 * ALPHA / std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonCount {
    pub n: f64,
    pub quadrature: QuadratureResult,
}

/// Kernel of one worldline.
#[derive(Debug, Clone, Copy)]
pub struct PhotonKernel<'a> {
    worldline: &'a WorldLine,
}

#[derive(Debug, Clone, Copy)]
pub struct PhotonNode {
    pub t: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub diagonal: f64,
}

fn diagonal_value(e: &Event) -> f64 {
    let g2 = e.gamma_squared();
    let a2 = e.acceleration.norm_squared();
    let va = e.velocity.dot(&e.acceleration);
    PREFACTOR * (g2 * a2 + g2 * g2 * va * va) / 4.0
}

impl<'a> PhotonKernel<'a> {
    pub fn new(worldline: &'a WorldLine) -> Result<Self> {
        worldline.check()?;
        Ok(PhotonKernel { worldline })
    }

    pub fn node(&self, t: f64) -> Result<PhotonNode> {
        let e = self.worldline.state(t)?;
        Ok(PhotonNode {
            t,
            position: e.position,
            velocity: e.velocity,
            diagonal: diagonal_value(&e),
        })
    }

    fn between(&self, a: &PhotonNode, b: &PhotonNode) -> Result<f64> {
        let tau = a.t - b.t;
        let w = (a.position - b.position) / tau;
        let w2 = w.norm_squared();
        let spacelike = 1.0 - w2;
        if spacelike.is_nan() || spacelike <= 0.0 {
            return Err(Error::Superluminal {
                t: a.t,
                speed: w2.sqrt(),
            });
        }
        let along = (a.velocity - w).dot(&(b.velocity - w));
        let across = a.velocity.cross(&w).dot(&b.velocity.cross(&w));
        Ok(PREFACTOR * (across - along) / (tau * tau * spacelike * spacelike))
    }

    fn combine(&self, a: &PhotonNode, b: &PhotonNode) -> Result<f64> {
        if (a.t - b.t).abs() < DIAGONAL_SWITCH {
            Ok(0.5 * (a.diagonal + b.diagonal))
        } else {
            self.between(a, b)
        }
    }

    /// `K(t, t')` with the diagonal limit near `t = t'`.
    pub fn eval(&self, t: f64, u: f64) -> Result<f64> {
        self.combine(&self.node(t)?, &self.node(u)?)
    }

    /// Direct formula with no diagonal switch.
    pub fn eval_direct(&self, t: f64, u: f64) -> Result<f64> {
        self.between(&self.node(t)?, &self.node(u)?)
    }

    pub fn diagonal(&self, t: f64) -> Result<f64> {
        Ok(diagonal_value(&self.worldline.state(t)?))
    }
}

impl PairIntegrand for PhotonKernel<'_> {
    type Point = PhotonNode;

    fn point(&self, t: f64) -> Result<PhotonNode> {
        self.node(t)
    }

    fn pair(&self, a: &PhotonNode, b: &PhotonNode) -> Result<f64> {
        self.combine(a, b)
    }

    fn diagonal(&self, a: &PhotonNode) -> f64 {
        a.diagonal
    }
}

/// Validates `w` and evaluates its kernel at `(t, t')`.
pub fn minkowski_kernel(w: &WorldLine, t: f64, u: f64) -> Result<f64> {
    PhotonKernel::new(w)?.eval(t, u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonOptions {
    pub tol: f64,
    /// Lower bound on the starting half-width; the start is also at least
    /// twice the half-width of the acceleration support.
    pub initial: f64,
    pub max: f64,
    pub min_intervals: usize,
    pub max_intervals: usize,
}

impl Default for PhotonOptions {
    fn default() -> Self {
        PhotonOptions {
            tol: 1e-6,
            initial: 8.0,
            max: 128.0,
            min_intervals: 256,
            max_intervals: 1 << 14,
        }
    }
}

fn window_of(w: &WorldLine) -> (f64, f64) {
    let (t0, t1) = w.support();
    (0.5 * (t0 + t1), 0.5 * (t1 - t0))
}

/// Photon number by position-space quadrature over growing time windows.
///
/// Fails with [`Error::InfraredDivergence`] unless the asymptotic velocities
/// coincide.
pub fn photon_number(w: &WorldLine, opts: &PhotonOptions) -> Result<PhotonCount> {
    let k = PhotonKernel::new(w)?;
    let mismatch = w.identification_mismatch()?;
    if mismatch > IDENTIFICATION_TOLERANCE {
        return Err(Error::InfraredDivergence { mismatch });
    }
    let (center, core) = window_of(w);
    let initial = opts.initial.max(2.0 * core);
    let quadrature = integrate_window(
        &k,
        &WindowOptions {
            tol: opts.tol,
            center,
            initial,
            max: opts.max.max(4.0 * initial),
            min_intervals: opts.min_intervals,
            max_intervals: opts.max_intervals,
            tail_exponent: 3,
        },
    )?;
    Ok(PhotonCount {
        n: quadrature.value,
        quadrature,
    })
}

/// Trapezoid value of the double integral over `[c - L, c + L]²` (centred on
/// the acceleration support) at time step `step`, with no identification
/// check. For non-identified worldlines this grows without bound in `L`.
pub fn photon_number_in_window(w: &WorldLine, half_width: f64, step: f64) -> Result<f64> {
    let k = PhotonKernel::new(w)?;
    let (center, _) = window_of(w);
    let intervals = ((2.0 * half_width / step).round() as usize).max(2);
    window_sum(&k, center, half_width, intervals)
}

/// Boosts `w` by `beta`.
pub fn boost(w: &WorldLine, beta: [f64; 3]) -> Result<WorldLine> {
    Boost::new(Vec3::from(beta))?;
    let boosted = w.clone().boosted(beta);
    boosted.check()?;
    Ok(boosted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inertial_kernel_vanishes() {
        let w = WorldLine::inertial([0.0, 1.0, 2.0], [0.3, -0.2, 0.1]);
        let k = PhotonKernel::new(&w).unwrap();
        for (t, u) in [(0.0, 1.0), (-5.0, 3.0), (2.0, 2.0)] {
            assert!(k.eval(t, u).unwrap().abs() < 1e-18);
        }
    }

    #[test]
    fn kernel_is_symmetric() {
        let w = WorldLine::wiggle(0.2, 1.3, 6.0);
        let k = PhotonKernel::new(&w).unwrap();
        for (t, u) in [(0.1, 2.0), (-4.0, 5.5), (1.0, -0.3)] {
            let (a, b) = (k.eval(t, u).unwrap(), k.eval(u, t).unwrap());
            assert!((a - b).abs() <= 1e-15 * a.abs());
        }
    }

    #[test]
    fn kicked_worldline_is_infrared_divergent() {
        let err = photon_number(&WorldLine::kick(0.01, 5.0), &PhotonOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InfraredDivergence { .. }), "{err}");
    }

    #[test]
    fn boost_rejects_light_speed() {
        let w = WorldLine::wiggle(0.01, 1.0, 5.0);
        assert!(matches!(boost(&w, [0.6, 0.8, 0.0]), Err(Error::BoostVelocity(_))));
    }
}
