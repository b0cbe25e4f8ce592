//! Frequency-domain photon count.
//!
//! The classical far-field spectrum radiated per unit frequency and solid
//! angle by a charge with acceleration confined to a finite window is
//!
//! ```text
//! d²E/dω dΩ = (α / 4π²) |J(ω, n)|²,
//! J(ω, n)  = ∫ n × ((n - v) × a) / (1 - n·v)² e^{iω(t - n·x)} dt
//! ```
//!
//! (units `ħ = c = 1`). Dividing by `ω` gives the photon spectrum and
//! `n = ∫ dω ∫ dΩ (d²E/dω dΩ) / ω`. Directions use Gauss–Legendre nodes in
//! `cos θ` and a uniform grid in `φ`; frequencies a uniform grid integrated
//! by Simpson's rule; times the trapezoid rule on the acceleration support.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{WorldLine, ALPHA};
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::sum::pairwise_sum;

/// Samples used to estimate the characteristic frequency of the motion.
const PROBE_SAMPLES: usize = 2048;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// `P_n` from the usual cosine initial guesses.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "at least one node");
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pm) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Gauss–Legendre nodes in `cos θ`.
    pub polar: usize,
    /// Uniform nodes in the azimuth.
    pub azimuthal: usize,
    /// Upper frequency; by default a multiple of the motion's characteristic
    /// frequency, widened for the largest Doppler shift.
    pub omega_max: Option<f64>,
    /// `dE/dω` at `ω = 0` above this fraction of its peak means the
    /// asymptotic velocities are not identified.
    pub infrared_ratio: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            polar: 16,
            azimuthal: 16,
            omega_max: None,
            infrared_ratio: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub omega: f64,
    /// `dE/dω`.
    pub energy: f64,
    /// `dN/dω`.
    pub number: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCount {
    pub n: f64,
    /// Difference between the Simpson and trapezoid frequency integrals.
    pub error_estimate: f64,
    pub omega_max: f64,
    pub directions: usize,
    #[serde(skip)]
    pub spectrum: Vec<SpectrumPoint>,
}

struct Sample {
    phase: f64,
    /// `n × ((n - v) × a) / (1 - n·v)²` times the time weight.
    source: Vec3,
}

fn characteristic_frequency(w: &WorldLine, t0: f64, t1: f64) -> Result<Option<(f64, f64)>> {
    let h = (t1 - t0) / PROBE_SAMPLES as f64;
    let mut events = Vec::with_capacity(PROBE_SAMPLES + 1);
    for k in 0..=PROBE_SAMPLES {
        events.push(w.state(t0 + h * k as f64)?);
    }
    let accel: f64 = events.iter().map(|e| e.acceleration.norm_squared()).sum();
    if accel == 0.0 {
        return Ok(None);
    }
    let jerk: f64 = events
        .windows(3)
        .map(|e| ((e[2].acceleration - e[0].acceleration) / (2.0 * h)).norm_squared())
        .sum();
    let speed = events.iter().map(|e| e.velocity.norm()).fold(0.0, f64::max);
    Ok(Some(((jerk / accel).sqrt(), speed)))
}

/// Photon number from the radiated spectrum.
///
/// Fails with [`Error::InfraredSpectrum`] when `dE/dω` does not vanish at
/// zero frequency, which happens exactly when the initial and final
/// velocities differ.
pub fn spectral_photon_number(w: &WorldLine, opts: &SpectralOptions) -> Result<SpectralCount> {
    w.check()?;
    let (t0, t1) = w.support();
    let probe = if t1 > t0 {
        characteristic_frequency(w, t0, t1)?
    } else {
        None
    };
    let Some((omega_c, speed)) = probe else {
        return Ok(SpectralCount {
            n: 0.0,
            error_estimate: 0.0,
            omega_max: 0.0,
            directions: 0,
            spectrum: Vec::new(),
        });
    };

    let omega_max = opts.omega_max.unwrap_or(8.0 * omega_c / (1.0 - speed));
    let dt_target = PI / (4.0 * omega_max);
    let steps = ((t1 - t0) / dt_target).ceil().max(2.0) as usize;
    let dt = (t1 - t0) / steps as f64;
    let events: Vec<_> = (0..=steps)
        .map(|k| w.state(t0 + dt * k as f64))
        .collect::<Result<_>>()?;
    let extent = events
        .iter()
        .map(|e| (e.position - events[0].position).norm())
        .fold(0.0, f64::max);
    let span = (t1 - t0) + 2.0 * extent;
    let mut bins = (omega_max * 4.0 * span / PI).ceil() as usize;
    bins += bins % 2;
    let d_omega = omega_max / bins as f64;

    let polar = gauss_legendre(opts.polar);
    let directions: Vec<(Vec3, f64)> = polar
        .iter()
        .flat_map(|&(mu, wmu)| {
            let rho = (1.0 - mu * mu).sqrt();
            (0..opts.azimuthal).map(move |j| {
                let phi = 2.0 * PI * j as f64 / opts.azimuthal as f64;
                let n = Vec3::new(rho * phi.cos(), rho * phi.sin(), mu);
                (n, wmu * 2.0 * PI / opts.azimuthal as f64)
            })
        })
        .collect();

    // per direction: weight × |J(ω_m)|² for every frequency bin
    let per_direction: Vec<Vec<f64>> = directions
        .par_iter()
        .map(|(n, weight)| {
            let samples: Vec<Sample> = events
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    let end = if k == 0 || k == steps { 0.5 } else { 1.0 };
                    let doppler = 1.0 - n.dot(&e.velocity);
                    let source = n.cross(&(n - e.velocity).cross(&e.acceleration))
                        * (end * dt / (doppler * doppler));
                    Sample {
                        phase: e.t - n.dot(&e.position),
                        source,
                    }
                })
                .collect();
            let mut rotor: Vec<(f64, f64)> = vec![(1.0, 0.0); samples.len()];
            let step: Vec<(f64, f64)> = samples
                .iter()
                .map(|s| {
                    let (sin, cos) = (d_omega * s.phase).sin_cos();
                    (cos, sin)
                })
                .collect();
            let mut out = Vec::with_capacity(bins + 1);
            for m in 0..=bins {
                if m % 64 == 0 && m > 0 {
                    // re-anchor the phasors to keep rounding from accumulating
                    let omega = d_omega * m as f64;
                    for (z, s) in rotor.iter_mut().zip(&samples) {
                        let (sin, cos) = (omega * s.phase).sin_cos();
                        *z = (cos, sin);
                    }
                }
                let mut re = Vec3::zeros();
                let mut im = Vec3::zeros();
                for (z, s) in rotor.iter().zip(&samples) {
                    re += s.source * z.0;
                    im += s.source * z.1;
                }
                out.push(weight * (re.norm_squared() + im.norm_squared()));
                for (z, r) in rotor.iter_mut().zip(&step) {
                    *z = (z.0 * r.0 - z.1 * r.1, z.0 * r.1 + z.1 * r.0);
                }
            }
            out
        })
        .collect();

    let mut column = vec![0.0; per_direction.len()];
    let spectrum: Vec<SpectrumPoint> = (0..=bins)
        .map(|m| {
            for (c, d) in column.iter_mut().zip(&per_direction) {
                *c = d[m];
            }
            let omega = d_omega * m as f64;
            let energy = ALPHA / (4.0 * PI * PI) * pairwise_sum(&column);
            let number = if m == 0 { 0.0 } else { energy / omega };
            SpectrumPoint {
                omega,
                energy,
                number,
            }
        })
        .collect();

    let peak = spectrum.iter().map(|p| p.energy).fold(0.0, f64::max);
    let ratio = spectrum[0].energy / peak;
    if ratio > opts.infrared_ratio {
        return Err(Error::InfraredSpectrum(ratio));
    }

    let simpson: Vec<f64> = spectrum
        .iter()
        .enumerate()
        .map(|(m, p)| {
            let c = if m == 0 || m == bins {
                1.0
            } else if m % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * p.number
        })
        .collect();
    let trapezoid: Vec<f64> = spectrum
        .iter()
        .enumerate()
        .map(|(m, p)| if m == 0 || m == bins { 0.5 } else { 1.0 } * p.number)
        .collect();
    let n = d_omega / 3.0 * pairwise_sum(&simpson);
    let n_trap = d_omega * pairwise_sum(&trapezoid);

    Ok(SpectralCount {
        n,
        error_estimate: (n - n_trap).abs(),
        omega_max,
        directions: directions.len(),
        spectrum,
    })
}

/// Writes `omega,dE_domega,dN_domega` rows.
pub fn write_spectrum_csv<W: Write>(spectrum: &[SpectrumPoint], mut out: W) -> Result<()> {
    writeln!(out, "omega,dE_domega,dN_domega")?;
    for p in spectrum {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", p.omega, p.energy, p.number)?;
    }
    Ok(())
}
