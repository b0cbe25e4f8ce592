use serde::{Deserialize, Serialize};

use super::CurveSample;
use crate::error::{Error, Result};
use crate::geom::{Coords, Vec3};

/// Closed curve `x(s) = Σ_{k=1..M} a_k cos ks + b_k sin ks`.
///
/// There is no constant term, so the parameter-mean of the curve sits at the
/// origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierLoop {
    pub a: Vec<Coords>,
    pub b: Vec<Coords>,
}

impl FourierLoop {
    pub fn new(a: Vec<Coords>, b: Vec<Coords>) -> Self {
        FourierLoop { a, b }
    }

    /// Unit circle padded with zero harmonics up to `harmonics`.
    pub fn circle(harmonics: usize) -> Self {
        Self::ellipse(harmonics, 1.0, 0.0)
    }

    /// Ellipse with semi-major axis `a` along `x`, padded to `harmonics`.
    pub fn ellipse(harmonics: usize, a: f64, ecc: f64) -> Self {
        let mut flat = vec![0.0; 4 * harmonics.max(1)];
        flat[0] = a;
        flat[3] = a * (1.0 - ecc * ecc).sqrt();
        Self::from_flat(&flat)
    }

    pub fn harmonics(&self) -> usize {
        self.a.len()
    }

    pub fn dimension(&self) -> usize {
        self.a.first().map_or(2, Coords::dim)
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.a.is_empty() {
            return Err(Error::spec("a", "at least one harmonic is required"));
        }
        if self.a.len() != self.b.len() {
            return Err(Error::spec(
                "b",
                format!("expected {} harmonics to match `a`, got {}", self.a.len(), self.b.len()),
            ));
        }
        let dim = self.dimension();
        if self.a.iter().chain(&self.b).any(|c| c.dim() != dim) {
            return Err(Error::spec("b", "all coefficients must share one dimension"));
        }
        Ok(())
    }

    pub(crate) fn eval(&self, s: f64) -> CurveSample {
        let mut position = Vec3::zeros();
        let mut velocity = Vec3::zeros();
        let mut acceleration = Vec3::zeros();
        for (idx, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            let k = (idx + 1) as f64;
            let (sin, cos) = (k * s).sin_cos();
            let (a, b) = (a.to_vec3(), b.to_vec3());
            position += a * cos + b * sin;
            velocity += (b * cos - a * sin) * k;
            acceleration -= (a * cos + b * sin) * (k * k);
        }
        CurveSample {
            position,
            velocity,
            acceleration,
        }
    }

    /// Planar coefficients flattened as `[a1x, a1y, b1x, b1y, a2x, ...]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .flat_map(|(a, b)| {
                let (a, b) = (a.to_vec3(), b.to_vec3());
                [a.x, a.y, b.x, b.y]
            })
            .collect()
    }

    /// Inverse of [`FourierLoop::to_flat`]; `flat.len()` must be a multiple of 4.
    pub fn from_flat(flat: &[f64]) -> Self {
        assert!(flat.len().is_multiple_of(4) && !flat.is_empty(), "flat length must be 4M");
        let (a, b) = flat
            .chunks_exact(4)
            .map(|c| (Coords::from([c[0], c[1]]), Coords::from([c[2], c[3]])))
            .unzip();
        FourierLoop { a, b }
    }
}
