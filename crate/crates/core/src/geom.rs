//! Small geometric helpers shared by the curve and worldline models.

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// A point or vector as written in spec documents: 2 or 3 finite coordinates.
///
/// Internally everything is evaluated in three dimensions; planar inputs get
/// `z = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Coords(Vec<f64>);

impl Coords {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::try_from(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn to_vec3(&self) -> Vec3 {
        let z = self.0.get(2).copied().unwrap_or(0.0);
        Vec3::new(self.0[0], self.0[1], z)
    }

    /// Drops the `z` component when `dim == 2`.
    pub fn from_vec3(v: &Vec3, dim: usize) -> Self {
        Coords(v.iter().take(dim).copied().collect())
    }

    pub fn origin(dim: usize) -> Self {
        Coords(vec![0.0; dim])
    }
}

impl TryFrom<Vec<f64>> for Coords {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        if values.len() != 2 && values.len() != 3 {
            return Err(Error::spec(
                "coordinates",
                format!("expected 2 or 3 components, got {}", values.len()),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::spec("coordinates", "components must be finite"));
        }
        Ok(Coords(values))
    }
}

impl From<Coords> for Vec<f64> {
    fn from(c: Coords) -> Self {
        c.0
    }
}

impl From<[f64; 2]> for Coords {
    fn from(v: [f64; 2]) -> Self {
        Coords(v.to_vec())
    }
}

impl From<[f64; 3]> for Coords {
    fn from(v: [f64; 3]) -> Self {
        Coords(v.to_vec())
    }
}

/// Rotation by `angle` radians about `axis` (the `z` axis when `None`).
pub fn rotation(angle: f64, axis: Option<&Coords>) -> Result<Matrix3<f64>> {
    let axis = axis.map(Coords::to_vec3).unwrap_or_else(Vec3::z);
    let norm = axis.norm();
    if norm == 0.0 {
        return Err(Error::spec("axis", "rotation axis must be nonzero"));
    }
    let axis = Unit::new_normalize(axis);
    Ok(*Rotation3::from_axis_angle(&axis, angle).matrix())
}

/// Angle between two nonzero vectors, accurate for nearly parallel inputs.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_reject_bad_lengths() {
        assert!(Coords::new(vec![1.0]).is_err());
        assert!(Coords::new(vec![1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(Coords::new(vec![1.0, f64::NAN]).is_err());
        assert_eq!(Coords::from([1.0, 2.0]).to_vec3(), Vec3::new(1.0, 2.0, 0.0));
    }

    #[test]
    fn small_angles_are_resolved() {
        let a = Vec3::new(1.0, 0.0, 0.0);
        let b = Vec3::new(1.0, 1e-9, 0.0);
        assert!((angle_between(&a, &b) - 1e-9).abs() < 1e-20);
    }
}
