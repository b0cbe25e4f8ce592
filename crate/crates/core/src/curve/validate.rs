use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{CurveSpec, OpenDomain, Topology, PERIOD};
use crate::error::Result;
use crate::geom::{angle_between, Vec3};

/// Sample count for regularity and simpleness checks.
pub const VALIDATION_SAMPLES: usize = 2048;
/// Maximum angle (radians) between the asymptotic tangents of an open curve.
pub const DIRECTION_TOLERANCE: f64 = 1e-6;
/// Distinct points closer than this fraction of the diameter count as a
/// self-intersection.
pub const PROXIMITY_FLOOR: f64 = 1e-3;

const SEAM_STEP: f64 = 1e-5;
const PUNCTURE_PROBE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of [`validate`]: one entry per check, plus the sampled diameter
/// (absent for punctured open curves, which are unbounded).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed: Vec<_> = self.checks.iter().filter(|c| !c.passed).collect();
        if failed.is_empty() {
            return write!(f, "all checks passed");
        }
        for (i, c) in failed.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} failed ({})", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Runs the regularity, seam-smoothness (closed), asymptote-direction (open)
/// and simpleness checks. Never fails; failures are recorded in the report.
pub fn validate(curve: &CurveSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let topology = curve.topology();
    let params = curve.sample_parameters(VALIDATION_SAMPLES);

    let samples: Result<Vec<_>> = params.par_iter().map(|&s| curve.evaluate(s)).collect();
    let positions = match samples {
        Ok(samples) => {
            let speeds = samples.iter().map(|c| c.speed());
            let (min, max) = speeds.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
            report.push(
                "regularity",
                min > 1e-12 * max && min > 0.0,
                format!("speed range [{min:e}, {max:e}]"),
            );
            Some(samples.into_iter().map(|c| c.position).collect::<Vec<_>>())
        }
        Err(e) => {
            report.push("regularity", false, format!("evaluation failed: {e}"));
            None
        }
    };

    match topology {
        Topology::Closed { .. } => {
            let (passed, detail) = seam_check(curve);
            report.push("seam-smoothness", passed, detail);
        }
        Topology::Open(domain) => {
            let (passed, detail) = asymptote_check(curve, domain);
            report.push("asymptote-direction", passed, detail);
        }
    }

    let scan = match (&positions, topology) {
        (Some(p), Topology::Closed { .. } | Topology::Open(OpenDomain::Unbounded { .. })) => {
            Some(proximity_scan(p, topology.is_closed()))
        }
        _ => None,
    };
    report.diameter = scan.map(|s| s.diameter);

    let (passed, detail) = match simpleness_source(curve) {
        Some(source) => {
            let inner = validate(source);
            let c = inner.check("simpleness").expect("simpleness is always checked");
            (c.passed, format!("inherited from source curve: {}", c.detail))
        }
        None => match scan {
            Some(scan) => scan.verdict(),
            None => (false, "curve could not be sampled".to_string()),
        },
    };
    report.push("simpleness", passed, detail);
    report
}

/// Inversions and reparameterizations of punctured curves are simple exactly
/// when their source is; their own samples reach out to infinity.
fn simpleness_source(curve: &CurveSpec) -> Option<&CurveSpec> {
    match curve {
        CurveSpec::Inverted(inv) => Some(inv.source()),
        CurveSpec::Transformed(t) if matches!(curve.topology(), Topology::Open(OpenDomain::Punctured)) => {
            Some(&t.source)
        }
        CurveSpec::Reparameterized { source, .. }
            if matches!(curve.topology(), Topology::Open(OpenDomain::Punctured)) =>
        {
            Some(source)
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy)]
struct ProximityScan {
    diameter: f64,
    closest: f64,
    at: (usize, usize),
}

impl ProximityScan {
    fn verdict(&self) -> (bool, String) {
        let ratio = self.closest / self.diameter;
        (
            ratio >= PROXIMITY_FLOOR,
            format!(
                "closest separated samples {} and {} at {:.3e} x diameter",
                self.at.0, self.at.1, ratio
            ),
        )
    }
}

fn proximity_scan(positions: &[Vec3], closed: bool) -> ProximityScan {
    let n = positions.len();
    let min_sep = n / 20;
    let rows: Vec<(f64, f64, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut far: f64 = 0.0;
            let mut near = f64::INFINITY;
            let mut near_j = i;
            for j in i + 1..n {
                let d2 = (positions[i] - positions[j]).norm_squared();
                far = far.max(d2);
                let gap = j - i;
                let sep = if closed { gap.min(n - gap) } else { gap };
                if sep > min_sep && d2 < near {
                    near = d2;
                    near_j = j;
                }
            }
            (far, near, near_j)
        })
        .collect();
    let mut scan = ProximityScan {
        diameter: 0.0,
        closest: f64::INFINITY,
        at: (0, 0),
    };
    for (i, (far, near, j)) in rows.into_iter().enumerate() {
        scan.diameter = scan.diameter.max(far.sqrt());
        if near.sqrt() < scan.closest {
            scan.closest = near.sqrt();
            scan.at = (i, j);
        }
    }
    scan
}

fn seam_check(curve: &CurveSpec) -> (bool, String) {
    let d = SEAM_STEP;
    let probe = |s: f64| curve.evaluate(s);
    let (left, right, ahead) = match (probe(-d), probe(d), probe(3.0 * d)) {
        (Ok(l), Ok(r), Ok(a)) => (l, r, a),
        _ => return (false, "evaluation failed near the seam".into()),
    };
    let orders = [
        ("position", left.position, right.position, ahead.position),
        ("velocity", left.velocity, right.velocity, ahead.velocity),
        (
            "acceleration",
            left.acceleration,
            right.acceleration,
            ahead.acceleration,
        ),
    ];
    for (name, l, r, a) in orders {
        let jump = (r - l).norm();
        let smooth = (a - r).norm();
        if jump > 2.0 * smooth + 1e-9 * (1.0 + r.norm()) {
            return (
                false,
                format!("{name} jumps by {jump:e} across the seam (expected ~{smooth:e})"),
            );
        }
    }
    (true, "x, x', x'' continuous across the seam".into())
}

fn asymptote_check(curve: &CurveSpec, domain: OpenDomain) -> (bool, String) {
    let (lo, hi) = match domain {
        OpenDomain::Unbounded { center, core } => {
            let far = 10.0 * core + 1e3;
            (center - far, center + far)
        }
        OpenDomain::Punctured => (PUNCTURE_PROBE, PERIOD - PUNCTURE_PROBE),
    };
    match (curve.evaluate(lo), curve.evaluate(hi)) {
        (Ok(a), Ok(b)) => {
            let angle = angle_between(&a.velocity, &b.velocity);
            (
                angle <= DIRECTION_TOLERANCE,
                format!("asymptotic tangents differ by {angle:.3e} rad"),
            )
        }
        _ => (false, "evaluation failed far along the curve".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{fit_spline, FourierLoop};
    use crate::geom::Coords;

    #[test]
    fn circle_passes_everything() {
        let r = validate(&CurveSpec::circle(1.0));
        assert!(r.is_ok(), "{r}");
        assert_eq!(r.checks.len(), 3);
        assert!((r.diameter.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bump_and_line_pass() {
        assert!(validate(&CurveSpec::open_bump(1.0, 1.0)).is_ok());
        assert!(validate(&CurveSpec::line([0.0, 1.0], [1.0, 1.0])).is_ok());
    }

    #[test]
    fn tilted_ends_fail_the_asymptote_check() {
        // open spline whose end tangents are 30 degrees apart
        let t = 30f64.to_radians();
        let pts: Vec<Coords> = [
            [-3.0, 0.0],
            [-2.0, 0.0],
            [-1.0, 0.0],
            [0.0, 0.0],
            [t.cos(), t.sin()],
            [2.0 * t.cos(), 2.0 * t.sin()],
            [3.0 * t.cos(), 3.0 * t.sin()],
        ]
        .into_iter()
        .map(Coords::from)
        .collect();
        let curve = fit_spline(&pts, false).unwrap();
        let r = validate(&curve);
        let c = r.check("asymptote-direction").unwrap();
        assert!(!c.passed, "{}", c.detail);
        assert!(r.check("regularity").unwrap().passed);
    }

    #[test]
    fn figure_eight_is_not_simple() {
        // x(s) = (sin s, sin 2s / 2) crosses itself at the origin
        let f = FourierLoop::new(
            vec![[0.0, 0.0].into(), [0.0, 0.0].into()],
            vec![[1.0, 0.0].into(), [0.0, 0.5].into()],
        );
        let r = validate(&CurveSpec::FourierLoop(f));
        assert!(!r.check("simpleness").unwrap().passed);
        assert!(r.check("regularity").unwrap().passed);
    }

    #[test]
    fn figure_eight_detection_agrees_with_dense_sampling() {
        // brute force on a denser grid, independent of the scan above
        let f = FourierLoop::new(
            vec![[0.0, 0.0].into(), [0.0, 0.0].into()],
            vec![[1.0, 0.0].into(), [0.0, 0.5].into()],
        );
        let n = 4000;
        let pts: Vec<Vec3> = (0..n)
            .map(|k| f.eval(PERIOD * k as f64 / n as f64).position)
            .collect();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + n / 20 + 1..n {
                if n - (j - i) > n / 20 {
                    best = best.min((pts[i] - pts[j]).norm());
                }
            }
        }
        assert!(best < 1e-3 * 2.0);
    }

    #[test]
    fn thin_ellipse_is_still_simple() {
        assert!(validate(&CurveSpec::ellipse(1.0, 0.99)).is_ok());
    }

    #[test]
    fn zero_velocity_fails_regularity() {
        // a_1 = 0, b_1 = 0 makes the loop degenerate at every s
        let f = FourierLoop::new(vec![[0.0, 0.0].into()], vec![[0.0, 0.0].into()]);
        let r = validate(&CurveSpec::FourierLoop(f));
        assert!(!r.check("regularity").unwrap().passed);
    }
}
