use serde::{Deserialize, Serialize};

use super::{CurveSample, CurveSpec, OpenDomain, Topology, PERIOD};
use crate::error::{Error, Result};
use crate::geom::{Coords, Vec3};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplineSpec {
    points: Vec<Coords>,
    closed: bool,
}

/// Interpolating C² cubic spline with chord-length knots.
///
/// Closed splines are periodic with knots scaled to `[0, 2π]`. Open splines
/// use natural end conditions and continue as straight lines beyond the first
/// and last knot, which keeps them C² on all of ℝ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SplineSpec", into = "SplineSpec")]
pub struct Spline {
    points: Vec<Coords>,
    closed: bool,
    knots: Vec<f64>,
    values: Vec<Vec3>,
    second: Vec<Vec3>,
}

impl TryFrom<SplineSpec> for Spline {
    type Error = Error;

    fn try_from(spec: SplineSpec) -> Result<Self> {
        Spline::fit(spec.points, spec.closed)
    }
}

impl From<Spline> for SplineSpec {
    fn from(s: Spline) -> Self {
        SplineSpec {
            points: s.points,
            closed: s.closed,
        }
    }
}

/// Fits a C² cubic spline through `points` (periodic when `closed`).
pub fn fit_spline(points: &[Coords], closed: bool) -> Result<CurveSpec> {
    Spline::fit(points.to_vec(), closed).map(CurveSpec::Spline)
}

impl Spline {
    pub fn fit(points: Vec<Coords>, closed: bool) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::Spline(format!(
                "at least 4 points are required, got {}",
                points.len()
            )));
        }
        let dim = points[0].dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::Spline("points must share one dimension".into()));
        }
        let values: Vec<Vec3> = points.iter().map(Coords::to_vec3).collect();
        let n = values.len();
        let segments = if closed { n } else { n - 1 };
        let mut chords = Vec::with_capacity(segments);
        for i in 0..segments {
            let d = (values[(i + 1) % n] - values[i]).norm();
            if d == 0.0 {
                return Err(Error::Spline(format!(
                    "duplicate consecutive points at indices {i} and {}",
                    (i + 1) % n
                )));
            }
            chords.push(d);
        }
        let mut knots = Vec::with_capacity(segments + 1);
        knots.push(0.0);
        for c in &chords {
            knots.push(knots.last().unwrap() + c);
        }
        if closed {
            let total = *knots.last().unwrap();
            for k in &mut knots {
                *k *= PERIOD / total;
            }
            *knots.last_mut().unwrap() = PERIOD;
        }
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let second = if closed {
            periodic_second_derivatives(&values, &h)
        } else {
            natural_second_derivatives(&values, &h)
        };
        Ok(Spline {
            points,
            closed,
            knots,
            values,
            second,
        })
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dimension(&self) -> usize {
        self.points[0].dim()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub(crate) fn topology(&self) -> Topology {
        if self.closed {
            Topology::Closed {
                singular_seam: false,
            }
        } else {
            let (first, last) = (self.knots[0], *self.knots.last().unwrap());
            Topology::Open(OpenDomain::Unbounded {
                center: 0.5 * (first + last),
                core: 0.5 * (last - first),
            })
        }
    }

    fn value(&self, i: usize) -> Vec3 {
        self.values[i % self.values.len()]
    }

    fn second(&self, i: usize) -> Vec3 {
        self.second[i % self.second.len()]
    }

    pub(crate) fn eval(&self, s: f64) -> CurveSample {
        let last = self.knots.len() - 1;
        if !self.closed {
            // straight continuation; natural ends make this C²
            if s < self.knots[0] {
                let end = self.eval_segment(0, self.knots[0]);
                return linear_from(end, s - self.knots[0]);
            }
            if s > self.knots[last] {
                let end = self.eval_segment(last - 1, self.knots[last]);
                return linear_from(end, s - self.knots[last]);
            }
        }
        let i = self
            .knots
            .partition_point(|&k| k <= s)
            .saturating_sub(1)
            .min(last - 1);
        self.eval_segment(i, s)
    }

    fn eval_segment(&self, i: usize, s: f64) -> CurveSample {
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let h = t1 - t0;
        let a = (t1 - s) / h;
        let b = (s - t0) / h;
        let (y0, y1) = (self.value(i), self.value(i + 1));
        let (m0, m1) = (self.second(i), self.second(i + 1));
        CurveSample {
            position: y0 * a
                + y1 * b
                + (m0 * (a * a * a - a) + m1 * (b * b * b - b)) * (h * h / 6.0),
            velocity: (y1 - y0) / h - m0 * ((3.0 * a * a - 1.0) * h / 6.0)
                + m1 * ((3.0 * b * b - 1.0) * h / 6.0),
            acceleration: m0 * a + m1 * b,
        }
    }
}

fn linear_from(end: CurveSample, ds: f64) -> CurveSample {
    CurveSample {
        position: end.position + end.velocity * ds,
        velocity: end.velocity,
        acceleration: Vec3::zeros(),
    }
}

fn rhs(values: &[Vec3], i: usize, prev: usize, next: usize, hp: f64, hn: f64) -> Vec3 {
    ((values[next] - values[i]) / hn - (values[i] - values[prev]) / hp) * 6.0
}

fn natural_second_derivatives(values: &[Vec3], h: &[f64]) -> Vec<Vec3> {
    let n = values.len();
    let m = n - 2;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut d = vec![Vec3::zeros(); m];
    for r in 0..m {
        let i = r + 1;
        sub[r] = h[i - 1];
        diag[r] = 2.0 * (h[i - 1] + h[i]);
        sup[r] = h[i];
        d[r] = rhs(values, i, i - 1, i + 1, h[i - 1], h[i]);
    }
    let inner = solve_tridiagonal(&sub, &diag, &sup, &d);
    let mut out = Vec::with_capacity(n);
    out.push(Vec3::zeros());
    out.extend(inner);
    out.push(Vec3::zeros());
    out
}

fn periodic_second_derivatives(values: &[Vec3], h: &[f64]) -> Vec<Vec3> {
    let n = values.len();
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut d = vec![Vec3::zeros(); n];
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let hp = h[prev];
        let hn = h[i];
        sub[i] = hp;
        diag[i] = 2.0 * (hp + hn);
        sup[i] = hn;
        d[i] = rhs(values, i, prev, (i + 1) % n, hp, hn);
    }
    solve_cyclic(&sub, &diag, &sup, &d)
}

/// Thomas algorithm; `sub[0]` and `sup[n-1]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], d: &[Vec3]) -> Vec<Vec3> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut x = vec![Vec3::zeros(); n];
    let mut beta = diag[0];
    x[0] = d[0] / beta;
    for i in 1..n {
        c[i] = sup[i - 1] / beta;
        beta = diag[i] - sub[i] * c[i];
        x[i] = (d[i] - x[i - 1] * sub[i]) / beta;
    }
    for i in (0..n - 1).rev() {
        x[i] = x[i] - x[i + 1] * c[i + 1];
    }
    x
}

/// Cyclic tridiagonal solve by Sherman-Morrison; corner entries are
/// `sub[0]` (row 0, column n-1) and `sup[n-1]` (row n-1, column 0).
fn solve_cyclic(sub: &[f64], diag: &[f64], sup: &[f64], d: &[Vec3]) -> Vec<Vec3> {
    let n = diag.len();
    let top_right = sub[0];
    let bottom_left = sup[n - 1];
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] -= gamma;
    bb[n - 1] -= bottom_left * top_right / gamma;
    let x = solve_tridiagonal(sub, &bb, sup, d);
    let mut u = vec![Vec3::zeros(); n];
    u[0] = Vec3::repeat(gamma);
    u[n - 1] = Vec3::repeat(bottom_left);
    let z = solve_tridiagonal(sub, &bb, sup, &u);
    // z is the same for every component; take x-component
    let z: Vec<f64> = z.iter().map(|v| v.x).collect();
    let denom = 1.0 + z[0] + top_right * z[n - 1] / gamma;
    let fact = (x[0] + x[n - 1] * (top_right / gamma)) / denom;
    x.iter()
        .zip(&z)
        .map(|(xi, zi)| xi - fact * *zi)
        .collect()
}
