//! The Euclidean transverse-tangent kernel and the curve number.
//!
//! For a curve `x(s)` with velocity `v = x'(s)` and chord `Δ = x(s) - x(u)`,
//!
//! ```text
//! K(s, u) = -2 [v·v' - (v·Δ̂)(v'·Δ̂)] / |Δ|² = -2 (v × Δ)·(v' × Δ) / |Δ|⁴
//! ```
//!
//! and `n = ∫∫ K ds du`. As `u → s` the kernel tends to `|v|² κ² / 2`; the
//! direct formula loses all its digits there, so parameters closer than
//! [`DIAGONAL_SWITCH`] use the limit instead.

use std::io::Write;

use serde::Serialize;

use crate::curve::{validate, CurveSpec, OpenDomain, Topology, PERIOD, PROXIMITY_FLOOR};
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::quadrature::{
    integrate_periodic, integrate_window, periodic_sum, PairIntegrand, PeriodicOptions,
    QuadratureResult, WindowOptions,
};

/// Parameter separation below which the diagonal limit replaces the direct
/// formula.
pub const DIAGONAL_SWITCH: f64 = 1e-4 * PERIOD;

/// Pairs further apart than this in parameter are "well separated"; a
/// vanishing chord between them is a self-intersection.
const SEPARATION: f64 = PERIOD / 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPoint {
    pub s: f64,
    pub u: f64,
    pub value: f64,
}

/// Grid sample of a curve: parameter, position, velocity and diagonal value.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub s: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub diagonal: f64,
}

/// The kernel of one validated curve.
#[derive(Debug, Clone)]
pub struct Kernel<'a> {
    curve: &'a CurveSpec,
    periodic: bool,
    floor: f64,
}

impl<'a> Kernel<'a> {
    /// Validates `curve` and prepares its kernel.
    pub fn new(curve: &'a CurveSpec) -> Result<Self> {
        curve.check_parameters()?;
        let report = validate(curve);
        if !report.is_ok() {
            return Err(Error::Validation(Box::new(report)));
        }
        Ok(Self::unchecked(curve, report.diameter))
    }

    /// Skips validation. `diameter` sets the self-intersection floor; with
    /// `None` only exactly coincident points are rejected.
    pub fn unchecked(curve: &'a CurveSpec, diameter: Option<f64>) -> Self {
        Kernel {
            curve,
            periodic: curve.is_closed(),
            floor: diameter.map_or(0.0, |d| d * PROXIMITY_FLOOR),
        }
    }

    pub fn curve(&self) -> &CurveSpec {
        self.curve
    }

    pub fn node(&self, s: f64) -> Result<Node> {
        let c = self.curve.evaluate(s)?;
        Ok(Node {
            s,
            position: c.position,
            velocity: c.velocity,
            diagonal: c.diagonal_kernel(),
        })
    }

    fn gap(&self, s: f64, u: f64) -> f64 {
        let d = (s - u).abs();
        if self.periodic {
            let d = d.rem_euclid(PERIOD);
            d.min(PERIOD - d)
        } else {
            d
        }
    }

    fn between(&self, a: &Node, b: &Node) -> Result<f64> {
        let delta = a.position - b.position;
        let d2 = delta.norm_squared();
        let gap = self.gap(a.s, b.s);
        if d2 == 0.0 || (gap > SEPARATION && d2.sqrt() < self.floor) {
            return Err(Error::SingularKernel {
                s: a.s,
                u: b.s,
                distance: d2.sqrt(),
            });
        }
        let ta = a.velocity.cross(&delta);
        let tb = b.velocity.cross(&delta);
        Ok(-2.0 * ta.dot(&tb) / (d2 * d2))
    }

    fn combine(&self, a: &Node, b: &Node) -> Result<f64> {
        if self.gap(a.s, b.s) < DIAGONAL_SWITCH {
            Ok(0.5 * (a.diagonal + b.diagonal))
        } else {
            self.between(a, b)
        }
    }

    /// `K(s, u)`, switching to the diagonal limit near `s = u`.
    pub fn eval(&self, s: f64, u: f64) -> Result<f64> {
        self.combine(&self.node(s)?, &self.node(u)?)
    }

    /// The direct formula with no diagonal switch, for probing the limit.
    pub fn eval_direct(&self, s: f64, u: f64) -> Result<f64> {
        self.between(&self.node(s)?, &self.node(u)?)
    }

    /// `K(s, s) = |v|² κ² / 2`.
    pub fn diagonal(&self, s: f64) -> Result<f64> {
        Ok(self.curve.evaluate(s)?.diagonal_kernel())
    }

    pub fn point(&self, s: f64, u: f64) -> Result<KernelPoint> {
        Ok(KernelPoint {
            s,
            u,
            value: self.eval(s, u)?,
        })
    }
}

impl PairIntegrand for Kernel<'_> {
    type Point = Node;

    fn point(&self, s: f64) -> Result<Node> {
        self.node(s)
    }

    fn pair(&self, a: &Node, b: &Node) -> Result<f64> {
        self.combine(a, b)
    }

    fn diagonal(&self, a: &Node) -> f64 {
        a.diagonal
    }
}

/// Validates `curve` and evaluates `K(s, u)`.
pub fn kernel(curve: &CurveSpec, s: f64, u: f64) -> Result<f64> {
    Kernel::new(curve)?.eval(s, u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedOptions {
    pub tol: f64,
    pub min_grid: usize,
    pub max_grid: usize,
}

impl Default for ClosedOptions {
    fn default() -> Self {
        ClosedOptions {
            tol: 1e-8,
            min_grid: 64,
            max_grid: 4096,
        }
    }
}

impl ClosedOptions {
    pub fn with_tol(tol: f64) -> Self {
        ClosedOptions {
            tol,
            ..Self::default()
        }
    }
}

/// Window growth for open curves. The starting half-width is raised to twice
/// the curve's core size when that is larger, and the maximum to four times
/// the start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub initial: f64,
    pub max: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            initial: 8.0,
            max: 128.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenOptions {
    pub tol: f64,
    pub window: TruncationPolicy,
    pub min_intervals: usize,
    pub max_intervals: usize,
    /// Grid limits for punctured curves, which are integrated over their
    /// whole parameter interval.
    pub max_grid: usize,
}

impl Default for OpenOptions {
    fn default() -> Self {
        OpenOptions {
            tol: 1e-6,
            window: TruncationPolicy::default(),
            min_intervals: 64,
            max_intervals: 1 << 14,
            max_grid: 4096,
        }
    }
}

impl OpenOptions {
    pub fn with_tol(tol: f64) -> Self {
        OpenOptions {
            tol,
            ..Self::default()
        }
    }
}

/// `n` for a closed curve by periodic trapezoid with grid doubling.
pub fn curve_number_closed(curve: &CurveSpec, opts: &ClosedOptions) -> Result<QuadratureResult> {
    let Topology::Closed { singular_seam } = curve.topology() else {
        return Err(Error::Topology { expected: "closed" });
    };
    let k = Kernel::new(curve)?;
    integrate_periodic(
        &k,
        &PeriodicOptions {
            tol: opts.tol,
            min_grid: opts.min_grid,
            max_grid: opts.max_grid,
            offset: singular_seam,
        },
    )
}

/// `n` for a closed curve on one fixed grid of `n` points, without
/// validation.
pub fn curve_number_fixed(curve: &CurveSpec, n: usize) -> Result<f64> {
    let Topology::Closed { singular_seam } = curve.topology() else {
        return Err(Error::Topology { expected: "closed" });
    };
    periodic_sum(&Kernel::unchecked(curve, None), n, singular_seam)
}

/// `n` for an open curve.
///
/// Curves on the whole real line are integrated over growing windows (see
/// [`integrate_window`]); the tail beyond the last window is extrapolated
/// assuming `L⁻³` decay, which is what a straight far field produces.
/// Punctured curves are integrated over `(0, 2π)` on a half-offset periodic
/// grid, since their kernel is smooth across the point at infinity.
pub fn curve_number_open(curve: &CurveSpec, opts: &OpenOptions) -> Result<QuadratureResult> {
    let Topology::Open(domain) = curve.topology() else {
        return Err(Error::Topology { expected: "open" });
    };
    let k = Kernel::new(curve)?;
    match domain {
        OpenDomain::Unbounded { center, core } => {
            let initial = opts.window.initial.max(2.0 * core);
            let max = opts.window.max.max(4.0 * initial);
            integrate_window(
                &k,
                &WindowOptions {
                    tol: opts.tol,
                    center,
                    initial,
                    max,
                    min_intervals: opts.min_intervals,
                    max_intervals: opts.max_intervals,
                    tail_exponent: 3,
                },
            )
        }
        OpenDomain::Punctured => integrate_periodic(
            &k,
            &PeriodicOptions {
                tol: opts.tol,
                min_grid: opts.min_intervals,
                max_grid: opts.max_grid,
                offset: true,
            },
        ),
    }
}

/// Dispatches on topology with default options at tolerance `tol`.
pub fn curve_number(curve: &CurveSpec, tol: Option<f64>) -> Result<QuadratureResult> {
    if curve.is_closed() {
        let mut opts = ClosedOptions::default();
        opts.tol = tol.unwrap_or(opts.tol);
        curve_number_closed(curve, &opts)
    } else {
        let mut opts = OpenOptions::default();
        opts.tol = tol.unwrap_or(opts.tol);
        curve_number_open(curve, &opts)
    }
}

/// Kernel values on the `n × n` grid of [`CurveSpec::sample_parameters`].
pub fn kernel_grid(curve: &CurveSpec, n: usize) -> Result<Vec<KernelPoint>> {
    let k = Kernel::new(curve)?;
    let params = curve.sample_parameters(n);
    let nodes: Vec<Node> = params.iter().map(|&s| k.node(s)).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n * n);
    for a in &nodes {
        for b in &nodes {
            out.push(KernelPoint {
                s: a.s,
                u: b.s,
                value: k.combine(a, b)?,
            });
        }
    }
    Ok(out)
}

/// Writes a kernel grid as CSV with header `s,u,K`.
pub fn write_kernel_csv<W: Write>(points: &[KernelPoint], mut out: W) -> Result<()> {
    writeln!(out, "s,u,K")?;
    for p in points {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", p.s, p.u, p.value)?;
    }
    Ok(())
}
