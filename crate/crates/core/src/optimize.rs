//! Gradient descent on `n` over Fourier loops.
//!
//! `n` is invariant under scaling, rotation and shifts of the loop parameter,
//! so those directions are projected out of every gradient and the scale is
//! pinned by renormalizing `|a₁|² + |b₁|²` after each step. The circle is
//! conjectured to be the global minimizer with `n = 2π²`; a run that ends
//! clearly below that is flagged.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{validate, CurveSpec, FourierLoop};
use crate::error::{Error, Result};
use crate::kernel::{curve_number_closed, ClosedOptions, Kernel};
use crate::quadrature::periodic_sum;
use crate::CIRCLE_NUMBER;

/// Objective value assigned to loops that fail validation.
pub const PENALTY: f64 = 1e6;

/// Final values below `2π²` by more than this raise the conjecture flag.
pub const VIOLATION_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Objective {
    pub value: f64,
    /// The loop failed validation and `value` is [`PENALTY`].
    pub penalized: bool,
    /// Grid at which the quadrature converged.
    pub grid: usize,
    #[serde(skip)]
    diameter: f64,
}

/// `n` of the loop at quadrature tolerance `tol`, or the penalty when the
/// loop is not a valid simple regular curve.
pub fn objective(lp: &FourierLoop, tol: f64) -> Result<Objective> {
    let curve = CurveSpec::FourierLoop(lp.clone());
    curve.check_parameters()?;
    let report = validate(&curve);
    if !report.is_ok() {
        log::debug!("penalized loop: {report}");
        return Ok(Objective {
            value: PENALTY,
            penalized: true,
            grid: 0,
            diameter: 0.0,
        });
    }
    let r = curve_number_closed(&curve, &ClosedOptions::with_tol(tol))?;
    Ok(Objective {
        value: r.value,
        penalized: false,
        grid: r.grid_size,
        diameter: report.diameter.unwrap_or(0.0),
    })
}

/// Orthonormal basis of the directions along which `n` is constant: scale,
/// planar rotation and parameter shift.
fn null_directions(x: &[f64]) -> Vec<Vec<f64>> {
    let scale = x.to_vec();
    let mut rotate = vec![0.0; x.len()];
    let mut shift = vec![0.0; x.len()];
    for (k, c) in x.chunks_exact(4).enumerate() {
        let o = 4 * k;
        let kf = (k + 1) as f64;
        rotate[o] = -c[1];
        rotate[o + 1] = c[0];
        rotate[o + 2] = -c[3];
        rotate[o + 3] = c[2];
        shift[o] = kf * c[2];
        shift[o + 1] = kf * c[3];
        shift[o + 2] = -kf * c[0];
        shift[o + 3] = -kf * c[1];
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut v in [scale, rotate, shift] {
        for b in &basis {
            let d = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= d * bi);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-12 {
            v.iter_mut().for_each(|vi| *vi /= norm);
            basis.push(v);
        }
    }
    basis
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Central differences of `n` in every flat coefficient at step `h`, all on
/// one fixed grid of `grid` points so that probes are smooth in the
/// coefficients. Fails with [`Error::Penalty`] if a probe self-intersects.
pub fn raw_gradient(lp: &FourierLoop, h: f64, grid: usize, diameter: Option<f64>) -> Result<Vec<f64>> {
    let x = lp.to_flat();
    let probe = |i: usize, sign: f64| -> Result<f64> {
        let mut y = x.clone();
        y[i] += sign * h;
        let curve = CurveSpec::FourierLoop(FourierLoop::from_flat(&y));
        periodic_sum(&Kernel::unchecked(&curve, diameter), grid, false).map_err(|e| match e {
            Error::SingularKernel { .. } => {
                Error::Penalty(format!("probe {i} self-intersects: {e}"))
            }
            other => other,
        })
    };
    (0..x.len())
        .into_par_iter()
        .map(|i| Ok((probe(i, 1.0)? - probe(i, -1.0)?) / (2.0 * h)))
        .collect()
}

/// [`raw_gradient`] with the scale, rotation and shift directions removed.
pub fn project(lp: &FourierLoop, g: &mut [f64]) {
    for b in null_directions(&lp.to_flat()) {
        let d = dot(g, &b);
        g.iter_mut().zip(&b).for_each(|(gi, bi)| *gi -= d * bi);
    }
}

/// Projected finite-difference gradient of `n` at step `h`, on the grid the
/// objective converges on at tolerance `tol`.
pub fn gradient(lp: &FourierLoop, h: f64, tol: f64) -> Result<Vec<f64>> {
    let f = objective(lp, tol)?;
    if f.penalized {
        return Err(Error::Penalty("loop fails validation".into()));
    }
    let mut g = raw_gradient(lp, h, f.grid, Some(f.diameter))?;
    project(lp, &mut g);
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub max_iter: usize,
    /// Stop when the projected gradient norm falls below this.
    pub gtol: f64,
    /// Finite-difference step.
    pub h: f64,
    /// Quadrature tolerance of every objective evaluation.
    pub tol: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    pub max_backtracks: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            max_iter: 200,
            gtol: 1e-4,
            h: 1e-4,
            tol: 1e-8,
            armijo: 1e-4,
            max_backtracks: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Iteration {
    pub iteration: usize,
    pub coefficients: Vec<f64>,
    pub n: f64,
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    GradientTolerance,
    MaxIterations,
    /// No step along the negative gradient decreased `n`.
    LineSearchFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationTrace {
    pub iterations: Vec<Iteration>,
    pub termination: Termination,
    /// The final `n` is below `2π² - 10⁻³`.
    pub conjecture_violation: bool,
}

impl OptimizationTrace {
    pub fn final_n(&self) -> f64 {
        self.iterations.last().map_or(f64::NAN, |it| it.n)
    }

    /// `n` strictly decreases from each iteration to the next.
    pub fn is_monotone(&self) -> bool {
        self.iterations.windows(2).all(|w| w[1].n < w[0].n)
    }
}

fn normalize(x: &mut [f64], target: f64) {
    let current = x[..4].iter().map(|c| c * c).sum::<f64>();
    let s = (target / current).sqrt();
    x.iter_mut().for_each(|c| *c *= s);
}

/// Steepest descent with Armijo backtracking from `initial`.
pub fn minimize(initial: &FourierLoop, opts: &OptimizeOptions) -> Result<(FourierLoop, OptimizationTrace)> {
    let mut x = initial.to_flat();
    let target = x[..4].iter().map(|c| c * c).sum::<f64>();
    let mut current = FourierLoop::from_flat(&x);
    let mut f = objective(&current, opts.tol)?;
    if f.penalized {
        let report = validate(&CurveSpec::FourierLoop(current));
        return Err(Error::Validation(Box::new(report)));
    }
    let mut iterations = Vec::new();
    let mut step = f64::NAN;
    let mut termination = Termination::MaxIterations;

    for it in 0..=opts.max_iter {
        let mut g = raw_gradient(&current, opts.h, f.grid, Some(f.diameter))?;
        project(&current, &mut g);
        let gn = norm(&g);
        iterations.push(Iteration {
            iteration: it,
            coefficients: x.clone(),
            n: f.value,
            gradient_norm: gn,
        });
        log::debug!("iteration {it}: n = {:.12}, |g| = {gn:.3e}", f.value);
        if gn < opts.gtol {
            termination = Termination::GradientTolerance;
            break;
        }
        if it == opts.max_iter {
            break;
        }
        if !step.is_finite() {
            // first move changes the coefficients by about 5% of their scale
            step = 0.05 * target.sqrt() / gn;
        }
        let mut accepted = None;
        for _ in 0..opts.max_backtracks {
            let mut y: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            normalize(&mut y, target);
            let candidate = FourierLoop::from_flat(&y);
            let fy = objective(&candidate, opts.tol)?;
            if !fy.penalized && fy.value <= f.value - opts.armijo * step * gn * gn && fy.value < f.value {
                accepted = Some((y, candidate, fy));
                break;
            }
            step *= 0.5;
        }
        match accepted {
            Some((y, candidate, fy)) => {
                x = y;
                current = candidate;
                f = fy;
                step *= 2.0;
            }
            None => {
                termination = Termination::LineSearchFailed;
                break;
            }
        }
    }

    let conjecture_violation = f.value < CIRCLE_NUMBER - VIOLATION_MARGIN;
    if conjecture_violation {
        log::error!(
            "CONJECTURE VIOLATION: optimizer reached n = {} < 2π² - {VIOLATION_MARGIN}; coefficients {:?}",
            f.value,
            x
        );
    }
    Ok((
        current,
        OptimizationTrace {
            iterations,
            termination,
            conjecture_violation,
        },
    ))
}

/// Writes `iteration,n,gradient_norm` rows.
pub fn write_trace_csv<W: Write>(trace: &OptimizationTrace, mut out: W) -> Result<()> {
    writeln!(out, "iteration,n,gradient_norm")?;
    for it in &trace.iterations {
        writeln!(out, "{},{:.16e},{:.16e}", it.iteration, it.n, it.gradient_norm)?;
    }
    Ok(())
}
