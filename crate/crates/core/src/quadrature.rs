//! Product trapezoid rules for symmetric double integrals `∫∫ K(s, u) ds du`.
//!
//! Two layouts are supported: a uniform periodic grid on `[0, 2π)` (optionally
//! offset by half a step, for integrands that cannot be sampled at `s = 0`) and
//! a uniform window `[c - L, c + L]` with trapezoid end weights. Rows of the
//! grid are summed in parallel, each row and the list of row sums with
//! [`pairwise_sum`], so the result does not depend on the number of threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::PERIOD;
use crate::error::Result;
use crate::sum::pairwise_sum;

/// Increments below this magnitude count as converged even when the value
/// itself is zero (straight lines, inertial worldlines).
pub const ABSOLUTE_FLOOR: f64 = 1e-13;

/// A symmetric kernel sampled through per-parameter points.
pub trait PairIntegrand: Sync {
    type Point: Send + Sync;

    fn point(&self, s: f64) -> Result<Self::Point>;

    /// Kernel value for two points of the grid at distinct parameters.
    fn pair(&self, a: &Self::Point, b: &Self::Point) -> Result<f64>;

    /// Kernel value on the diagonal.
    fn diagonal(&self, a: &Self::Point) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceEntry {
    /// Points per period (periodic grids) or intervals across the window.
    pub grid: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub grid_size: usize,
    pub converged: bool,
    pub trace: Vec<TraceEntry>,
    /// Final half-width `L` of the window (windowed integrals only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    /// Estimated contribution from outside the window, already added to
    /// `value`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_estimate: Option<f64>,
}

fn settled(delta: f64, value: f64, tol: f64) -> bool {
    delta.abs() <= tol * value.abs() || delta.abs() <= ABSOLUTE_FLOOR
}

/// `Σ_{i ≤ j, include(i, j)} m_ij w_i w_j K(p_i, p_j)` with `m_ij = 2` off the
/// diagonal. `weights = None` means unit weights.
fn grid_sum<I, F>(f: &I, points: &[I::Point], weights: Option<&[f64]>, include: F) -> Result<f64>
where
    I: PairIntegrand,
    F: Fn(usize, usize) -> bool + Sync,
{
    let n = points.len();
    let weight = |i: usize| weights.map_or(1.0, |w| w[i]);
    let rows: Result<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::with_capacity(n - i);
            if include(i, i) {
                row.push(weight(i) * f.diagonal(&points[i]));
            }
            for j in i + 1..n {
                if include(i, j) {
                    row.push(2.0 * weight(j) * f.pair(&points[i], &points[j])?);
                }
            }
            Ok(weight(i) * pairwise_sum(&row))
        })
        .collect();
    Ok(pairwise_sum(&rows?))
}

fn sample<I: PairIntegrand>(f: &I, params: &[f64]) -> Result<Vec<I::Point>> {
    params.par_iter().map(|&s| f.point(s)).collect()
}

fn periodic_params(n: usize, offset: bool) -> Vec<f64> {
    let shift = if offset { 0.5 } else { 0.0 };
    (0..n)
        .map(|k| PERIOD * (k as f64 + shift) / n as f64)
        .collect()
}

/// Single periodic trapezoid evaluation on `n` points per period.
pub fn periodic_sum<I: PairIntegrand>(f: &I, n: usize, offset: bool) -> Result<f64> {
    let points = sample(f, &periodic_params(n, offset))?;
    let h = PERIOD / n as f64;
    Ok(h * h * grid_sum(f, &points, None, |_, _| true)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicOptions {
    /// Relative change between successive doublings that counts as converged.
    pub tol: f64,
    pub min_grid: usize,
    pub max_grid: usize,
    /// Sample at `(k + 1/2) h` instead of `k h`.
    pub offset: bool,
}

/// Periodic trapezoid with grid doubling from `min_grid` until two successive
/// values agree to `tol`. Unshifted grids are nested, so each doubling only
/// evaluates pairs involving new points.
pub fn integrate_periodic<I: PairIntegrand>(f: &I, opts: &PeriodicOptions) -> Result<QuadratureResult> {
    let mut n = opts.min_grid.max(2);
    let mut trace = Vec::new();
    let mut points = sample(f, &periodic_params(n, opts.offset))?;
    let mut sum = grid_sum(f, &points, None, |_, _| true)?;
    let step = |n: usize| PERIOD / n as f64;
    let mut value = sum * step(n) * step(n);
    trace.push(TraceEntry {
        grid: n,
        window: None,
        value,
    });
    let mut delta = f64::INFINITY;
    let mut converged = false;

    while n * 2 <= opts.max_grid {
        n *= 2;
        if opts.offset {
            points = sample(f, &periodic_params(n, true))?;
            sum = grid_sum(f, &points, None, |_, _| true)?;
        } else {
            let fresh = sample(
                f,
                &(0..n / 2)
                    .map(|k| PERIOD * (2 * k + 1) as f64 / n as f64)
                    .collect::<Vec<_>>(),
            )?;
            points = interleave(points, fresh);
            sum += grid_sum(f, &points, None, |i, j| i % 2 == 1 || j % 2 == 1)?;
        }
        let next = sum * step(n) * step(n);
        delta = next - value;
        value = next;
        trace.push(TraceEntry {
            grid: n,
            window: None,
            value,
        });
        if settled(delta, value, opts.tol) {
            converged = true;
            break;
        }
    }

    Ok(QuadratureResult {
        value,
        error_estimate: if delta.is_finite() { delta.abs() } else { f64::INFINITY },
        grid_size: n,
        converged,
        trace,
        window: None,
        tail_estimate: None,
    })
}

fn interleave<T>(even: Vec<T>, odd: Vec<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(even.len() + odd.len());
    let mut even = even.into_iter();
    for o in odd {
        out.extend(even.next());
        out.push(o);
    }
    out.extend(even);
    out
}

fn window_params(center: f64, half_width: f64, intervals: usize) -> Vec<f64> {
    let h = 2.0 * half_width / intervals as f64;
    (0..=intervals)
        .map(|k| center - half_width + h * k as f64)
        .collect()
}

fn end_weights(len: usize) -> Vec<f64> {
    let mut w = vec![1.0; len];
    w[0] = 0.5;
    w[len - 1] = 0.5;
    w
}

/// Single trapezoid evaluation over `[center - L, center + L]²` with
/// `intervals` steps per side.
pub fn window_sum<I: PairIntegrand>(f: &I, center: f64, half_width: f64, intervals: usize) -> Result<f64> {
    let points = sample(f, &window_params(center, half_width, intervals))?;
    let h = 2.0 * half_width / intervals as f64;
    let w = end_weights(points.len());
    Ok(h * h * grid_sum(f, &points, Some(&w), |_, _| true)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowOptions {
    pub tol: f64,
    pub center: f64,
    /// Starting half-width `L₀`.
    pub initial: f64,
    /// Largest half-width tried.
    pub max: f64,
    /// Intervals across the starting window before refinement.
    pub min_intervals: usize,
    /// Cap on intervals across any window.
    pub max_intervals: usize,
    /// The tail beyond `L` is assumed to decay like `L^-p`.
    pub tail_exponent: i32,
}

/// Windowed trapezoid on an unbounded parameter line.
///
/// First the step is halved on `[c - L₀, c + L₀]` until the value settles,
/// then the window is doubled at that step. Each doubling yields a
/// Richardson estimate `V_L + (V_L - V_{L/2}) / (2^p - 1)` of the infinite
/// window; the run converges when the raw increment or two successive
/// estimates agree to `tol`.
pub fn integrate_window<I: PairIntegrand>(f: &I, opts: &WindowOptions) -> Result<QuadratureResult> {
    let mut trace = Vec::new();
    let mut half = opts.initial;
    let mut intervals = opts.min_intervals.max(2);
    let mut points = sample(f, &window_params(opts.center, half, intervals))?;
    let mut weights = end_weights(points.len());
    let mut sum = grid_sum(f, &points, Some(&weights), |_, _| true)?;
    let h_of = |half: f64, intervals: usize| 2.0 * half / intervals as f64;
    let mut value = sum * h_of(half, intervals).powi(2);
    trace.push(TraceEntry {
        grid: intervals,
        window: Some(half),
        value,
    });

    let mut resolved = false;
    while intervals * 2 <= opts.max_intervals {
        intervals *= 2;
        let h = h_of(half, intervals);
        let fresh: Vec<f64> = (0..intervals / 2)
            .map(|k| opts.center - half + h * (2 * k + 1) as f64)
            .collect();
        points = interleave(points, sample(f, &fresh)?);
        weights = end_weights(points.len());
        // the old endpoints stay endpoints, so old pairs keep their weights
        sum += grid_sum(f, &points, Some(&weights), |i, j| i % 2 == 1 || j % 2 == 1)?;
        let next = sum * h * h;
        let delta = next - value;
        value = next;
        trace.push(TraceEntry {
            grid: intervals,
            window: Some(half),
            value,
        });
        if settled(delta, value, opts.tol) {
            resolved = true;
            break;
        }
    }

    let h = h_of(half, intervals);
    let factor = 2f64.powi(opts.tail_exponent) - 1.0;
    let mut raw = value;
    let mut estimate = value;
    let mut increments: Vec<f64> = Vec::new();
    let mut error = f64::INFINITY;
    let mut converged = false;
    while half * 2.0 <= opts.max * (1.0 + 1e-12) {
        let n = ((4.0 * half / h).round() as usize).max(2);
        if n > opts.max_intervals {
            break;
        }
        half *= 2.0;
        let next_raw = window_sum(f, opts.center, half, n)?;
        let delta = next_raw - raw;
        let next_estimate = next_raw + delta / factor;
        trace.push(TraceEntry {
            grid: n,
            window: Some(half),
            value: next_raw,
        });
        intervals = n;
        let first = increments.is_empty();
        increments.push(delta);
        let change = if first { delta } else { next_estimate - estimate };
        raw = next_raw;
        estimate = next_estimate;
        error = change.abs().max(delta.abs() / factor);
        if settled(delta, raw, opts.tol) {
            estimate = raw + delta / factor;
            error = delta.abs();
            converged = true;
            break;
        }
        if !first && settled(change, estimate, opts.tol) {
            converged = true;
            break;
        }
        let k = increments.len();
        if k >= 2 && increments[k - 1].abs() > increments[k - 2].abs() {
            // the tail is not shrinking
            break;
        }
    }

    let tail = estimate - raw;
    Ok(QuadratureResult {
        value: estimate,
        error_estimate: error,
        grid_size: intervals,
        converged: converged && resolved,
        trace,
        window: Some(half),
        tail_estimate: Some(tail),
    })
}
