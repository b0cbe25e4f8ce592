//! Deterministic SVG plots of curves.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::curve::{CurveSpec, OpenDomain, Topology, PERIOD};
use crate::error::Result;
use crate::geom::Vec3;

/// Points sampled along every plotted curve.
pub const PLOT_SAMPLES: usize = 1024;

const SIZE: f64 = 512.0;
const MARGIN: f64 = 32.0;
const CAPTION_HEIGHT: f64 = 40.0;

/// Parameters plotted for `curve`. Punctured curves are cut an eighth of a
/// period away from the point at infinity.
pub fn plot_parameters(curve: &CurveSpec) -> Vec<f64> {
    match curve.topology() {
        Topology::Open(OpenDomain::Punctured) => {
            let (lo, hi) = (PI / 8.0, PERIOD - PI / 8.0);
            (0..PLOT_SAMPLES)
                .map(|k| lo + (hi - lo) * k as f64 / (PLOT_SAMPLES - 1) as f64)
                .collect()
        }
        _ => curve.sample_parameters(PLOT_SAMPLES),
    }
}

/// Maps model coordinates to the drawing area (y up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub min: [f64; 2],
    pub scale: f64,
}

impl Viewport {
    pub fn fit(points: &[Vec3]) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / extent;
        // centre the shorter side
        let pad = [
            0.5 * (extent - (hi[0] - lo[0])),
            0.5 * (extent - (hi[1] - lo[1])),
        ];
        Viewport {
            min: [lo[0] - pad[0], lo[1] - pad[1]],
            scale,
        }
    }

    pub fn to_screen(&self, p: &Vec3) -> (f64, f64) {
        (
            MARGIN + (p.x - self.min[0]) * self.scale,
            SIZE - MARGIN - (p.y - self.min[1]) * self.scale,
        )
    }
}

/// SVG 1.1 document with the curve as a polyline (closed curves as a closed
/// path) projected onto the `xy` plane, captioned `n = <value>`.
pub fn export_plot(curve: &CurveSpec, n: Option<f64>) -> Result<String> {
    let params = plot_parameters(curve);
    let points: Vec<Vec3> = params
        .iter()
        .map(|&s| curve.evaluate(s).map(|c| c.position))
        .collect::<Result<_>>()?;
    let view = Viewport::fit(&points);
    let height = SIZE + CAPTION_HEIGHT;

    let mut path = String::new();
    for (k, p) in points.iter().enumerate() {
        let (x, y) = view.to_screen(p);
        let cmd = if k == 0 { 'M' } else { 'L' };
        write!(path, "{cmd}{x:.3},{y:.3} ").expect("writing to a String");
    }
    if curve.is_closed() {
        path.push('Z');
    } else {
        path.pop();
    }

    let caption = match n {
        Some(n) => format!("n = {n:.4}"),
        None => "n not computed".to_string(),
    };
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{height}\" viewBox=\"0 0 {SIZE} {height}\">"
    )
    .expect("writing to a String");
    writeln!(svg, "  <rect width=\"{SIZE}\" height=\"{height}\" fill=\"white\"/>").expect("writing to a String");
    writeln!(
        svg,
        "  <path d=\"{path}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>"
    )
    .expect("writing to a String");
    writeln!(
        svg,
        "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\">{caption}</text>",
        SIZE / 2.0,
        SIZE + CAPTION_HEIGHT / 2.0
    )
    .expect("writing to a String");
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_plot_points_lie_on_the_circle() {
        let svg = export_plot(&CurveSpec::circle(1.0), Some(crate::CIRCLE_NUMBER)).unwrap();
        assert!(svg.contains("n = 19.7392"));
        let d = svg.split("d=\"").nth(1).unwrap().split('"').next().unwrap();
        let coords: Vec<(f64, f64)> = d
            .split_whitespace()
            .filter(|t| *t != "Z")
            .map(|t| {
                let (x, y) = t[1..].split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect();
        assert_eq!(coords.len(), PLOT_SAMPLES);
        let radius = (SIZE - 2.0 * MARGIN) / 2.0;
        let center = SIZE / 2.0;
        for (x, y) in coords {
            let r = ((x - center).powi(2) + (y - center).powi(2)).sqrt();
            assert!((r - radius).abs() / (SIZE - 2.0 * MARGIN) < 1e-3);
        }
    }

    #[test]
    fn plots_are_deterministic() {
        let c = CurveSpec::ellipse(2.0, 0.7);
        assert_eq!(export_plot(&c, Some(1.0)).unwrap(), export_plot(&c, Some(1.0)).unwrap());
    }
}
