//! Curves given as sample points: a periodic cubic spline through points on
//! a circle approaches 2π² as the sampling gets finer.
//!
//! ```bash
//! cargo run --example spline_fit
//! ```

use std::f64::consts::TAU;

use curvn::curve::fit_spline;
use curvn::geom::Coords;
use curvn::kernel::{curve_number_closed, ClosedOptions};
use curvn::CIRCLE_NUMBER;

fn main() -> curvn::Result<()> {
    for m in [8, 16, 32, 64, 128] {
        let points: Vec<Coords> = (0..m)
            .map(|k| {
                let t = TAU * k as f64 / m as f64;
                Coords::from([t.cos(), t.sin()])
            })
            .collect();
        let spline = fit_spline(&points, true)?;
        let n = curve_number_closed(&spline, &ClosedOptions::default())?.value;
        println!("{m:>4} points: n = {n:.10}  error {:.2e}", n - CIRCLE_NUMBER);
    }
    Ok(())
}
