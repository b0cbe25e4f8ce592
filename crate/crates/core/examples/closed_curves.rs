//! Curve number of closed curves: circles give exactly 2π², every other loop
//! gives more.
//!
//! ```bash
//! cargo run --example closed_curves
//! ```

use curvn::curve::{CurveSpec, FourierLoop};
use curvn::kernel::{curve_number_closed, ClosedOptions};
use curvn::CIRCLE_NUMBER;

fn main() -> curvn::Result<()> {
    let opts = ClosedOptions::default();
    let curves = [
        ("unit circle", CurveSpec::circle(1.0)),
        ("small circle off the origin", CurveSpec::circle_at([4.0, -1.0], 0.05)),
        ("ellipse, ecc 0.6", CurveSpec::ellipse(1.0, 0.6)),
        (
            "three-lobed loop",
            CurveSpec::FourierLoop(FourierLoop::from_flat(&[
                1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.08, 0.0, 0.0, -0.08,
            ])),
        ),
    ];
    println!("2pi^2 = {CIRCLE_NUMBER:.12}");
    for (name, curve) in &curves {
        let r = curve_number_closed(curve, &opts)?;
        println!(
            "{name:<28} n = {:.12}  grid {:>4}  converged {}",
            r.value, r.grid_size, r.converged
        );
    }
    Ok(())
}
