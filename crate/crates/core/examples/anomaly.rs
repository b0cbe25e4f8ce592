//! Inverting a closed curve about one of its own points opens it up, and n
//! drops by exactly 2π² whatever the curve.
//!
//! ```bash
//! cargo run --example anomaly
//! ```

use curvn::conformal::{anomaly_check, InversionMap};
use curvn::curve::{CurveSpec, FourierLoop};

fn main() -> curvn::Result<()> {
    let lobed = CurveSpec::FourierLoop(FourierLoop::from_flat(&[
        1.0, 0.0, 0.0, 0.9, 0.0, 0.05, 0.05, 0.0,
    ]));
    let on_lobed = lobed.evaluate(2.0)?.position;
    let cases = [
        ("circle", CurveSpec::circle(1.0), [1.0, 0.0]),
        ("ellipse", CurveSpec::ellipse(1.0, 0.7), [1.0, 0.0]),
        ("two-harmonic loop", lobed, [on_lobed.x, on_lobed.y]),
    ];
    for (name, curve, center) in cases {
        let r = anomaly_check(&curve, &InversionMap::new(center, 1.0)?, 1e-3)?;
        println!(
            "{name:<18} n_closed = {:.10}  n_open = {:.10}  difference = {:.10}",
            r.closed.value, r.open.value, r.difference
        );
    }
    Ok(())
}
