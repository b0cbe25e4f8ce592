//! Open curves: a straight line has n = 0, a Gaussian bump has a finite n
//! that grows like the amplitude squared for small bumps.
//!
//! ```bash
//! cargo run --example open_curves
//! ```

use curvn::curve::CurveSpec;
use curvn::kernel::{curve_number_open, OpenOptions};

fn main() -> curvn::Result<()> {
    let opts = OpenOptions::default();
    let line = curve_number_open(&CurveSpec::line([0.0, 1.0], [2.0, 1.0]), &opts)?;
    println!("line: n = {:.3e}", line.value);

    for amplitude in [0.01, 0.1, 0.5, 1.0, 2.0] {
        let r = curve_number_open(&CurveSpec::open_bump(amplitude, 1.0), &opts)?;
        println!(
            "bump A = {amplitude:<4} n = {:.10}  n/A^2 = {:.6}  window {:>4}  tail {:.1e}",
            r.value,
            r.value / (amplitude * amplitude),
            r.window.unwrap_or(f64::NAN),
            r.tail_estimate.unwrap_or(0.0)
        );
    }
    Ok(())
}
