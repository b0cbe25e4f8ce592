//! n does not change under rigid motions, scaling, reversal or a change of
//! parameterization.
//!
//! ```bash
//! cargo run --example invariances
//! ```

use curvn::curve::CurveSpec;
use curvn::kernel::{curve_number_closed, ClosedOptions};

fn main() -> curvn::Result<()> {
    let opts = ClosedOptions::default();
    let base = CurveSpec::ellipse(1.0, 0.7);
    let n0 = curve_number_closed(&base, &opts)?.value;
    println!("ellipse ecc 0.7: n = {n0:.14}");
    let variants = [
        ("translated", base.clone().translated([3.0, -2.0])),
        ("rotated", base.clone().rotated(1.0)),
        ("scaled x10", base.clone().scaled(10.0)),
        ("reversed", base.clone().reversed()),
        ("warped", base.clone().warped(0.4)),
        ("tilted into 3-D", base.clone().rotated_about(0.8, [1.0, 2.0, 0.5])),
    ];
    for (name, c) in &variants {
        let n = curve_number_closed(c, &opts)?.value;
        println!("{name:<16} n = {n:.14}  rel change {:.1e}", (n - n0).abs() / n0);
    }
    Ok(())
}
