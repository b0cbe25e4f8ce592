//! Conformal inversion about a point off the curve leaves n unchanged; a line
//! inverted about a point off it becomes a circle and picks up 2π².
//!
//! ```bash
//! cargo run --example inversion
//! ```

use curvn::conformal::{check_inversion_invariance, invert_curve, InversionMap};
use curvn::curve::CurveSpec;
use curvn::kernel::curve_number;

fn main() -> curvn::Result<()> {
    let ellipse = CurveSpec::ellipse(1.0, 0.8);
    let map = InversionMap::new([0.3, 0.1], 1.5)?;
    let report = check_inversion_invariance(&ellipse, &map, 1e-6)?;
    println!(
        "ellipse: n = {:.12}, image n = {:.12}, rel diff {:.1e}",
        report.source.value, report.image.value, report.relative_difference
    );

    let line = CurveSpec::line([0.0, 1.0], [1.0, 0.0]);
    let image: CurveSpec = invert_curve(&line, &InversionMap::new([0.0, 0.0], 1.0)?)?.into();
    let p = image.evaluate(1.0)?.position;
    println!(
        "line y = 1 -> circle through the origin (sample point ({:.4}, {:.4}), distance from (0, 0.5) = {:.6})",
        p.x,
        p.y,
        (p - curvn::geom::Vec3::new(0.0, 0.5, 0.0)).norm()
    );
    println!("image n = {:.10}", curve_number(&image, None)?.value);
    Ok(())
}
