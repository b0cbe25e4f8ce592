//! Writes SVG plots of a few curves, captioned with their n.
//!
//! ```bash
//! cargo run --example svg_export -- /tmp/plots
//! ```

use std::path::PathBuf;

use curvn::cli::export_plot;
use curvn::conformal::{invert_curve, InversionMap};
use curvn::curve::CurveSpec;
use curvn::kernel::curve_number;

fn main() -> curvn::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    std::fs::create_dir_all(&dir)?;
    let ellipse = CurveSpec::ellipse(1.0, 0.9);
    let curves = [
        ("ellipse.svg", ellipse.clone()),
        ("bump.svg", CurveSpec::open_bump(1.0, 1.0)),
        (
            "opened_ellipse.svg",
            invert_curve(&ellipse, &InversionMap::new([1.0, 0.0], 1.0)?)?.into(),
        ),
    ];
    for (file, curve) in &curves {
        let n = curve_number(curve, None)?.value;
        let path = dir.join(file);
        std::fs::write(&path, export_plot(curve, Some(n))?)?;
        println!("{} (n = {n:.4})", path.display());
    }
    Ok(())
}
