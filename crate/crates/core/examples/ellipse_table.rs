//! n/2 for ellipses of growing eccentricity next to the published values.
//!
//! ```bash
//! cargo run --example ellipse_table
//! ```

use curvn::cli::{ellipse_table, strictly_increasing};
use curvn::kernel::ClosedOptions;

fn main() -> curvn::Result<()> {
    let rows = ellipse_table(&ClosedOptions::default())?;
    println!("  ecc        n/2  published");
    for r in &rows {
        println!("{:5.2} {:10.6} {:10.2}", r.ecc, r.half_n, r.reference);
    }
    println!("strictly increasing: {}", strictly_increasing(&rows));
    Ok(())
}
