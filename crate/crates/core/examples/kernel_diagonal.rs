//! The kernel near the diagonal: the direct formula tends to |v|²κ²/2 and then
//! loses its digits to cancellation, which is why the limit is used there.
//!
//! ```bash
//! cargo run --example kernel_diagonal
//! ```

use curvn::curve::{CurveSpec, FourierLoop};
use curvn::kernel::Kernel;

fn main() -> curvn::Result<()> {
    let lp = CurveSpec::FourierLoop(FourierLoop::from_flat(&[1.0, 0.0, 0.0, 0.7, 0.1, 0.05, -0.05, 0.1]));
    let k = Kernel::new(&lp)?;
    let s = 0.7;
    println!("limit |v|^2 kappa^2 / 2 = {:.15}", k.diagonal(s)?);
    let mut h = 0.1;
    while h > 1e-9 {
        println!("h = {h:.0e}  K(s - h, s + h) = {:.15}", k.eval_direct(s - h, s + h)?);
        h /= 10.0;
    }
    Ok(())
}
