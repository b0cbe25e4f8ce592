//! Gradient descent over Fourier loops: from an ellipse the optimizer walks
//! back to the circle, where n = 2π².
//!
//! ```bash
//! cargo run --release --example minimize_loop
//! ```

use curvn::curve::FourierLoop;
use curvn::optimize::{minimize, OptimizeOptions};
use curvn::CIRCLE_NUMBER;

fn main() -> curvn::Result<()> {
    let start = FourierLoop::ellipse(3, 1.0, 0.7);
    let opts = OptimizeOptions {
        max_iter: 60,
        ..OptimizeOptions::default()
    };
    let (best, trace) = minimize(&start, &opts)?;
    for it in trace.iterations.iter().step_by(5) {
        println!("{:>3}  n = {:.10}  |g| = {:.2e}", it.iteration, it.n, it.gradient_norm);
    }
    println!("termination: {:?}", trace.termination);
    println!("final n - 2pi^2 = {:.3e}", trace.final_n() - CIRCLE_NUMBER);
    println!("final loop: {}", serde_json::to_string(&best).expect("loops serialize"));
    Ok(())
}
