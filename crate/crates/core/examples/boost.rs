//! The photon number is the same in every inertial frame.
//!
//! ```bash
//! cargo run --example boost
//! ```

use curvn::minkowski::{boost, photon_number, PhotonOptions, WorldLine};

fn main() -> curvn::Result<()> {
    let w = WorldLine::wiggle(0.01, 1.0, 20.0);
    let opts = PhotonOptions::default();
    let rest = photon_number(&w, &opts)?.n;
    println!("rest frame      n = {rest:.12e}");
    for beta in [[0.5, 0.0, 0.0], [0.0, 0.8, 0.0], [0.6, 0.6, 0.0]] {
        let n = photon_number(&boost(&w, beta)?, &opts)?.n;
        println!("beta {beta:?}  n = {n:.12e}");
    }
    println!("shifted+rotated n = {:.12e}", photon_number(&w.shifted(5.0, [1.0, 2.0, 3.0]).rotated(0.7, [0.0, 0.0, 1.0]), &opts)?.n);
    Ok(())
}
