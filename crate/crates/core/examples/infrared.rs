//! A charge whose final velocity differs from its initial one radiates an
//! infinite number of soft photons: the windowed integral keeps growing.
//!
//! ```bash
//! cargo run --example infrared
//! ```

use curvn::minkowski::{photon_number, photon_number_in_window, PhotonOptions, WorldLine};

fn main() -> curvn::Result<()> {
    let kicked = WorldLine::kick(0.01, 1.0);
    let wiggle = WorldLine::wiggle(0.01, 1.0, 1.0);
    println!("     L        kicked        wiggle");
    for half in [4.0, 8.0, 16.0, 32.0, 64.0] {
        println!(
            "{half:6} {:.6e} {:.6e}",
            photon_number_in_window(&kicked, half, 0.05)?,
            photon_number_in_window(&wiggle, half, 0.05)?
        );
    }
    match photon_number(&kicked, &PhotonOptions::default()) {
        Ok(c) => println!("unexpected: {}", c.n),
        Err(e) => println!("kicked: {e}"),
    }
    Ok(())
}
