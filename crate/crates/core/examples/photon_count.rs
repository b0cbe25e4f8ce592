//! Photon number of a wiggling charge, from the position-space double
//! integral and from the radiated spectrum.
//!
//! ```bash
//! cargo run --example photon_count
//! ```

use curvn::minkowski::{photon_number, spectral_photon_number, PhotonOptions, SpectralOptions, WorldLine};

fn main() -> curvn::Result<()> {
    for (amplitude, omega) in [(0.01, 1.0), (0.02, 1.0), (0.01, 3.0)] {
        let w = WorldLine::wiggle(amplitude, omega, 20.0);
        let direct = photon_number(&w, &PhotonOptions::default())?;
        let spectral = spectral_photon_number(&w, &SpectralOptions::default())?;
        println!(
            "a = {amplitude}, omega = {omega}: n = {:.8e} (window {}), spectral n = {:.8e}",
            direct.n,
            direct.quadrature.window.unwrap_or(f64::NAN),
            spectral.n
        );
    }

    let w = WorldLine::wiggle(0.01, 1.0, 20.0);
    let spectrum = spectral_photon_number(&w, &SpectralOptions::default())?.spectrum;
    let peak = spectrum.iter().max_by(|a, b| a.number.total_cmp(&b.number)).expect("non-empty spectrum");
    println!("dN/domega peaks at omega = {:.3}", peak.omega);
    Ok(())
}
