//! Curves and worldlines as JSON documents, as read by the `curvn` binary.
//!
//! ```bash
//! cargo run --example json_specs
//! ```

use curvn::cli::{parse_spec, Document};
use curvn::kernel::curve_number;
use curvn::minkowski::{photon_number, PhotonOptions};

const DOCUMENTS: [&str; 5] = [
    r#"{"kind": "ellipse", "a": 2, "ecc": 0.5}"#,
    r#"{"kind": "transformed", "source": {"kind": "circle", "radius": 1}, "scale": 3, "rotation": 0.5}"#,
    r#"{"kind": "inverted", "source": {"kind": "line", "point": [0, 1], "direction": [1, 0]}, "center": [0, 0]}"#,
    r#"{"kind": "wiggle", "amplitude": 0.01, "omega": 1, "half_width": 20}"#,
    r#"{"kind": "ellipse", "a": 1, "ecc": 1.2}"#,
];

fn main() {
    for text in DOCUMENTS {
        match parse_spec(text) {
            Ok(Document::Curve(c)) => match curve_number(&c, None) {
                Ok(r) => println!("{text}\n  n = {:.10}", r.value),
                Err(e) => println!("{text}\n  error: {e}"),
            },
            Ok(Document::WorldLine(w)) => match photon_number(&w, &PhotonOptions::default()) {
                Ok(c) => println!("{text}\n  photons = {:.6e}", c.n),
                Err(e) => println!("{text}\n  error: {e}"),
            },
            Ok(Document::Job(job)) => println!("{text}\n  job: {:?}", job.command),
            Err(e) => println!("{text}\n  rejected: {e}"),
        }
    }
}
