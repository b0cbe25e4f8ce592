use approx::{assert_abs_diff_eq, assert_relative_eq};
use curvn::conformal::{anomaly_check, check_inversion_invariance, invert_curve, invert_point, InversionMap};
use curvn::curve::{CurveSpec, FourierLoop, Topology};
use curvn::geom::Vec3;
use curvn::kernel::curve_number;
use curvn::{Error, CIRCLE_NUMBER};
use proptest::prelude::*;

fn wobbly() -> CurveSpec {
    CurveSpec::FourierLoop(FourierLoop::from_flat(&[
        1.0, 0.0, 0.0, 0.8, 0.05, -0.02, 0.03, 0.04, -0.01, 0.02, 0.0, 0.015,
    ]))
}

#[test]
fn circle_image_points_lie_on_the_predicted_circle() {
    // inversion about the origin with radius R sends the circle (c, r) to
    // the circle with center c R² / (|c|² - r²) and radius r R² / ||c|² - r²|
    let (c, r, big) = (Vec3::new(2.0, 1.0, 0.0), 0.7, 1.5);
    let circle = CurveSpec::circle_at([c.x, c.y], r);
    let image = CurveSpec::from(invert_curve(&circle, &InversionMap::new([0.0, 0.0], big).unwrap()).unwrap());
    let denom = c.norm_squared() - r * r;
    let center = c * (big * big / denom);
    let radius = r * big * big / denom.abs();
    for k in 0..50 {
        let p = image.evaluate(0.1 + 0.12 * k as f64).unwrap().position;
        assert_abs_diff_eq!((p - center).norm(), radius, epsilon = 1e-12);
    }
    let n = curve_number(&image, None).unwrap().value;
    assert_relative_eq!(n, CIRCLE_NUMBER, max_relative = 1e-8);
}

#[test]
fn inversion_is_an_involution() {
    let map = InversionMap::new([0.3, -0.2, 0.1], 2.0).unwrap();
    for p in [Vec3::new(1.0, 2.0, 3.0), Vec3::new(-0.5, 0.0, 0.2)] {
        let back = invert_point(&map, &invert_point(&map, &p).unwrap()).unwrap();
        assert_abs_diff_eq!((back - p).norm(), 0.0, epsilon = 1e-12);
    }
}

#[test]
fn closed_curves_keep_their_number_off_center() {
    let cases = [
        (CurveSpec::ellipse(1.0, 0.7), [0.1, 0.2], 1.0),
        (wobbly(), [2.0, -1.0], 0.5),
        (CurveSpec::circle_at([1.0, 1.0], 0.5), [0.0, 0.0], 3.0),
        (CurveSpec::ellipse(2.0, 0.5), [0.0, 5.0], 1.0),
    ];
    for (curve, center, radius) in cases {
        let report = check_inversion_invariance(&curve, &InversionMap::new(center, radius).unwrap(), 1e-6).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.expected_shift, 0.0);
    }
}

#[test]
fn line_becomes_a_circle_through_the_center() {
    let line = CurveSpec::line([0.0, 1.0], [1.0, 0.0]);
    let image = invert_curve(&line, &InversionMap::new([0.0, 0.0], 1.0).unwrap()).unwrap();
    assert!(matches!(image.topology(), Topology::Closed { singular_seam: true }));
    let n = curve_number(&image.into(), None).unwrap().value;
    assert_relative_eq!(n, CIRCLE_NUMBER, max_relative = 1e-6);
}

/// Closing an open curve adds the anomaly: the image passes through the
/// center and picks up `2π²`.
#[test]
fn open_bump_image_gains_two_pi_squared() {
    let bump = CurveSpec::open_bump(1.0, 1.0);
    let report = check_inversion_invariance(&bump, &InversionMap::new([0.0, -2.0], 1.0).unwrap(), 1e-6).unwrap();
    assert_eq!(report.expected_shift, CIRCLE_NUMBER);
    assert!(report.passed, "{report:?}");
}

#[test]
fn anomaly_is_universal() {
    let loop_point = wobbly().evaluate(1.0).unwrap().position;
    let cases = [
        (CurveSpec::circle(1.0), [1.0, 0.0]),
        (CurveSpec::ellipse(1.0, 0.7), [1.0, 0.0]),
        (CurveSpec::ellipse(1.0, 0.7), [0.0, (1.0f64 - 0.49).sqrt()]),
        (wobbly(), [loop_point.x, loop_point.y]),
    ];
    for (curve, center) in cases {
        let report = anomaly_check(&curve, &InversionMap::new(center, 1.0).unwrap(), 1e-3).unwrap();
        assert!(report.passed, "{report:?}");
    }
}

#[test]
fn circle_through_center_gives_a_line_with_zero_number() {
    let report = anomaly_check(&CurveSpec::circle(1.0), &InversionMap::new([-1.0, 0.0], 2.0).unwrap(), 1e-3).unwrap();
    assert!(report.open.value.abs() < 1e-8, "{}", report.open.value);
}

#[test]
fn wrong_check_for_the_geometry_is_an_error() {
    let circle = CurveSpec::circle(1.0);
    assert!(matches!(
        check_inversion_invariance(&circle, &InversionMap::new([1.0, 0.0], 1.0).unwrap(), 1e-6),
        Err(Error::Inversion(_))
    ));
    assert!(matches!(
        anomaly_check(&circle, &InversionMap::new([0.2, 0.0], 1.0).unwrap(), 1e-3),
        Err(Error::Inversion(_))
    ));
    assert!(InversionMap::new([0.0, 0.0], 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ellipse_number_survives_random_inversions(
        ecc in 0.0..0.8f64,
        cx in 1.5..4.0f64,
        cy in -3.0..3.0f64,
        radius in 0.3..3.0f64,
    ) {
        let e = CurveSpec::ellipse(1.0, ecc);
        let report = check_inversion_invariance(&e, &InversionMap::new([cx, cy], radius).unwrap(), 1e-6).unwrap();
        prop_assert!(report.passed, "{:?}", report.relative_difference);
    }
}

/// The open image integrated from explicitly inverted ellipse points on an
/// offset grid, with no library code beyond the final comparison.
#[test]
fn open_image_number_matches_hand_inverted_points() {
    let (a, b) = (1.0f64, (1.0f64 - 0.49).sqrt());
    let (cx, cy) = (a, 0.0);
    let m = 1024;
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let pts: Vec<[f64; 4]> = (0..m)
        .map(|k| {
            let s = (k as f64 + 0.5) * h;
            let (px, py) = (a * s.cos() - cx, b * s.sin() - cy);
            let (vx, vy) = (-a * s.sin(), b * s.cos());
            let q = px * px + py * py;
            let dot = px * vx + py * vy;
            // y = p / |p|², y' = v / q - 2 p (p·v) / q²
            [px / q, py / q, vx / q - 2.0 * px * dot / (q * q), vy / q - 2.0 * py * dot / (q * q)]
        })
        .collect();
    let mut total = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for (j, r) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let (dx, dy) = (p[0] - r[0], p[1] - r[1]);
            let c1 = p[2] * dy - p[3] * dx;
            let c2 = r[2] * dy - r[3] * dx;
            total += -2.0 * c1 * c2 / (dx * dx + dy * dy).powi(2);
        }
    }
    // the diagonal limit |v|²κ²/2 for the image, from its curvature
    let diag: f64 = (0..m)
        .map(|k| {
            let s = (k as f64 + 0.5) * h;
            let e = 1e-4;
            let y = |t: f64| {
                let (px, py) = (a * t.cos() - cx, b * t.sin() - cy);
                let q = px * px + py * py;
                (px / q, py / q)
            };
            let (p0, pp, pm) = (y(s), y(s + e), y(s - e));
            let v = ((pp.0 - pm.0) / (2.0 * e), (pp.1 - pm.1) / (2.0 * e));
            let acc = ((pp.0 - 2.0 * p0.0 + pm.0) / (e * e), (pp.1 - 2.0 * p0.1 + pm.1) / (e * e));
            let cross = v.0 * acc.1 - v.1 * acc.0;
            let speed2 = v.0 * v.0 + v.1 * v.1;
            0.5 * cross * cross / (speed2 * speed2)
        })
        .sum();
    let hand = (total + diag) * h * h;
    let report = anomaly_check(&CurveSpec::ellipse(1.0, 0.7), &InversionMap::new([cx, cy], 1.0).unwrap(), 1e-3).unwrap();
    assert!((report.open.value - hand).abs() < 1e-6, "{} vs {hand}", report.open.value);
}
