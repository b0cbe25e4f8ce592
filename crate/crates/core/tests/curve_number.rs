use std::f64::consts::PI;
use std::time::Instant;

use approx::assert_relative_eq;
use curvn::curve::{fit_spline, CurveSpec, FourierLoop};
use curvn::geom::Coords;
use curvn::kernel::{curve_number_closed, curve_number_open, ClosedOptions, Kernel, OpenOptions};
use curvn::cli::{ellipse_table, strictly_increasing, REFERENCE_TABLE};
use curvn::CIRCLE_NUMBER;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn closed(curve: &CurveSpec) -> f64 {
    let r = curve_number_closed(curve, &ClosedOptions::default()).unwrap();
    assert!(r.converged, "{r:?}");
    r.value
}

/// A smooth simple 3-harmonic loop: the unit circle plus small random higher
/// harmonics.
fn random_loop(seed: u64) -> FourierLoop {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat = FourierLoop::circle(3).to_flat();
    for c in flat.iter_mut().skip(4) {
        *c += rng.gen_range(-0.06..0.06);
    }
    FourierLoop::from_flat(&flat)
}

#[test]
fn circle_is_two_pi_squared() {
    let start = Instant::now();
    let r = curve_number_closed(&CurveSpec::circle(1.0), &ClosedOptions::default()).unwrap();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert!(r.grid_size <= 512);
    assert_relative_eq!(r.value, CIRCLE_NUMBER, max_relative = 1e-6);
}

/// `∫₀^{2π}∫₀^{2π} 1/2 ds du` with the kernel constant 1/2 on any circle.
#[test]
fn circles_of_any_radius_and_center() {
    for (c, r) in [([0.0, 0.0], 1.0), ([3.0, -2.0], 0.01), ([-1.0, 5.0], 250.0)] {
        assert_relative_eq!(closed(&CurveSpec::circle_at(c, r)), 2.0 * PI * PI, max_relative = 1e-10);
    }
}

#[test]
fn ellipse_table_matches_published_values() {
    let start = Instant::now();
    let rows = ellipse_table(&ClosedOptions::default()).unwrap();
    assert!(start.elapsed().as_secs_f64() < 30.0);
    assert_eq!(rows.len(), REFERENCE_TABLE.len());
    for row in &rows {
        assert!(row.converged);
        assert!(row.within_tolerance, "{row:?}");
    }
    assert!(strictly_increasing(&rows));
}

#[test]
fn ellipse_values_agree_with_an_independent_dense_sum() {
    // plain O(N²) trapezoid sum written out from the kernel definition
    fn dense(a: f64, b: f64, n: usize) -> f64 {
        let h = 2.0 * PI / n as f64;
        let x = |s: f64| (a * s.cos(), b * s.sin());
        let v = |s: f64| (-a * s.sin(), b * s.cos());
        let mut total = 0.0;
        for i in 0..n {
            let s = i as f64 * h;
            for j in 0..n {
                let u = j as f64 * h;
                total += if i == j {
                    let (vx, vy) = v(s);
                    let speed2 = vx * vx + vy * vy;
                    let k = a * b / speed2.powf(1.5);
                    0.5 * speed2 * k * k
                } else {
                    let (p, q) = (x(s), x(u));
                    let (dx, dy) = (p.0 - q.0, p.1 - q.1);
                    let (v1, v2) = (v(s), v(u));
                    let c1 = v1.0 * dy - v1.1 * dx;
                    let c2 = v2.0 * dy - v2.1 * dx;
                    -2.0 * c1 * c2 / (dx * dx + dy * dy).powi(2)
                };
            }
        }
        total * h * h
    }
    for ecc in [0.3f64, 0.7, 0.9] {
        let b = (1.0 - ecc * ecc).sqrt();
        assert_relative_eq!(closed(&CurveSpec::ellipse(1.0, ecc)), dense(1.0, b, 512), max_relative = 1e-9);
    }
}

#[test]
fn straight_line_gives_zero() {
    for dir in [[1.0, 0.0], [0.3, -2.0]] {
        let r = curve_number_open(&CurveSpec::line([1.0, 2.0], dir), &OpenOptions::default()).unwrap();
        assert!(r.converged);
        assert!(r.value.abs() < 1e-10, "{}", r.value);
    }
    let r = curve_number_open(&CurveSpec::line([0.0, 0.0, 1.0], [1.0, 1.0, 1.0]), &OpenOptions::default()).unwrap();
    assert!(r.value.abs() < 1e-10);
}

#[test]
fn invariance_suite() {
    let curves = [
        CurveSpec::circle(1.0),
        CurveSpec::ellipse(1.0, 0.7),
        CurveSpec::FourierLoop(random_loop(7)),
    ];
    for c in &curves {
        let base = closed(c);
        let variants = [
            c.clone().translated([2.5, -1.0]),
            c.clone().rotated(0.7),
            c.clone().scaled(3.7),
            c.clone().reversed(),
            c.clone().warped(0.3),
        ];
        for v in &variants {
            assert_relative_eq!(closed(v), base, max_relative = 1e-8);
        }
    }
}

#[test]
fn random_loop_in_space_matches_its_plane_version() {
    let lp = random_loop(11);
    let lifted = FourierLoop::new(
        lp.a.iter().map(|c| Coords::new(vec![c.as_slice()[0], c.as_slice()[1], 0.0]).unwrap()).collect(),
        lp.b.iter().map(|c| Coords::new(vec![c.as_slice()[0], c.as_slice()[1], 0.0]).unwrap()).collect(),
    );
    let plane = closed(&CurveSpec::FourierLoop(lp));
    let tilted = CurveSpec::FourierLoop(lifted).rotated_about(0.9, [1.0, 1.0, 0.0]);
    assert_relative_eq!(closed(&tilted), plane, max_relative = 1e-8);
}

/// `K(s - h, s + h)` is even in `h`; two Richardson levels in `h²` remove the
/// `h²` and `h⁴` terms. The limit is compared with `|v|²κ²/2` where `κ` comes
/// from central differences of positions only.
#[test]
fn diagonal_limit_matches_curvature_law() {
    let curves = [
        CurveSpec::circle(1.3),
        CurveSpec::ellipse(1.0, 0.8),
        CurveSpec::FourierLoop(random_loop(3)),
    ];
    for c in &curves {
        let k = Kernel::new(c).unwrap();
        for s in [0.3, 1.1, 2.9, 4.4] {
            let g = |h: f64| k.eval_direct(s - h, s + h).unwrap();
            let h = 0.02;
            let r1 = (4.0 * g(h / 2.0) - g(h)) / 3.0;
            let r2 = (4.0 * g(h / 4.0) - g(h / 2.0)) / 3.0;
            let limit = (16.0 * r2 - r1) / 15.0;

            let e = 1e-4;
            let p = |t: f64| c.evaluate(t).unwrap().position;
            let v = (p(s + e) - p(s - e)) / (2.0 * e);
            let a = (p(s + e) - 2.0 * p(s) + p(s - e)) / (e * e);
            let speed = v.norm();
            let kappa = v.cross(&a).norm() / speed.powi(3);
            let law = 0.5 * speed * speed * kappa * kappa;
            assert!((limit - law).abs() < 1e-6 * law.max(1.0), "{limit} vs {law}");
        }
    }
}

/// Dense windowed trapezoid for the Gaussian bump `y = A exp(-x²/w²)`,
/// written out independently of the library.
fn bump_oracle(amplitude: f64, width: f64, half: f64, n: usize) -> f64 {
    let h = 2.0 * half / n as f64;
    let pts: Vec<_> = (0..=n)
        .map(|k| {
            let x = -half + k as f64 * h;
            let w2 = width * width;
            let f = amplitude * (-x * x / w2).exp();
            let fp = -2.0 * x / w2 * f;
            let fpp = (4.0 * x * x / (w2 * w2) - 2.0 / w2) * f;
            let weight = if k == 0 || k == n { 0.5 } else { 1.0 };
            (x, f, fp, fpp, weight)
        })
        .collect();
    let mut total = 0.0;
    for &(x1, y1, p1, c1, w1) in &pts {
        let mut row = 0.0;
        for &(x2, y2, p2, _, w2) in &pts {
            let value = if x1 == x2 {
                let speed2 = 1.0 + p1 * p1;
                c1 * c1 / (2.0 * speed2 * speed2)
            } else {
                let (dx, dy) = (x1 - x2, y1 - y2);
                let t1 = dy - p1 * dx;
                let t2 = dy - p2 * dx;
                -2.0 * t1 * t2 / (dx * dx + dy * dy).powi(2)
            };
            row += w2 * value;
        }
        total += w1 * row;
    }
    total * h * h
}

#[test]
fn open_bump_matches_dense_window_oracle() {
    let r = curve_number_open(&CurveSpec::open_bump(1.0, 1.0), &OpenOptions::default()).unwrap();
    assert!(r.converged);
    // truncation at L = 128 leaves about 1e-6 of tail
    let oracle = bump_oracle(1.0, 1.0, 128.0, 4096);
    assert_relative_eq!(r.value, oracle, max_relative = 1e-5);
    assert!(r.tail_estimate.unwrap() > 0.0);
}

#[test]
fn open_bump_scales_with_amplitude_squared() {
    let n = |a: f64| curve_number_open(&CurveSpec::open_bump(a, 1.0), &OpenOptions::with_tol(1e-8)).unwrap().value;
    let (small, twice) = (n(0.01), n(0.02));
    assert_relative_eq!(twice / small, 4.0, max_relative = 1e-3);
}

#[test]
fn open_curve_invariances() {
    let bump = CurveSpec::open_bump(0.8, 1.2);
    let base = curve_number_open(&bump, &OpenOptions::with_tol(1e-8)).unwrap().value;
    for v in [
        bump.clone().translated([3.0, 1.0]),
        bump.clone().rotated(1.2),
        bump.clone().scaled(0.4),
        bump.clone().reversed(),
    ] {
        let n = curve_number_open(&v, &OpenOptions::with_tol(1e-8)).unwrap().value;
        assert_relative_eq!(n, base, max_relative = 1e-6);
    }
}

#[test]
fn spline_through_circle_samples_converges() {
    let mut last = f64::INFINITY;
    for m in [16, 32, 64] {
        let pts: Vec<Coords> = (0..m)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / m as f64;
                Coords::from([t.cos(), t.sin()])
            })
            .collect();
        let err = (closed(&fit_spline(&pts, true).unwrap()) - CIRCLE_NUMBER).abs();
        assert!(err < last, "error {err} did not shrink");
        last = err;
    }
    assert!(last / CIRCLE_NUMBER < 1e-5, "{last}");
}

#[test]
fn self_intersecting_curve_is_rejected() {
    let eight = FourierLoop::from_flat(&[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
    let err = curve_number_closed(&CurveSpec::FourierLoop(eight), &ClosedOptions::default()).unwrap_err();
    assert!(err.to_string().contains("simpleness"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ellipse_number_is_rigid_motion_invariant(
        ecc in 0.0..0.8f64,
        angle in -PI..PI,
        dx in -10.0..10.0f64,
        dy in -10.0..10.0f64,
        scale in 0.1..10.0f64,
    ) {
        let e = CurveSpec::ellipse(1.0, ecc);
        let base = closed(&e);
        let moved = closed(&e.rotated(angle).translated([dx, dy]).scaled(scale));
        prop_assert!((moved - base).abs() <= 1e-8 * base);
    }

    #[test]
    fn circle_is_never_beaten_by_an_ellipse(ecc in 0.01..0.95f64) {
        prop_assert!(closed(&CurveSpec::ellipse(1.0, ecc)) > CIRCLE_NUMBER);
    }
}
