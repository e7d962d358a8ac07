mod common;

use std::f64::consts::PI;

use common::{ball_point, rng, unit_vector};
use proptest::prelude::*;
use rand::Rng;
use willmore_core::canonical::*;
use willmore_core::immersion::{clifford_normal, clifford_point};
use willmore_core::*;

fn clifford(n: usize) -> Immersion {
    Immersion::clifford(TorusGrid::square(n).unwrap())
}

fn perturbed(n: usize) -> Immersion {
    clifford(n)
        .perturb(&PerturbationSpec::new(vec![Mode::normal(2, 0, 0.01)]))
        .unwrap()
}

#[test]
fn hk_area_of_clifford_matches_parallel_tori() {
    let f = clifford(32);
    for k in 0..=70 {
        let t = k as f64 * 0.01;
        let area = canonical_area_hk(&ConformalCenter::origin(), t, &f).unwrap();
        assert!((area - TWO_PI_SQ * (2.0 * t).cos()).abs() <= 1e-6, "t = {t}");
        let neg = canonical_area_hk(&ConformalCenter::origin(), -t, &f).unwrap();
        assert!((neg - area).abs() < 1e-12);
    }
}

#[test]
fn pushforward_area_of_clifford() {
    let f = clifford(32);
    let got = canonical_area_pushforward(&ConformalCenter::origin(), PI / 8.0, &f).unwrap();
    assert!((got - TWO_PI_SQ * (PI / 4.0).cos()).abs() <= 1e-6);
}

#[test]
fn both_routes_agree_at_t_zero() {
    let f = perturbed(64);
    let mut r = rng(5);
    for _ in 0..5 {
        let v = ConformalCenter::new(ball_point(&mut r, 0.5)).unwrap();
        let fine = f.resample(resolving_grid(&v, &f, 512).unwrap()).unwrap();
        let hk = canonical_area_hk(&v, 0.0, &fine).unwrap();
        let push = canonical_area_pushforward(&v, 0.0, &fine).unwrap();
        let direct = SurfaceGeometry::compute(&v.transform(&fine).unwrap()).unwrap().area();
        let pulled = {
            let geom = SurfaceGeometry::compute(&fine).unwrap();
            conformal_image_area(&v, &fine, &geom).unwrap()
        };
        assert!((hk - push).abs() <= 1e-8, "{hk} {push}");
        assert!((hk - direct).abs() <= 1e-10);
        assert!((pulled - direct).abs() <= 1e-8);
    }
}

#[test]
fn routes_agree_for_small_t_on_perturbed_surface() {
    // The pushforward of the base and the normal flow of Sigma_v are the same
    // surface, so their areas agree where no folding happens.
    let f = perturbed(64);
    let v = ConformalCenter::new(Point4::new(0.1, 0.2, -0.1, 0.05)).unwrap();
    let slice = CanonicalSlice::resolved(v, &f, 512).unwrap();
    let fine = f.resample(slice.geometry.grid()).unwrap();
    for t in [0.05, 0.2, 0.4] {
        let push = canonical_area_pushforward(&v, t, &fine).unwrap();
        assert!((slice.area_hk(t) - push).abs() < 1e-6 * push, "t {t}");
    }
}

#[test]
fn small_t_budget_near_the_boundary() {
    let f = perturbed(32);
    let w = SurfaceGeometry::compute(&f).unwrap().willmore_energy();
    let mut r = rng(23);
    for radius in [0.9, 0.95] {
        let v = ConformalCenter::along(&unit_vector(&mut r), radius).unwrap();
        let fine = f.resample(resolving_grid(&v, &f, 512).unwrap()).unwrap();
        let geom = SurfaceGeometry::compute(&fine).unwrap();
        let base = conformal_image_area(&v, &fine, &geom).unwrap();
        for t in [0.01, 0.05, 0.1] {
            let push = canonical_area_pushforward_with(&v, t, &fine, &geom).unwrap();
            assert!(push <= base + 16.0 * w * t.sin().abs() + 1e-4);
        }
    }
}

#[test]
fn hk_area_never_exceeds_willmore_energy() {
    let mut r = rng(29);
    for f in [clifford(32), perturbed(32)] {
        let w = SurfaceGeometry::compute(&f).unwrap().willmore_energy();
        for _ in 0..6 {
            let v = ConformalCenter::new(ball_point(&mut r, 0.9)).unwrap();
            let slice = CanonicalSlice::resolved(v, &f, 512).unwrap();
            for t in uniform_t_grid(16) {
                assert!(slice.area_hk(t) <= w + 1e-6);
            }
            assert!((slice.area_hk(0.0) - slice.geometry.area()).abs() < 1e-10);
        }
    }
}

#[test]
fn parallel_map_algebraic_identity() {
    let mut r = rng(31);
    for _ in 0..500 {
        let v = ConformalCenter::new(ball_point(&mut r, 0.9)).unwrap();
        let x = unit_vector(&mut r);
        let mut n = unit_vector(&mut r);
        n -= x * x.dot(&n);
        let n = n.normalize();
        let t = r.gen_range(-PI..PI);
        let p = parallel_map(&v, t, &x, &n).unwrap();
        let q = v.apply(&x).unwrap() * t.cos() + v.pushforward_normal(&x, &n).unwrap() * t.sin();
        assert!((p - q).norm() <= 1e-10);
        assert!((p.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn clifford_parallel_surfaces_are_product_tori() {
    // cos t f0 + sin t n = (cos(pi/4 + t) a, sin(pi/4 + t) b).
    for t in [0.1, 0.3, PI / 4.0] {
        for (th, ph) in [(0.2, 1.0), (2.0, -0.5)] {
            let p = parallel_map(
                &ConformalCenter::origin(),
                t,
                &clifford_point((th, ph)),
                &clifford_normal((th, ph)),
            )
            .unwrap();
            let r = (PI / 4.0 + t).cos();
            let want = Point4::new(r * th.cos(), r * th.sin(), (PI / 4.0 + t).sin() * ph.cos(), (PI / 4.0 + t).sin() * ph.sin());
            assert!((p - want).norm() < 1e-15);
        }
    }
}

#[test]
fn clifford_sweep_argmax_at_origin() {
    let table = sweep(
        &clifford(32),
        &[0.0, 0.3, 0.6],
        &low_discrepancy_directions(4),
        &uniform_t_grid(16),
        SweepOptions::default(),
    );
    let best = table.argmax.unwrap();
    assert_eq!((best.radius, best.t), (0.0, 0.0));
    assert!((best.area - TWO_PI_SQ).abs() <= 1e-8);
    assert!((table.max_area().unwrap() - best.area).abs() <= 1e-12 * best.area);
    assert!(table.failures.is_empty());
    assert_eq!(table.cells.len(), 3 * 4 * 16);
    let csv = table.to_csv();
    assert!(csv.starts_with("radius,dirIndex,t,area,status\n"));
    assert_eq!(csv.lines().count(), 1 + 3 * 4 * 16);
}

#[test]
fn perturbed_sweep_reaches_two_pi_squared() {
    let table = sweep(
        &perturbed(32),
        &[0.0, 0.3],
        &low_discrepancy_directions(4),
        &uniform_t_grid(16),
        SweepOptions::default(),
    );
    assert!(table.max_area().unwrap() >= TWO_PI_SQ - 1e-6);
}

#[test]
fn sweep_near_boundary_respects_five_pi_on_clifford() {
    let table = sweep(
        &clifford(32),
        &[0.95, 0.99],
        &low_discrepancy_directions(12),
        &uniform_t_grid(32),
        SweepOptions::default(),
    );
    assert!(table.failures.is_empty());
    assert_eq!(table.exceedances().count(), 0);
    assert!(table.max_area().unwrap() <= 5.0 * PI);
}

#[test]
fn sweep_masks_failed_centers() {
    let f = clifford(8);
    let pole = f.points()[0];
    let table = sweep(&f, &[1.0 - 1e-9], &[pole], &[0.0, 0.5], SweepOptions { max_grid: 16 });
    assert_eq!(table.failures.len(), 2);
    assert!(table.cells.iter().all(|c| c.area.is_none()));
    assert!(table.argmax.is_none());
    assert!(table.to_csv().contains(",,failed"));
}

#[test]
fn clifford_is_not_a_sphere() {
    let fit = geodesic_sphere_fit(clifford(32).points()).unwrap();
    // Regression baseline: the cloud spreads evenly over all four axes.
    assert!((fit.rms_residual - 0.5).abs() < 1e-12);
}

#[test]
fn boundary_behavior_on_and_off_the_torus() {
    let base = clifford(64);
    let fine = base.resample(TorusGrid::square(1024).unwrap()).unwrap();
    let geom = SurfaceGeometry::compute(&fine).unwrap();
    let focus = (0.3, 0.7);
    let on = clifford_point(focus);
    let off = Point4::new(0.0, 0.0, 0.0, 1.0);
    let mut prev: Option<(f64, f64)> = None;
    for radius in [0.9, 0.95, 0.99] {
        let v = ConformalCenter::along(&on, radius).unwrap();
        let area = conformal_image_area(&v, &fine, &geom).unwrap();
        let lambda = v.stereographic_frame().lambda;
        let cloud = warped_image_cloud(&v, &base, focus, 1.0 / lambda, 96).unwrap();
        let fit = geodesic_sphere_fit(&cloud).unwrap();
        let hd = hausdorff_distance(&cloud, &fit.sample(4000)).unwrap();
        if let Some((a, h)) = prev {
            assert!(area < a && hd < h, "radius {radius}");
        }
        prev = Some((area, hd));
        if radius == 0.99 {
            assert!((area - 4.0 * PI).abs() <= 0.1 * 4.0 * PI);
            assert!(fit.rms_residual <= 0.05);
        }
        let v_off = ConformalCenter::along(&off, radius).unwrap();
        let collapsed = conformal_image_area(&v_off, &fine, &geom).unwrap();
        if radius == 0.99 {
            assert!(collapsed <= 1.0);
        }
    }
}

#[test]
fn area_comparison_on_clifford_and_perturbed() {
    let pairs: Vec<(f64, f64)> = (1..=10)
        .map(|k| {
            let tau = 0.05 * k as f64;
            (tau, tau + 0.2)
        })
        .collect();
    for f in [clifford(32), perturbed(32)] {
        for v in [ConformalCenter::origin(), ConformalCenter::new(Point4::new(0.2, 0.0, 0.1, -0.1)).unwrap()] {
            let slice = CanonicalSlice::resolved(v, &f, 512).unwrap();
            let rows = area_comparison_with(&slice, &pairs);
            assert!(rows.iter().all(|r| !r.violated), "{rows:?}");
            let same = area_comparison_with(&slice, &[(0.3, 0.3)]);
            assert!((same[0].lhs - same[0].rhs).abs() < 1e-12);
        }
    }
    let explicit = area_comparison_check(&ConformalCenter::origin(), &clifford(16), &[(0.2, 0.4)]).unwrap();
    assert!((explicit[0].lhs - TWO_PI_SQ * 0.8f64.cos()).abs() < 1e-9);
    assert!(!explicit[0].violated);
}

#[test]
fn monotonicity_bound_at_sampled_centers() {
    let mut r = rng(41);
    for f in [clifford(64), perturbed(64)] {
        let geom = SurfaceGeometry::compute(&f).unwrap();
        let w = geom.willmore_energy();
        for _ in 0..10 {
            let v = unit_vector(&mut r) * 0.5;
            assert!(monotonicity_integral(&f, &geom, &v) <= w + 1e-6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn jacobian_bounded_by_willmore_density(h in -5.0f64..5.0, a in 0.0f64..10.0, t in -PI..PI) {
        prop_assert!(hk_jacobian(h, a, t) <= 1.0 + 0.25 * h * h + 1e-12);
        prop_assert!((hk_jacobian(h, a, 0.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobian_is_product_of_principal_factors(k1 in -4.0f64..4.0, k2 in -4.0f64..4.0, t in -PI..PI) {
        // (cos t + k1 sin t)(cos t + k2 sin t) with H = k1 + k2.
        let h = k1 + k2;
        let tf = 0.5 * (k1 - k2) * (k1 - k2);
        let (s, c) = t.sin_cos();
        let prod = (c + k1 * s) * (c + k2 * s);
        prop_assert!((hk_jacobian(h, tf, t) - prod).abs() < 1e-10);
    }
}
