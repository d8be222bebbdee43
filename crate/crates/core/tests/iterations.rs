mod common;

use jacobs_ladder::iterations::{
    build_chain, forward_iterate, forward_membership, forward_orbit, forward_set, gap_ratios, reverse_point,
    tolerance_budget, transform_integral, DeltaSet, TestFn,
};
use jacobs_ladder::quad::AdaptiveSpec;
use jacobs_ladder::specfun::EULER_C;
use jacobs_ladder::Error;
use proptest::prelude::*;

const T: f64 = 1e4;

fn u_default() -> f64 {
    T / (20.0 * T.ln())
}

#[test]
fn forward_orbit_decreases_slowly() {
    let l = common::ladder();
    let orbit = forward_orbit(&l, T, 4).unwrap();
    assert!(orbit.windows(2).all(|w| w[1] < w[0]));
    for (k, x) in orbit.iter().enumerate() {
        let eps = 1.25 * k as f64 * (1.0 - EULER_C) / T.ln();
        assert!(x / T >= 1.0 - eps && x / T <= 1.0, "k = {k}");
    }
}

#[test]
fn reverse_then_forward_is_identity() {
    let l = common::ladder();
    for k in 0..=5 {
        let back = forward_iterate(&l, reverse_point(&l, T, k).unwrap(), k).unwrap();
        assert!((back - T).abs() <= (k as f64 * 1e-10 * T).max(1e-12 * T), "k = {k}");
    }
    let pts: Vec<f64> = (0..=4).map(|k| reverse_point(&l, T, k).unwrap()).collect();
    assert!(pts.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn chain_geometry() {
    let l = common::ladder();
    let c = build_chain(&l, T, u_default(), 3).unwrap();
    assert_eq!(c.segments.len(), 4);
    assert_eq!((c.segments[0].lo, c.segments[0].hi), (T, T + u_default()));
    for s in &c.segments {
        assert!(s.len() < T / (2.0 * T.ln()));
    }
    for w in c.segments.windows(2) {
        assert!(w[0].hi < w[1].lo);
        assert!((l.phi1(w[1].lo).unwrap() - w[0].lo).abs() <= 1e-6 * T);
        assert!((l.phi1(w[1].hi).unwrap() - w[0].hi).abs() <= 1e-6 * T);
    }
    assert!(gap_ratios(&c).iter().all(|r| (0.75..=1.25).contains(r)));
}

#[test]
fn gate_rejects_large_u_with_formula() {
    let l = common::ladder();
    match build_chain(&l, T, T / 5.0, 2) {
        Err(e @ Error::Domain { .. }) => assert!(e.to_string().contains("T/(10 ln T)")),
        other => panic!("expected a domain error, got {other:?}"),
    }
}

#[test]
fn delta_set_is_disconnected() {
    let l = common::ladder();
    let c = build_chain(&l, T, u_default(), 3).unwrap();
    let d = DeltaSet::new(&c, 3).unwrap();
    assert!(d.gaps().iter().all(|g| *g > 0.0));
    let total: f64 = c.segments.iter().map(|s| s.len()).sum();
    assert!((d.measure() - total).abs() < 1e-9 * total);
    let mid_gap = 0.5 * (c.segments[0].hi + c.segments[1].lo);
    assert!(!d.contains(mid_gap));
    assert!(d.contains(c.segments[2].lo));
}

#[test]
fn finite_forms_of_the_contraction_bounds() {
    let l = common::ladder();
    let u = u_default();
    let n = 3;
    let lo = forward_orbit(&l, T, 4).unwrap();
    let hi = forward_orbit(&l, T + u, 4).unwrap();
    for k in 0..=4 {
        // each step removes about (1 - c) T / ln T, so a fixed 0.1 only covers two steps here
        let eps = if k <= 2 { 0.1 } else { 1.25 * k as f64 * (1.0 - EULER_C) / T.ln() };
        assert!(lo[k] > (1.0 - eps) * T, "k = {k}: {}", lo[k] / T);
        assert!(hi[k] - lo[k] < T / ((2 * n + 5) as f64 * T.ln()));
    }
    for k in 0..4 {
        assert!(lo[k] - hi[k + 1] > 0.18 * T / T.ln());
    }
    let set = forward_set(&l, T, u, n).unwrap();
    assert_eq!(set.len(), n + 2);
}

#[test]
fn transform_examples() {
    let l = common::ladder();
    let spec = AdaptiveSpec {
        rel_tol: 1e-8,
        ..Default::default()
    };
    let one: TestFn = &|_| 1.0;
    let (lhs, rhs) = transform_integral(&l, one, T, 20.0, 1, spec).unwrap();
    assert!((lhs - 20.0).abs() < 1e-12);
    assert!((rhs / 20.0 - 1.0).abs() < 1e-5);

    let id: TestFn = &|t| t;
    let (lhs, rhs) = transform_integral(&l, id, T, 20.0, 2, spec).unwrap();
    let exact = ((T + 20.0).powi(2) - T * T) / 2.0;
    assert!((lhs / exact - 1.0).abs() < 1e-12);
    assert!((rhs / lhs - 1.0).abs() < tolerance_budget(1e-8, 1e-10, T, 2));

    let (lhs, rhs) = transform_integral(&l, id, T, 20.0, 0, spec).unwrap();
    assert_eq!(lhs.to_bits(), rhs.to_bits());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn membership_walks_into_base_segment(k in 1usize..=3, frac in 0.0f64..=1.0) {
        let l = common::ladder();
        let c = build_chain(&l, T, u_default(), 3).unwrap();
        let s = c.segments[k];
        let t = s.lo + frac * (s.hi - s.lo);
        let images = forward_membership(&l, t, &c, k).unwrap();
        prop_assert_eq!(images.len(), k + 1);
        prop_assert!(c.segments[0].contains(images[k]));
    }

    #[test]
    fn interior_points_stay_interior(k in 1usize..=3) {
        let l = common::ladder();
        let c = build_chain(&l, T, u_default(), 3).unwrap();
        let s = c.segments[k];
        let images = forward_membership(&l, 0.5 * (s.lo + s.hi), &c, k).unwrap();
        for (r, x) in images.iter().enumerate() {
            let seg = c.segments[k - r];
            prop_assert!(*x > seg.lo && *x < seg.hi);
        }
    }
}
