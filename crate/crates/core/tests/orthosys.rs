mod common;

use std::sync::Arc;

use jacobs_ladder::hlgrid::QuadratureSpec;
use jacobs_ladder::orthosys::{
    affine_to_segment, automorphism_w, composed_eval, gram_matrix, iterated_eval, legendre_eval, weight_eval,
    BaseSystem, IteratedSystem, IteratedSystemSpec,
};
use jacobs_ladder::Error;
use proptest::prelude::*;

const T: f64 = 1e4;

fn quad(rel_tol: f64) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol,
        ..Default::default()
    }
}

#[test]
fn legendre_base_gram() {
    let b = BaseSystem::legendre(-1.0, 1.0).unwrap();
    let g = gram_matrix(&b, 8, quad(1e-12)).unwrap();
    for m in 0..8 {
        assert!((g.entries[m][m] - 2.0 / (2 * m + 1) as f64).abs() < 1e-12);
        for n in 0..8 {
            if m != n {
                assert!(g.entries[m][n].abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn shifted_interval_matches_reference_interval() {
    let b = BaseSystem::legendre(3.0, 2.5).unwrap();
    for n in 0..5 {
        assert!((b.eval(n, 5.5) - legendre_eval(n, 0.0)).abs() < 1e-14);
        assert!((b.eval(n, 8.0) - legendre_eval(n, 1.0)).abs() < 1e-14);
        assert!((b.norm_sq(n).unwrap() - 2.5 * 2.0 / (2 * n + 1) as f64).abs() < 1e-12);
    }
}

#[test]
fn iterated_norms_follow_the_scale_factor() {
    let l = common::ladder();
    let b = BaseSystem::legendre(-1.0, 1.0).unwrap();
    let spec = IteratedSystemSpec::new(&l, b, 1, T).unwrap();
    let g = gram_matrix(&IteratedSystem::single(spec, &l), 6, quad(1e-8)).unwrap();
    assert!(g.max_offdiag_ratio <= 1e-4);
    for (n, v) in g.transported_norms().iter().enumerate() {
        assert!((v / (2.0 / (2 * n + 1) as f64) - 1.0).abs() < 1e-3, "n = {n}");
    }
}

#[test]
fn orthogonality_is_bounded_by_tolerance_or_floor() {
    // the default panel layout already resolves these integrands, so every
    // tolerance lands on the ~1e-10 floor set by the root solves
    let l = common::ladder();
    let b = BaseSystem::trigonometric(-1.0, 1.0).unwrap();
    let spec = IteratedSystemSpec::new(&l, b, 1, T).unwrap();
    let sys = IteratedSystem::single(spec, &l);
    for r in [1e-4, 5e-5, 1e-8, 5e-9] {
        let ratio = gram_matrix(&sys, 4, quad(r)).unwrap().max_offdiag_ratio;
        assert!(ratio <= r.max(1e-9), "rel_tol {r}: {ratio}");
    }
}

#[test]
fn depth_zero_is_the_base_system() {
    let l = common::ladder();
    let b = BaseSystem::legendre(-1.0, 1.0).unwrap();
    let spec = IteratedSystemSpec::new(&l, b.clone(), 0, T).unwrap();
    for t in [-1.0, -0.3, 0.4, 1.0] {
        for n in 0..4 {
            assert!((iterated_eval(n, t, &spec, &l).unwrap() - b.eval(n, t)).abs() < 1e-9);
        }
    }
}

#[test]
fn composition_of_one_stage_is_that_stage() {
    let l = common::ladder();
    let b = BaseSystem::trigonometric(-1.0, 1.0).unwrap();
    let spec = IteratedSystemSpec::new(&l, b, 2, T).unwrap();
    for t in [-0.9, 0.0, 0.7] {
        for n in 0..4 {
            let single = iterated_eval(n, t, &spec, &l).unwrap();
            let composed = composed_eval(n, t, std::slice::from_ref(&spec), &l).unwrap();
            assert_eq!(single.to_bits(), composed.to_bits());
        }
    }
}

#[test]
fn weight_is_square_of_constant_function() {
    let l = common::ladder();
    let b = BaseSystem::legendre(-1.0, 1.0).unwrap();
    let spec = IteratedSystemSpec::new(&l, b, 2, T).unwrap();
    for t in [-0.5, 0.25] {
        let f0 = iterated_eval(0, t, &spec, &l).unwrap();
        assert_eq!(weight_eval(t, &spec, &l).unwrap(), f0 * f0);
    }
}

#[test]
fn external_base_needs_orthogonality() {
    let cheb = Arc::new(|n: usize, t: f64| (n as f64 * t.clamp(-1.0, 1.0).acos()).cos());
    assert!(matches!(
        BaseSystem::external(cheb, -1.0, 1.0, 4),
        Err(Error::Invariant(_)) | Err(Error::Domain { .. })
    ));
    let legendre = Arc::new(legendre_eval);
    let b = BaseSystem::external(legendre, -1.0, 1.0, 4).unwrap();
    let l = common::ladder();
    let spec = IteratedSystemSpec::new(&l, b, 1, T).unwrap();
    let g = gram_matrix(&IteratedSystem::single(spec, &l), 4, quad(1e-8)).unwrap();
    assert!(g.max_offdiag_ratio <= 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_map_is_increasing(x in -1.0f64..1.0, d in 1e-6f64..0.5) {
        let l = common::ladder();
        let spec = IteratedSystemSpec::new(&l, BaseSystem::legendre(-1.0, 1.0).unwrap(), 2, T).unwrap();
        let y = (x + d).min(1.0);
        prop_assume!(y > x);
        prop_assert!(affine_to_segment(y, &spec).unwrap() > affine_to_segment(x, &spec).unwrap());
    }

    #[test]
    fn automorphism_is_increasing_self_map(p in 1usize..=3, x in -1.0f64..1.0, d in 1e-4f64..0.5) {
        let l = common::ladder();
        let spec = IteratedSystemSpec::new(&l, BaseSystem::legendre(-1.0, 1.0).unwrap(), p, T).unwrap();
        let y = (x + d).min(1.0);
        prop_assume!(y > x);
        let (wx, wy) = (automorphism_w(x, &spec, &l).unwrap(), automorphism_w(y, &spec, &l).unwrap());
        prop_assert!(wy > wx);
        prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&wx));
    }
}
