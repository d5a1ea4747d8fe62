mod common;

use std::f64::consts::PI;

use mandelq::fock::{realize, JointState, TruncationPolicy};
use mandelq::moments::{
    alpha_of_q, extract_moments, joint_gram, mandel_q_at, mandel_q_direct, moments_from_gram,
    moments_from_generators, q_of_alpha, rotation_of_u2,
};
use mandelq::{Error, SU2Element, SphereDirection, TwoModeState};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

#[test]
fn poles_pick_out_the_original_modes() {
    let north = q_of_alpha(&SU2Element::new(C64::from(1.0), C64::from(0.0)).unwrap());
    let south = q_of_alpha(&SU2Element::new(C64::from(0.0), C64::from(1.0)).unwrap());
    assert_eq!((north.theta, north.phi), (0.0, 0.0));
    assert!((south.theta - PI).abs() < 1e-15);
    assert_eq!(south.phi, 0.0);
    assert!(SU2Element::new(C64::from(1.0), C64::from(1.0)).is_err());
}

#[test]
fn fock_moments_give_the_per_mode_q() {
    let state = TwoModeState::Fock { n1: 3, n2: 1 };
    let m = extract_moments(&state, &TruncationPolicy::default()).unwrap();
    assert!((m.s - 2.0).abs() < 1e-14);
    assert!((m.u.z - 1.0).abs() < 1e-14);
    // Q along mode 1 is (n1(n1-1) - n1^2) / (n1 + n2).
    let q = mandel_q_at(&m, &SphereDirection::north()).unwrap();
    assert!((q + 0.75).abs() < 1e-14);
}

#[test]
fn vacuum_has_undefined_q() {
    let state = TwoModeState::SqueezedCoherent { z1: C64::from(0.0), z2: C64::from(0.0), a: 0.0, b: 0.0 };
    let m = extract_moments(&state, &TruncationPolicy::default()).unwrap();
    assert!(matches!(mandel_q_at(&m, &SphereDirection::north()), Err(Error::ZeroIntensity(_))));
}

#[test]
fn gram_and_generator_routes_agree() {
    let mut rng = common::rng(21);
    for _ in 0..6 {
        let rho = common::random_density(&mut rng, 3, 2);
        let state = JointState::Density(rho);
        let a = moments_from_gram(&joint_gram(&state));
        let b = moments_from_generators(&state).unwrap();
        assert!((a.s - b.s).abs() < 1e-12);
        assert!((a.u - b.u).norm() < 1e-12);
        assert!((a.h - b.h).norm() < 1e-12);
        assert!(a.invariant_defect() < 1e-12);
    }
}

#[test]
fn product_and_joint_moments_agree_for_squeezed_coherent() {
    let state = TwoModeState::SqueezedCoherent { z1: C64::new(0.3, 0.2), z2: C64::new(-0.5, 0.1), a: 0.3, b: 0.1 };
    let policy = TruncationPolicy::default();
    let product = extract_moments(&state, &policy).unwrap();
    let joint = realize(&state, &policy).unwrap().to_joint(10_000).unwrap();
    let direct = moments_from_gram(&joint_gram(&joint));
    assert!((product.h - direct.h).norm() < 1e-12);
    assert!((product.u - direct.u).norm() < 1e-12);
}

#[test]
fn mixing_rotates_the_sphere() {
    // Q of W ρ W† at q equals Q of ρ at R q, with R the rotation induced by u.
    let mut rng = common::rng(22);
    let rho = common::random_density(&mut rng, 3, 3);
    let u = common::random_u2(&mut rng);
    let rotated = common::rotate(&rho, &u);
    let policy = TruncationPolicy::default();
    let m = extract_moments(&TwoModeState::ExplicitDensityMatrix(rho), &policy).unwrap();
    let m_rot = extract_moments(&TwoModeState::ExplicitDensityMatrix(rotated), &policy).unwrap();
    let r = rotation_of_u2(&u);
    for _ in 0..10 {
        let q = common::random_direction(&mut rng);
        let moved = SphereDirection::from_vector(r * q.q);
        let lhs = mandel_q_at(&m_rot, &q).unwrap();
        let rhs = mandel_q_at(&m, &moved).unwrap();
        assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_of_alpha_inverts_alpha_of_q(theta in 0.0..PI, phi in 0.0..(2.0 * PI)) {
        let q = SphereDirection::from_angles(theta, phi);
        let back = q_of_alpha(&alpha_of_q(&q));
        prop_assert!((back.q - q.q).norm() < 1e-12);
    }

    #[test]
    fn reduced_and_direct_q_agree_for_fock_mixtures(seed in 0u64..1000) {
        let mut rng = common::rng(seed);
        let rho = common::random_density(&mut rng, 2, 2);
        let state = JointState::Density(rho.clone());
        let m = moments_from_gram(&joint_gram(&state));
        let alpha = common::random_alpha(&mut rng);
        let reduced = mandel_q_at(&m, &q_of_alpha(&alpha)).unwrap();
        let direct = mandel_q_direct(&state, &alpha).unwrap();
        prop_assert!((reduced - direct).abs() < 1e-10);
    }
}
