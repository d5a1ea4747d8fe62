mod common;

use mandelq::fock::single_mode::{coherent_amplitudes, SqueezePropagator};
use mandelq::fock::{
    coherent_state, expectation, fock_state, ladder_operators, number_conserving_generators,
    parse_density_matrix, passive_transform, realize, realize_mode, squeeze_operator,
    thermal_density, write_density_matrix, Cutoff, JointState, ModeInput, ModeSpec,
    TruncatedOperator, TruncationPolicy,
};
use mandelq::{Error, TwoModeState, ValidationError};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn density_json(n_max: usize, diag: &[(usize, f64)]) -> String {
    let cutoff = Cutoff::with_n_max(n_max).unwrap();
    let mut rho = DMatrix::<C64>::zeros(cutoff.dim(), cutoff.dim());
    for &(i, p) in diag {
        rho[(i, i)] = C64::from(p);
    }
    write_density_matrix(&TruncatedOperator { cutoff, entries: rho })
}

#[test]
fn basis_layout_is_row_major_in_first_mode() {
    let c = Cutoff::with_n_max(3).unwrap();
    assert_eq!(c.dim(), 16);
    assert_eq!(c.index(2, 1), 9);
    assert_eq!(c.occupation(9), (2, 1));
    assert_eq!(c.indices_with_total_at_most(1), vec![0, 1, 4]);
    assert!(matches!(Cutoff::with_n_max(0), Err(Error::CutoffTooSmall(_))));
}

#[test]
fn ladder_commutator_is_identity_below_the_edge() {
    let c = Cutoff::with_n_max(5).unwrap();
    let (a1, a2) = ladder_operators(c);
    let comm = a1.commutator(&a1.adjoint());
    for n1 in 0..5 {
        for n2 in 0..=5 {
            let i = c.index(n1, n2);
            assert!((comm.entries[(i, i)] - 1.0).norm() < 1e-12);
        }
    }
    assert!(a1.commutator(&a2).max_norm() < 1e-12);
}

#[test]
fn schwinger_generators_close_under_commutation() {
    let c = Cutoff::with_n_max(4).unwrap();
    let [_, j1, j2, j3] = number_conserving_generators(c);
    // [J1, J2] = i J3 holds exactly wherever the total number fits the cutoff.
    let lhs = j1.commutator(&j2);
    let rhs = j3.scale(C64::new(0.0, 1.0));
    let block = c.indices_with_total_at_most(4);
    assert!((&lhs - &rhs).block_distance(&TruncatedOperator::zeros(c), &block) < 1e-12);
}

#[test]
fn coherent_state_has_poisson_mean() {
    let c = Cutoff::with_n_max(20).unwrap();
    let z1 = C64::new(1.2, -0.4);
    let v = coherent_state(z1, C64::from(0.0), c).unwrap();
    let state = JointState::Pure { cutoff: c, amplitudes: v };
    let (a1, _) = ladder_operators(c);
    let n1 = &a1.adjoint() * &a1;
    let mean = expectation(&state, &n1).unwrap().re;
    assert!((mean - z1.norm_sqr()).abs() < 1e-10);
    let field = expectation(&state, &a1).unwrap();
    assert!((field - z1).norm() < 1e-10);
}

#[test]
fn thermal_density_is_normalized_with_bose_mean() {
    let c = Cutoff::with_n_max(40).unwrap();
    let beta = 1.3;
    let rho = thermal_density(beta, c).unwrap();
    assert!((rho.trace().re - 1.0).abs() < 1e-12);
    let mean: f64 = (0..c.dim()).map(|i| rho.entries[(i, i)].re * c.occupation(i).0 as f64).sum();
    assert!((mean - 1.0 / beta.exp_m1()).abs() < 1e-9);
    assert!(matches!(thermal_density(0.0, c), Err(Error::InvalidTemperature(_))));
}

#[test]
fn squeeze_propagator_matches_dense_exponential() {
    let levels = 40;
    let r = 0.4;
    let prop = SqueezePropagator::new(r, levels + 20);
    let c = Cutoff::new(levels - 1, 20).unwrap();
    let dense = squeeze_operator(2.0 * r, 0.0, c).unwrap();
    // Mode 1 carries (a - b)/2 = r; mode 2 carries (a + b)/2 = r as well.
    let vac = fock_state(0, 0, c).unwrap();
    let joint = dense.apply(&vac).unwrap();
    let single = prop.apply_to_number_state(0);
    for n1 in 0..10 {
        for n2 in 0..10 {
            let expected = single[n1] * single[n2];
            assert!((joint[c.index(n1, n2)] - expected).norm() < 1e-9, "({n1},{n2})");
        }
    }
}

#[test]
fn fock_level_beyond_fixed_cutoff_is_rejected() {
    let err = realize(&TwoModeState::Fock { n1: 5, n2: 0 }, &TruncationPolicy::fixed(3)).unwrap_err();
    assert!(matches!(err, Error::CutoffTooSmall(_)));
}

#[test]
fn fixed_cutoff_too_small_for_coherent_state() {
    let spec = ModeSpec { input: ModeInput::Coherent(C64::from(3.0)), squeeze: 0.0 };
    assert!(matches!(realize_mode(&spec, &TruncationPolicy::fixed(6)), Err(Error::CutoffTooSmall(_))));
    let ok = realize_mode(&spec, &TruncationPolicy::default()).unwrap();
    assert!(ok.tail < 1e-12);
}

#[test]
fn adaptive_truncation_gets_thermal_quartic_moments_right() {
    // Q at the north pole of the squeezed thermal state with a = b reduces to
    // n'^2 / (n' + n2) with n' the squeezed mode's mean.
    let beta: f64 = 1.0;
    let n = 1.0 / beta.exp_m1();
    let r: f64 = 0.5;
    let n2 = (n + 0.5) * (2.0 * r).cosh() - 0.5;
    let expected = n * n / (n + n2);
    let state = TwoModeState::SqueezedThermal { beta, a: 0.5, b: 0.5 };
    let m = mandelq::moments::extract_moments(&state, &TruncationPolicy::default()).unwrap();
    let q = mandelq::moments::mandel_q_at(&m, &mandelq::SphereDirection::north()).unwrap();
    assert!((q - expected).abs() < 1e-13, "{q} vs {expected}");
}

#[test]
fn density_file_round_trip() {
    let mut rng = common::rng(11);
    let rho = common::random_density(&mut rng, 2, 2);
    let text = write_density_matrix(&rho);
    let back = parse_density_matrix(&text).unwrap();
    assert!((&back - &rho).max_norm() < 1e-15);
}

#[test]
fn density_validation_names_the_invariant() {
    let trace = parse_density_matrix(&density_json(1, &[(0, 0.9)])).unwrap_err();
    match trace {
        Error::Validation(ValidationError::Trace { deficit, .. }) => assert!((deficit - 0.1).abs() < 1e-12),
        other => panic!("unexpected {other:?}"),
    }

    let negative = parse_density_matrix(&density_json(1, &[(0, 1.2), (1, -0.2)])).unwrap_err();
    assert!(matches!(negative, Error::Validation(ValidationError::Positivity { .. })), "{negative:?}");

    let mut doc: serde_json::Value = serde_json::from_str(&density_json(1, &[(0, 0.5), (1, 0.5)])).unwrap();
    doc["rho"][1] = serde_json::json!([0.1, 0.0]);
    let hermitian = parse_density_matrix(&doc.to_string()).unwrap_err();
    assert!(matches!(hermitian, Error::Validation(ValidationError::Hermiticity { .. })), "{hermitian:?}");

    let short = parse_density_matrix(r#"{"n_max": 1, "rho": [[1, 0]]}"#).unwrap_err();
    assert!(matches!(short, Error::Validation(ValidationError::Length { expected: 16, found: 1, .. })));

    assert!(matches!(parse_density_matrix("not json"), Err(Error::Parse(_))));
}

#[test]
fn passive_transform_is_unitary_on_the_number_block() {
    let mut rng = common::rng(12);
    let c = Cutoff::with_n_max(5).unwrap();
    let w = passive_transform(&common::random_u2(&mut rng), c);
    let block = c.indices_with_total_at_most(5);
    let wtw = &w.adjoint() * &w;
    for &i in &block {
        for &j in &block {
            let target = if i == j { 1.0 } else { 0.0 };
            assert!((wtw.entries[(i, j)] - target).norm() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coherent_amplitudes_carry_all_weight(re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let z = C64::new(re, im);
        let (v, lost) = coherent_amplitudes(z, 80);
        prop_assert!((v.norm_squared() + lost - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realized_modes_respect_the_tail_bound(r in -1.0..1.0f64, zr in 0.0..2.0f64) {
        let spec = ModeSpec { input: ModeInput::Coherent(C64::from(zr)), squeeze: r };
        let mode = realize_mode(&spec, &TruncationPolicy::default()).unwrap();
        prop_assert!(mode.tail < 1e-12);
    }
}
