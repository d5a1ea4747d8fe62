#![allow(dead_code)]

use mandelq::fock::{Cutoff, TruncatedOperator};
use mandelq::{SU2Element, SphereDirection, TwoModeState};
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller; one draw is enough here.
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn random_direction(rng: &mut ChaCha8Rng) -> SphereDirection {
    let cos_theta: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    SphereDirection::from_angles(cos_theta.acos(), phi)
}

pub fn random_alpha(rng: &mut ChaCha8Rng) -> SU2Element {
    let mut c = || C64::new(gaussian(rng), gaussian(rng));
    SU2Element::normalized(c(), c())
}

/// Haar-ish U(2): an SU(2) element times a global phase.
pub fn random_u2(rng: &mut ChaCha8Rng) -> Matrix2<C64> {
    let su2 = random_alpha(rng).matrix();
    let phase = C64::from_polar(1.0, rng.gen_range(0.0..2.0 * std::f64::consts::PI));
    su2 * phase
}

/// Random density matrix of the given rank, supported on `n1 + n2 <= n_max`
/// so that passive mixing keeps it inside the truncated space.
pub fn random_density(rng: &mut ChaCha8Rng, n_max: usize, rank: usize) -> TruncatedOperator {
    let cutoff = Cutoff::with_n_max(n_max).unwrap();
    let support = cutoff.indices_with_total_at_most(n_max);
    let mut g = DMatrix::<C64>::zeros(cutoff.dim(), rank);
    for &i in &support {
        for k in 0..rank {
            g[(i, k)] = C64::new(gaussian(rng), gaussian(rng));
        }
    }
    let mut rho = &g * g.adjoint();
    let trace = rho.trace().re;
    rho /= C64::from(trace);
    // Exact Hermiticity after rounding.
    let rho = (&rho + rho.adjoint()) * C64::from(0.5);
    TruncatedOperator::new(cutoff, rho).unwrap()
}

pub fn rotate(rho: &TruncatedOperator, u: &Matrix2<C64>) -> TruncatedOperator {
    let w = mandelq::fock::passive_transform(u, rho.cutoff);
    &(&w * rho) * &w.adjoint()
}

pub fn random_squeezed_coherent(rng: &mut ChaCha8Rng, max_z: f64, max_squeeze: f64) -> TwoModeState {
    let mut z = || C64::from_polar(rng.gen_range(0.0..max_z), rng.gen_range(0.0..6.283));
    let (z1, z2) = (z(), z());
    TwoModeState::SqueezedCoherent {
        z1,
        z2,
        a: rng.gen_range(0.0..max_squeeze),
        b: rng.gen_range(0.0..max_squeeze),
    }
}

pub fn random_thermal(rng: &mut ChaCha8Rng) -> TwoModeState {
    TwoModeState::SqueezedThermal {
        beta: rng.gen_range(1.0..3.0),
        a: rng.gen_range(0.0..0.6),
        b: rng.gen_range(0.0..0.6),
    }
}

pub fn random_superposition(rng: &mut ChaCha8Rng) -> TwoModeState {
    TwoModeState::CoherentSuperposition {
        u1: rng.gen_range(-1.5..1.5),
        u2: rng.gen_range(-1.5..1.5),
        v1: rng.gen_range(-1.5..1.5),
        v2: rng.gen_range(-1.5..1.5),
        r: rng.gen_range(0.0..1.5),
        eta: rng.gen_range(0.0..6.283),
    }
}

pub fn random_fock(rng: &mut ChaCha8Rng) -> TwoModeState {
    loop {
        let (n1, n2) = (rng.gen_range(0..5), rng.gen_range(0..5));
        if n1 + n2 > 0 {
            return TwoModeState::Fock { n1, n2 };
        }
    }
}
