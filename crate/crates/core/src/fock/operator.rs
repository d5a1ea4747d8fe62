use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use super::Cutoff;
use crate::error::{Error, Result};

type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix on the truncated two-mode space.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator {
    pub cutoff: Cutoff,
    pub entries: DMatrix<C64>,
}

impl TruncatedOperator {
    pub fn new(cutoff: Cutoff, entries: DMatrix<C64>) -> Result<Self> {
        let dim = cutoff.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(TruncatedOperator { cutoff, entries })
    }

    pub fn zeros(cutoff: Cutoff) -> Self {
        let d = cutoff.dim();
        TruncatedOperator { cutoff, entries: DMatrix::zeros(d, d) }
    }

    pub fn identity(cutoff: Cutoff) -> Self {
        let d = cutoff.dim();
        TruncatedOperator { cutoff, entries: DMatrix::identity(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        TruncatedOperator { cutoff: self.cutoff, entries: self.entries.adjoint() }
    }

    pub fn scale(&self, factor: C64) -> Self {
        TruncatedOperator { cutoff: self.cutoff, entries: &self.entries * factor }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.entries - self.entries.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    /// Max-norm distance to `other` over the block of rows and columns in `keep`.
    pub fn block_distance(&self, other: &Self, keep: &[usize]) -> f64 {
        let mut worst = 0.0f64;
        for &i in keep {
            for &j in keep {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        worst
    }

    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(&self.entries * v)
    }
}

impl<'a> Mul<&'a TruncatedOperator> for &'a TruncatedOperator {
    type Output = TruncatedOperator;
    fn mul(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        TruncatedOperator { cutoff: self.cutoff, entries: &self.entries * &rhs.entries }
    }
}

impl<'a> Add<&'a TruncatedOperator> for &'a TruncatedOperator {
    type Output = TruncatedOperator;
    fn add(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        TruncatedOperator { cutoff: self.cutoff, entries: &self.entries + &rhs.entries }
    }
}

impl<'a> Sub<&'a TruncatedOperator> for &'a TruncatedOperator {
    type Output = TruncatedOperator;
    fn sub(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        TruncatedOperator { cutoff: self.cutoff, entries: &self.entries - &rhs.entries }
    }
}

/// Annihilation operators `(a1, a2)`; creation operators are their adjoints.
pub fn ladder_operators(cutoff: Cutoff) -> (TruncatedOperator, TruncatedOperator) {
    let mut a1 = TruncatedOperator::zeros(cutoff);
    let mut a2 = TruncatedOperator::zeros(cutoff);
    for n1 in 0..=cutoff.n_max {
        for n2 in 0..=cutoff.n_max {
            let col = cutoff.index(n1, n2);
            if n1 > 0 {
                a1.entries[(cutoff.index(n1 - 1, n2), col)] = C64::from((n1 as f64).sqrt());
            }
            if n2 > 0 {
                a2.entries[(cutoff.index(n1, n2 - 1), col)] = C64::from((n2 as f64).sqrt());
            }
        }
    }
    (a1, a2)
}

/// `[J0, J1, J2, J3]`: the photon-number conserving generators.
pub fn number_conserving_generators(cutoff: Cutoff) -> [TruncatedOperator; 4] {
    let (a1, a2) = ladder_operators(cutoff);
    let (c1, c2) = (a1.adjoint(), a2.adjoint());
    let n1 = &c1 * &a1;
    let n2 = &c2 * &a2;
    let half = C64::from(0.5);

    let j0 = (&(&n1 + &n2) + &TruncatedOperator::identity(cutoff)).scale(half);
    let j1 = (&(&c1 * &a2) + &(&c2 * &a1)).scale(half);
    let j2 = (&(&c2 * &a1) - &(&c1 * &a2)).scale(I * 0.5);
    let j3 = (&n1 - &n2).scale(half);
    [j0, j1, j2, j3]
}

/// `([K1, K2, K3], [L1, L2, L3])`: the photon-number changing generators.
pub fn noncompact_generators(
    cutoff: Cutoff,
) -> ([TruncatedOperator; 3], [TruncatedOperator; 3]) {
    let (a1, a2) = ladder_operators(cutoff);
    let (c1, c2) = (a1.adjoint(), a2.adjoint());
    let a1a1 = &a1 * &a1;
    let a2a2 = &a2 * &a2;
    let c1c1 = &c1 * &c1;
    let c2c2 = &c2 * &c2;
    let a1a2 = &a1 * &a2;
    let c1c2 = &c1 * &c2;
    let q = C64::from(0.25);

    let k1 = (&(&(&c1c1 + &a1a1) - &c2c2) - &a2a2).scale(q);
    let k2 = (&(&(&c1c1 - &a1a1) + &c2c2) - &a2a2).scale(-I * 0.25);
    let k3 = (&c1c2 + &a1a2).scale(C64::from(-0.5));
    let l1 = (&(&(&c1c1 - &a1a1) - &c2c2) + &a2a2).scale(I * 0.25);
    let l2 = (&(&(&c1c1 + &a1a1) + &c2c2) + &a2a2).scale(q);
    let l3 = (&c1c2 - &a1a2).scale(-I * 0.5);
    ([k1, k2, k3], [l1, l2, l3])
}

/// The Fock-space operator of a passive mode mixing `u`.
///
/// It satisfies `W a_r† W⁻¹ = Σ_s conj(u[r][s]) a_s†`, so that the per-direction
/// Mandel function of `W ρ W†` at `α` equals that of `ρ` at `u α`. The map
/// preserves total photon number and is exact on the block `n1 + n2 <= n_max`;
/// columns outside that block are left zero.
pub fn passive_transform(u: &Matrix2<C64>, cutoff: Cutoff) -> TruncatedOperator {
    let mut w = TruncatedOperator::zeros(cutoff);
    let c = u.map(|z| z.conj());
    let fact = |n: usize| -> f64 { (1..=n).map(|k| k as f64).product() };
    let binom = |n: usize, k: usize| -> f64 { fact(n) / (fact(k) * fact(n - k)) };

    for n1 in 0..=cutoff.n_max {
        for n2 in 0..=(cutoff.n_max - n1) {
            let total = n1 + n2;
            let mut amps = vec![C64::from(0.0); total + 1];
            // (c11 a1† + c12 a2†)^n1 (c21 a1† + c22 a2†)^n2 |0,0>
            for k in 0..=n1 {
                let first = c[(0, 0)].powu(k as u32) * c[(0, 1)].powu((n1 - k) as u32) * binom(n1, k);
                for l in 0..=n2 {
                    let second =
                        c[(1, 0)].powu(l as u32) * c[(1, 1)].powu((n2 - l) as u32) * binom(n2, l);
                    amps[k + l] += first * second;
                }
            }
            let norm = (fact(n1) * fact(n2)).sqrt();
            let col = cutoff.index(n1, n2);
            for (m1, amp) in amps.into_iter().enumerate() {
                let m2 = total - m1;
                let raise = (fact(m1) * fact(m2)).sqrt();
                w.entries[(cutoff.index(m1, m2), col)] = amp * (raise / norm);
            }
        }
    }
    w
}
