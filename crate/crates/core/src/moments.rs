//! Moment extraction and the per-direction Mandel function.
//!
//! For a passively mixed mode `a(α) = α1* a1 + α2* a2` the Mandel function is
//!
//! ```text
//! Q(ρ; α) = [⟨a(α)†² a(α)²⟩ − ⟨a(α)† a(α)⟩²] / ⟨a1†a1 + a2†a2⟩
//! ```
//!
//! and it depends on `α` only through the unit vector `q = α†σα`:
//!
//! ```text
//! Q(ρ; q) = (Tr R − qᵀRq + 2 v·q − 4 (s + u·q)²) / (8 s)
//! ```
//!
//! with `s = ⟨N⟩/2`, `u_j = ⟨J_j⟩`, `H_jk = 4 Tr(ρ (K_j − iL_j)(K_k + iL_k))`,
//! `R = Re H` and `v_j = ½ ε_jkl Im H_kl`.

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    ladder_operators, lower_joint, noncompact_generators, number_conserving_generators, realize,
    expectation, Cutoff, JointState, Realization, TruncatedOperator, TruncationPolicy, TwoModeState,
};

type C64 = Complex64;

/// Below this half-photon-number the state is treated as the vacuum.
pub const S_MIN: f64 = 1e-12;

/// A point of SU(2) up to the irrelevant overall phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SU2Element {
    pub alpha1: C64,
    pub alpha2: C64,
}

impl SU2Element {
    pub fn new(alpha1: C64, alpha2: C64) -> Result<Self> {
        let norm = alpha1.norm_sqr() + alpha2.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "|alpha1|^2 + |alpha2|^2",
                value: norm,
                reason: "must equal 1",
            });
        }
        Ok(SU2Element { alpha1, alpha2 })
    }

    /// Rescales any non-zero pair onto the unit sphere.
    pub fn normalized(alpha1: C64, alpha2: C64) -> Self {
        let norm = (alpha1.norm_sqr() + alpha2.norm_sqr()).sqrt();
        SU2Element { alpha1: alpha1 / norm, alpha2: alpha2 / norm }
    }

    /// The full 2×2 matrix `[[α1, −α2*], [α2, α1*]]`.
    pub fn matrix(&self) -> Matrix2<C64> {
        Matrix2::new(self.alpha1, -self.alpha2.conj(), self.alpha2, self.alpha1.conj())
    }
}

/// A unit vector on the sphere together with its polar angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereDirection {
    pub q: Vector3<f64>,
    /// Polar angle measured from `q3 = +1`.
    pub theta: f64,
    /// Azimuth in `[0, 2π)`; fixed to 0 at the poles.
    pub phi: f64,
}

impl SphereDirection {
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let q = Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
        SphereDirection { q, theta, phi }
    }

    /// Normalizes `q` and derives its angles.
    pub fn from_vector(q: Vector3<f64>) -> Self {
        let q = q / q.norm();
        let theta = q.z.clamp(-1.0, 1.0).acos();
        let phi = if q.x == 0.0 && q.y == 0.0 {
            0.0
        } else {
            q.y.atan2(q.x).rem_euclid(2.0 * std::f64::consts::PI)
        };
        SphereDirection { q, theta, phi }
    }

    pub fn north() -> Self {
        Self::from_vector(Vector3::z())
    }

    pub fn south() -> Self {
        Self::from_vector(-Vector3::z())
    }
}

fn pauli() -> [Matrix2<C64>; 3] {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(o, one, one, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(one, o, o, -one),
    ]
}

/// `q_j = α† σ_j α`.
pub fn q_of_alpha(alpha: &SU2Element) -> SphereDirection {
    let cross = alpha.alpha1.conj() * alpha.alpha2;
    SphereDirection::from_vector(Vector3::new(
        2.0 * cross.re,
        2.0 * cross.im,
        alpha.alpha1.norm_sqr() - alpha.alpha2.norm_sqr(),
    ))
}

/// `α = (cos θ/2, e^{iφ} sin θ/2)`.
pub fn alpha_of_q(q: &SphereDirection) -> SU2Element {
    let half = 0.5 * q.theta;
    SU2Element { alpha1: C64::from(half.cos()), alpha2: C64::from_polar(half.sin(), q.phi) }
}

/// The null vector `λ = −i αᵀ σ2 σ α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaVector {
    pub lambda: Vector3<C64>,
}

impl LambdaVector {
    /// `λ·λ` without conjugation; zero for every `α`.
    pub fn self_dot(&self) -> C64 {
        self.lambda.iter().map(|z| z * z).sum()
    }

    /// `λ_j λ_k* H_jk`.
    pub fn contract(&self, h: &Matrix3<C64>) -> C64 {
        let mut acc = C64::from(0.0);
        for j in 0..3 {
            for k in 0..3 {
                acc += self.lambda[j] * self.lambda[k].conj() * h[(j, k)];
            }
        }
        acc
    }
}

pub fn lambda_of_alpha(alpha: &SU2Element) -> LambdaVector {
    let a = nalgebra::Vector2::new(alpha.alpha1, alpha.alpha2);
    let [s1, s2, s3] = pauli();
    let minus_i = C64::new(0.0, -1.0);
    let component = |s: &Matrix2<C64>| -> C64 { (a.transpose() * s2 * s * a)[(0, 0)] * minus_i };
    LambdaVector { lambda: Vector3::new(component(&s1), component(&s2), component(&s3)) }
}

/// Every state-dependent ingredient of the reduced Mandel function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSummary {
    pub s: f64,
    pub u: Vector3<f64>,
    pub r: Matrix3<f64>,
    pub v: Vector3<f64>,
    pub h: Matrix3<C64>,
}

impl MomentSummary {
    /// Splits `H` into `R` and `v`.
    pub fn from_parts(s: f64, u: Vector3<f64>, h: Matrix3<C64>) -> Self {
        let r = h.map(|z| z.re);
        let im = h.map(|z| z.im);
        let v = Vector3::new(im[(1, 2)], im[(2, 0)], im[(0, 1)]);
        MomentSummary { s, u, r, v, h }
    }

    /// Largest violation among Hermiticity of `H` and `s >= |u|`.
    pub fn invariant_defect(&self) -> f64 {
        let herm = (self.h - self.h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        herm.max((self.u.norm() - self.s).max(0.0))
    }
}

/// Normal-ordered monomials `a1^p1 a2^p2` with `p1 + p2 <= 2`.
const MONOMIALS: [(usize, usize); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

/// `G_ij = ⟨A_i† A_j⟩` over `MONOMIALS`.
pub type Gram = nalgebra::SMatrix<C64, 6, 6>;

/// Builds the summary from normally ordered second and fourth moments.
pub fn moments_from_gram(g: &Gram) -> MomentSummary {
    let n1 = g[(1, 1)].re;
    let n2 = g[(2, 2)].re;
    let cross = g[(1, 2)]; // ⟨a1† a2⟩
    let s = 0.5 * (n1 + n2);
    let u = Vector3::new(cross.re, cross.im, 0.5 * (n1 - n2));

    // B_k = K_k + i L_k as combinations of (a1², a1a2, a2²).
    let half = C64::from(0.5);
    let ihalf = C64::new(0.0, 0.5);
    let zero = C64::from(0.0);
    let coeff = Matrix3::new(
        half, ihalf, zero, // a1²
        zero, zero, C64::from(-1.0), // a1 a2
        -half, ihalf, zero, // a2²
    );
    let quad = g.fixed_view::<3, 3>(3, 3).into_owned();
    let h = coeff.adjoint() * quad * coeff * C64::from(4.0);
    MomentSummary::from_parts(s, u, h)
}

/// Gram matrix of a product state from its one-mode grams `g[p][r] = ⟨a†^p a^r⟩`.
pub fn product_gram(g1: &Matrix3<C64>, g2: &Matrix3<C64>) -> Gram {
    Gram::from_fn(|i, j| {
        let (p1, p2) = MONOMIALS[i];
        let (r1, r2) = MONOMIALS[j];
        g1[(p1, r1)] * g2[(p2, r2)]
    })
}

fn apply_monomial(cutoff: Cutoff, (p1, p2): (usize, usize), v: &nalgebra::DVector<C64>) -> nalgebra::DVector<C64> {
    let mut out = v.clone();
    for _ in 0..p1 {
        out = lower_joint(cutoff, 1, &out);
    }
    for _ in 0..p2 {
        out = lower_joint(cutoff, 2, &out);
    }
    out
}

/// Gram matrix of a state on the joint truncated space.
pub fn joint_gram(state: &JointState) -> Gram {
    let cutoff = state.cutoff();
    let vector_gram = |v: &nalgebra::DVector<C64>| -> Gram {
        let images: Vec<_> = MONOMIALS.iter().map(|&m| apply_monomial(cutoff, m, v)).collect();
        Gram::from_fn(|i, j| images[i].dotc(&images[j]))
    };
    match state {
        JointState::Pure { amplitudes, .. } => vector_gram(amplitudes),
        JointState::Mixture { parts, .. } => parts
            .iter()
            .fold(Gram::zeros(), |acc, (w, v)| acc + vector_gram(v) * C64::from(*w)),
        JointState::Density(rho) => density_gram(cutoff, &rho.entries),
    }
}

fn density_gram(cutoff: Cutoff, rho: &DMatrix<C64>) -> Gram {
    let l = cutoff.levels();
    // A_j ρ, lowering every column.
    let lowered: Vec<DMatrix<C64>> = MONOMIALS
        .iter()
        .map(|&m| {
            let mut out = rho.clone();
            for c in 0..rho.ncols() {
                let col = apply_monomial(cutoff, m, &rho.column(c).into_owned());
                out.set_column(c, &col);
            }
            out
        })
        .collect();
    // Tr(A_j ρ A_i†) = Σ_k (A_j ρ)[k, src_i(k)] · coeff_i(k)
    Gram::from_fn(|i, j| {
        let (p1, p2) = MONOMIALS[i];
        let mut acc = C64::from(0.0);
        for k in 0..cutoff.dim() {
            let (m1, m2) = cutoff.occupation(k);
            if m1 + p1 >= l || m2 + p2 >= l {
                continue;
            }
            let coeff: f64 = ((m1 + 1)..=(m1 + p1)).chain((m2 + 1)..=(m2 + p2)).map(|n| (n as f64).sqrt()).product();
            acc += lowered[j][(k, cutoff.index(m1 + p1, m2 + p2))] * coeff;
        }
        acc
    })
}

/// Moments of a realized state, plus the same at `n_max + 4` when available.
pub fn moments_of_realization(realization: &Realization) -> (MomentSummary, Option<MomentSummary>) {
    match realization {
        Realization::Product { mode1, mode2 } => (
            moments_from_gram(&product_gram(&mode1.gram(), &mode2.gram())),
            Some(moments_from_gram(&product_gram(&mode1.gram_extended(), &mode2.gram_extended()))),
        ),
        Realization::Joint { state, extended } => (
            moments_from_gram(&joint_gram(state)),
            extended.as_ref().map(|e| moments_from_gram(&joint_gram(e))),
        ),
    }
}

/// Realizes `state` under `policy` and extracts its moments.
pub fn extract_moments(state: &TwoModeState, policy: &TruncationPolicy) -> Result<MomentSummary> {
    Ok(moments_of_realization(&realize(state, policy)?).0)
}

/// The same summary computed literally from the dense generator matrices.
///
/// Slow; intended as an independent check on small joint states.
pub fn moments_from_generators(state: &JointState) -> Result<MomentSummary> {
    let cutoff = state.cutoff();
    let [j0, j1, j2, j3] = number_conserving_generators(cutoff);
    let (k, l) = noncompact_generators(cutoff);
    let i = C64::new(0.0, 1.0);
    let s = expectation(state, &j0)?.re - 0.5;
    let u = Vector3::new(
        expectation(state, &j1)?.re,
        expectation(state, &j2)?.re,
        expectation(state, &j3)?.re,
    );
    let lowering: Vec<TruncatedOperator> = (0..3).map(|m| &k[m] + &l[m].scale(i)).collect();
    let raising: Vec<TruncatedOperator> = (0..3).map(|m| &k[m] - &l[m].scale(i)).collect();
    let mut h = Matrix3::zeros();
    for a in 0..3 {
        for b in 0..3 {
            h[(a, b)] = expectation(state, &(&raising[a] * &lowering[b]))? * 4.0;
        }
    }
    Ok(MomentSummary::from_parts(s, u, h))
}

fn check_intensity(s: f64) -> Result<()> {
    if s <= S_MIN {
        Err(Error::ZeroIntensity("vacuum state".to_string()))
    } else {
        Ok(())
    }
}

/// The reduced Mandel function at direction `q`.
pub fn mandel_q_at(m: &MomentSummary, q: &SphereDirection) -> Result<f64> {
    check_intensity(m.s)?;
    let q = q.q;
    let spread = m.r.trace() - (q.transpose() * m.r * q)[(0, 0)] + 2.0 * m.v.dot(&q);
    let mean = m.s + m.u.dot(&q);
    Ok((spread - 4.0 * mean * mean) / (8.0 * m.s))
}

/// `(⟨a†²a²⟩, ⟨a†a⟩, ⟨N⟩)` for the mixed mode, straight from operator action.
fn direct_expectations(state: &JointState, alpha: &SU2Element) -> (f64, f64, f64) {
    let (c1, c2) = (alpha.alpha1.conj(), alpha.alpha2.conj());
    let cutoff = state.cutoff();
    let vector_terms = |v: &nalgebra::DVector<C64>| -> (f64, f64, f64) {
        let a1v = lower_joint(cutoff, 1, v);
        let a2v = lower_joint(cutoff, 2, v);
        let x = &a1v * c1 + &a2v * c2;
        let y = lower_joint(cutoff, 1, &x) * c1 + lower_joint(cutoff, 2, &x) * c2;
        (y.norm_squared(), x.norm_squared(), a1v.norm_squared() + a2v.norm_squared())
    };
    match state {
        JointState::Pure { amplitudes, .. } => vector_terms(amplitudes),
        JointState::Mixture { parts, .. } => parts.iter().fold((0.0, 0.0, 0.0), |acc, (w, v)| {
            let t = vector_terms(v);
            (acc.0 + w * t.0, acc.1 + w * t.1, acc.2 + w * t.2)
        }),
        JointState::Density(rho) => {
            let (a1, a2) = ladder_operators(cutoff);
            let a = &a1.scale(c1) + &a2.scale(c2);
            let a_sq = &a * &a;
            let number = &(&a1.adjoint() * &a1) + &(&a2.adjoint() * &a2);
            let tr = |op: &TruncatedOperator| (&rho.entries * &op.entries).trace().re;
            (tr(&(&a_sq.adjoint() * &a_sq)), tr(&(&a.adjoint() * &a)), tr(&number))
        }
    }
}

/// `[⟨a(α)†²a(α)²⟩ − ⟨a(α)†a(α)⟩²] / ⟨a1†a1 + a2†a2⟩` by brute force.
pub fn mandel_q_direct(state: &JointState, alpha: &SU2Element) -> Result<f64> {
    let (quartic, mean, total) = direct_expectations(state, alpha);
    check_intensity(0.5 * total)?;
    Ok((quartic - mean * mean) / total)
}

/// The same numerator over the mixed mode's own intensity `⟨a(α)†a(α)⟩`.
pub fn mandel_q_covariant_denominator(state: &JointState, alpha: &SU2Element) -> Result<f64> {
    let (quartic, mean, total) = direct_expectations(state, alpha);
    check_intensity(0.5 * total)?;
    if mean <= S_MIN {
        return Err(Error::ZeroModeIntensity(mean));
    }
    Ok((quartic - mean * mean) / mean)
}

/// The SO(3) rotation induced by a U(2) matrix: `U† σ_j U = Σ_k R_jk σ_k`.
pub fn rotation_of_u2(u: &Matrix2<C64>) -> Matrix3<f64> {
    let s = pauli();
    Matrix3::from_fn(|j, k| 0.5 * (s[k] * u.adjoint() * s[j] * u).trace().re)
}
