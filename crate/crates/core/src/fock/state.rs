use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::single_mode::{coherent_amplitudes, squeeze_matrix, thermal_weights};
use super::{Cutoff, TruncatedOperator};
use crate::error::{Error, Result};

type C64 = Complex64;

/// Tail weight above which a truncated state is rejected.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// The states the library knows how to analyse.
#[derive(Clone, Debug, PartialEq)]
pub enum TwoModeState {
    /// `U(a,b) |z1, z2>`.
    SqueezedCoherent { z1: C64, z2: C64, a: f64, b: f64 },
    /// `U(a,b) ρ_th(β) U(a,b)⁻¹` with an isotropic two-mode thermal state.
    SqueezedThermal { beta: f64, a: f64, b: f64 },
    /// `(|u1,u2> + r e^{iη} |v1,v2>) / N` with real displacements.
    CoherentSuperposition { u1: f64, u2: f64, v1: f64, v2: f64, r: f64, eta: f64 },
    Fock { n1: usize, n2: usize },
    ExplicitDensityMatrix(TruncatedOperator),
}

impl TwoModeState {
    pub fn family(&self) -> Family {
        match self {
            TwoModeState::SqueezedCoherent { .. } => Family::SqueezedCoherent,
            TwoModeState::SqueezedThermal { .. } => Family::SqueezedThermal,
            TwoModeState::CoherentSuperposition { .. } => Family::Superposition,
            TwoModeState::Fock { .. } => Family::Fock,
            TwoModeState::ExplicitDensityMatrix(_) => Family::Explicit,
        }
    }

    /// Checks the parameter invariants of each family.
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &'static str, value: f64| -> Result<()> {
            if value.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, value, reason: "must be finite" })
            }
        };
        match *self {
            TwoModeState::SqueezedCoherent { z1, z2, a, b } => {
                for (name, value) in [("z1.re", z1.re), ("z1.im", z1.im), ("z2.re", z2.re), ("z2.im", z2.im)] {
                    finite(name, value)?;
                }
                for (name, value) in [("a", a), ("b", b)] {
                    finite(name, value)?;
                    if value < 0.0 {
                        return Err(Error::InvalidParameter { name, value, reason: "squeeze factors are non-negative" });
                    }
                }
                Ok(())
            }
            TwoModeState::SqueezedThermal { beta, a, b } => {
                if !(beta.is_finite() && beta > 0.0) {
                    return Err(Error::InvalidTemperature(beta));
                }
                finite("a", a)?;
                finite("b", b)
            }
            TwoModeState::CoherentSuperposition { u1, u2, v1, v2, r, eta } => {
                for (name, value) in [("u1", u1), ("u2", u2), ("v1", v1), ("v2", v2), ("eta", eta)] {
                    finite(name, value)?;
                }
                if !(r.is_finite() && r >= 0.0) {
                    return Err(Error::InvalidWeight(r));
                }
                Ok(())
            }
            TwoModeState::Fock { .. } => Ok(()),
            TwoModeState::ExplicitDensityMatrix(ref rho) => {
                super::density_file::validate_density(rho).map_err(Error::from)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    SqueezedCoherent,
    SqueezedThermal,
    Superposition,
    Fock,
    Explicit,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::SqueezedCoherent => "squeezed-coherent",
            Family::SqueezedThermal => "squeezed-thermal",
            Family::Superposition => "superposition",
            Family::Fock => "fock",
            Family::Explicit => "explicit",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A state realized on the joint truncated space.
#[derive(Clone, Debug, PartialEq)]
pub enum JointState {
    Pure { cutoff: Cutoff, amplitudes: DVector<C64> },
    Mixture { cutoff: Cutoff, parts: Vec<(f64, DVector<C64>)> },
    Density(TruncatedOperator),
}

impl JointState {
    pub fn cutoff(&self) -> Cutoff {
        match self {
            JointState::Pure { cutoff, .. } | JointState::Mixture { cutoff, .. } => *cutoff,
            JointState::Density(rho) => rho.cutoff,
        }
    }

    pub fn density(&self) -> TruncatedOperator {
        let cutoff = self.cutoff();
        match self {
            JointState::Pure { amplitudes, .. } => TruncatedOperator {
                cutoff,
                entries: amplitudes * amplitudes.adjoint(),
            },
            JointState::Mixture { parts, .. } => {
                let mut rho = DMatrix::zeros(cutoff.dim(), cutoff.dim());
                for (w, v) in parts {
                    rho += v * v.adjoint() * C64::from(*w);
                }
                TruncatedOperator { cutoff, entries: rho }
            }
            JointState::Density(rho) => rho.clone(),
        }
    }
}

/// `⟨ψ|op|ψ⟩` for vectors and mixtures, `Tr(ρ op)` for densities.
pub fn expectation(state: &JointState, op: &TruncatedOperator) -> Result<C64> {
    let dim = state.cutoff().dim();
    if op.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: op.dim() });
    }
    Ok(match state {
        JointState::Pure { amplitudes, .. } => amplitudes.dotc(&(&op.entries * amplitudes)),
        JointState::Mixture { parts, .. } => parts
            .iter()
            .map(|(w, v)| v.dotc(&(&op.entries * v)) * w)
            .sum(),
        JointState::Density(rho) => (&rho.entries * &op.entries).trace(),
    })
}

/// Product of two single-mode vectors in the canonical joint layout.
pub fn product_vector(cutoff: Cutoff, first: &DVector<C64>, second: &DVector<C64>) -> DVector<C64> {
    let l = cutoff.levels();
    let at = |v: &DVector<C64>, n: usize| if n < v.len() { v[n] } else { C64::from(0.0) };
    DVector::from_fn(cutoff.dim(), |i, _| at(first, i / l) * at(second, i % l))
}

/// The two-mode coherent state `|z1, z2>`, renormalized after truncation.
pub fn coherent_state(z1: C64, z2: C64, cutoff: Cutoff) -> Result<DVector<C64>> {
    let (c1, t1) = coherent_amplitudes(z1, cutoff.levels());
    let (c2, t2) = coherent_amplitudes(z2, cutoff.levels());
    let tail = t1 + t2 - t1 * t2;
    if tail >= TAIL_TOLERANCE {
        return Err(Error::CutoffTooSmall(format!(
            "coherent state ({z1}, {z2}) loses weight {tail:.3e} beyond n_max = {}",
            cutoff.n_max
        )));
    }
    let mut v = product_vector(cutoff, &c1, &c2);
    let norm = v.norm();
    v /= C64::from(norm);
    Ok(v)
}

/// `|n1, n2>`.
pub fn fock_state(n1: usize, n2: usize, cutoff: Cutoff) -> Result<DVector<C64>> {
    if n1 > cutoff.n_max || n2 > cutoff.n_max {
        return Err(Error::DimensionMismatch { expected: cutoff.n_max, found: n1.max(n2) });
    }
    let mut v = DVector::from_element(cutoff.dim(), C64::from(0.0));
    v[cutoff.index(n1, n2)] = C64::from(1.0);
    Ok(v)
}

/// `N²` for the two-coherent-state superposition.
pub fn superposition_norm_sqr(u1: f64, u2: f64, v1: f64, v2: f64, r: f64, eta: f64) -> f64 {
    let overlap = (-0.5 * (u1 * u1 + u2 * u2 + v1 * v1 + v2 * v2) + u1 * v1 + u2 * v2).exp();
    1.0 + r * r + 2.0 * r * eta.cos() * overlap
}

/// `(|u1,u2> + r e^{iη} |v1,v2>) / N`, renormalized after truncation.
pub fn superposition_state(
    u1: f64,
    u2: f64,
    v1: f64,
    v2: f64,
    r: f64,
    eta: f64,
    cutoff: Cutoff,
) -> Result<DVector<C64>> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidWeight(r));
    }
    let v = superposition_unnormalized(u1, u2, v1, v2, r, eta, cutoff);
    let n2 = superposition_norm_sqr(u1, u2, v1, v2, r, eta);
    let kept = v.norm_squared();
    let tail = (1.0 - kept / n2).max(0.0);
    if tail >= TAIL_TOLERANCE {
        return Err(Error::CutoffTooSmall(format!(
            "superposition loses weight {tail:.3e} beyond n_max = {}",
            cutoff.n_max
        )));
    }
    Ok(&v / C64::from(kept.sqrt()))
}

pub(crate) fn superposition_unnormalized(
    u1: f64,
    u2: f64,
    v1: f64,
    v2: f64,
    r: f64,
    eta: f64,
    cutoff: Cutoff,
) -> DVector<C64> {
    let l = cutoff.levels();
    let amp = |x: f64| coherent_amplitudes(C64::from(x), l).0;
    let first = product_vector(cutoff, &amp(u1), &amp(u2));
    let second = product_vector(cutoff, &amp(v1), &amp(v2));
    first + second * C64::from_polar(r, eta)
}

/// Isotropic two-mode thermal density, renormalized after truncation.
pub fn thermal_density(beta: f64, cutoff: Cutoff) -> Result<TruncatedOperator> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidTemperature(beta));
    }
    let (w, tail) = thermal_weights(beta, cutoff.levels());
    let joint_tail = 2.0 * tail - tail * tail;
    if joint_tail >= TAIL_TOLERANCE {
        return Err(Error::CutoffTooSmall(format!(
            "thermal state at beta = {beta} loses weight {joint_tail:.3e} beyond n_max = {}",
            cutoff.n_max
        )));
    }
    let kept: f64 = w.iter().sum();
    let mut rho = TruncatedOperator::zeros(cutoff);
    for n1 in 0..cutoff.levels() {
        for n2 in 0..cutoff.levels() {
            let i = cutoff.index(n1, n2);
            rho.entries[(i, i)] = C64::from(w[n1] * w[n2] / (kept * kept));
        }
    }
    Ok(rho)
}

/// Recommended working pad for squeeze factors `a, b`.
pub fn recommended_pad(a: f64, b: f64) -> usize {
    8usize.max(2 * (4.0 * (a.abs() + b.abs())).ceil() as usize)
}

/// One-mode squeeze factor, exponentiated with `pad` extra levels and projected.
///
/// The pad doubles (at most three times) until the kept block stops changing,
/// so the entries are those of the untruncated operator to within `1e-10`.
pub fn projected_squeeze(r: f64, cutoff: Cutoff) -> Result<DMatrix<f64>> {
    const TOL: f64 = 1e-10;
    let levels = cutoff.levels();
    let mut pad = cutoff.pad.max(8usize.max(2 * (8.0 * r.abs()).ceil() as usize));
    let block = |pad: usize| squeeze_matrix(r, levels + pad).view((0, 0), (levels, levels)).into_owned();
    let mut s = block(pad);
    let mut change = f64::NAN;
    for _ in 0..=3 {
        pad *= 2;
        let next = block(pad);
        change = (&next - &s).amax();
        s = next;
        if change <= TOL {
            return Ok(s);
        }
    }
    Err(Error::ConvergenceFailure(format!(
        "squeeze r = {r}: kept block still changes by {change:.3e} after pad growth"
    )))
}

/// `U(a,b) = exp[((a−b)/4)(a1†² − a1²)] exp[((a+b)/4)(a2†² − a2²)]`.
pub fn squeeze_operator(a: f64, b: f64, cutoff: Cutoff) -> Result<TruncatedOperator> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter { name: "a, b", value: a + b, reason: "must be finite" });
    }
    let s1 = projected_squeeze(0.5 * (a - b), cutoff)?.map(C64::from);
    let s2 = projected_squeeze(0.5 * (a + b), cutoff)?.map(C64::from);
    Ok(TruncatedOperator { cutoff, entries: s1.kronecker(&s2) })
}

/// Multiplies vectors by `U(a,b)` and conjugates densities with it.
pub fn apply_squeeze(state: &JointState, a: f64, b: f64) -> Result<JointState> {
    let cutoff = state.cutoff();
    let cutoff = Cutoff { pad: cutoff.pad.max(recommended_pad(a, b)), ..cutoff };
    let u = squeeze_operator(a, b, cutoff)?;
    Ok(match state {
        JointState::Pure { amplitudes, .. } => {
            JointState::Pure { cutoff, amplitudes: &u.entries * amplitudes }
        }
        JointState::Mixture { parts, .. } => JointState::Mixture {
            cutoff,
            parts: parts.iter().map(|(w, v)| (*w, &u.entries * v)).collect(),
        },
        JointState::Density(rho) => JointState::Density(TruncatedOperator {
            cutoff,
            entries: &u.entries * &rho.entries * u.entries.adjoint(),
        }),
    })
}

/// `a_mode` applied to a joint vector (`mode` is 1 or 2).
pub fn lower_joint(cutoff: Cutoff, mode: usize, v: &DVector<C64>) -> DVector<C64> {
    let l = cutoff.levels();
    DVector::from_fn(v.len(), |i, _| {
        let (n1, n2) = (i / l, i % l);
        match mode {
            1 if n1 + 1 < l => v[cutoff.index(n1 + 1, n2)] * ((n1 + 1) as f64).sqrt(),
            2 if n2 + 1 < l => v[cutoff.index(n1, n2 + 1)] * ((n2 + 1) as f64).sqrt(),
            _ => C64::from(0.0),
        }
    })
}
