//! Truncation policy and realization of every state family on a finite basis.

use nalgebra::{DVector, Matrix3};
use num_complex::Complex64;

use super::single_mode::{
    coherent_amplitudes, thermal_levels_for_tail, thermal_weights, ModeState, SqueezePropagator,
};
use super::state::{product_vector, superposition_norm_sqr, superposition_unnormalized, TAIL_TOLERANCE};
use super::{Cutoff, JointState, TwoModeState};
use crate::error::{Error, Result};

type C64 = Complex64;

/// Extra levels used for the cutoff-convergence check.
pub const CONVERGENCE_STEP: usize = 4;

/// How many photon-number levels to keep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Fixed `n_max` per mode. `None` lets each family pick a starting point
    /// from its tail bound and grow it until the tail check passes.
    pub n_max: Option<usize>,
    pub tail_tolerance: f64,
    /// Upper bound on levels per mode before giving up.
    pub max_levels: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { n_max: None, tail_tolerance: TAIL_TOLERANCE, max_levels: 6000 }
    }
}

impl TruncationPolicy {
    pub fn fixed(n_max: usize) -> Self {
        TruncationPolicy { n_max: Some(n_max), ..Self::default() }
    }
}

/// Input of one mode before squeezing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModeInput {
    Coherent(C64),
    Thermal(f64),
    Number(usize),
}

/// One mode of a product state: an input squeezed by `exp((r/2)(a†² − a²))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeSpec {
    pub input: ModeInput,
    pub squeeze: f64,
}

impl ModeSpec {
    /// Bitwise identity, for memoizing realizations across a sweep.
    pub fn key(&self) -> (u8, u64, u64, u64) {
        let r = self.squeeze.to_bits();
        match self.input {
            ModeInput::Coherent(z) => (0, z.re.to_bits(), z.im.to_bits(), r),
            ModeInput::Thermal(beta) => (1, beta.to_bits(), 0, r),
            ModeInput::Number(n) => (2, n as u64, 0, r),
        }
    }

    fn initial_levels(&self, policy: &TruncationPolicy) -> usize {
        let r = self.squeeze.abs();
        match self.input {
            ModeInput::Coherent(z) => {
                let sigma = r.exp() / std::f64::consts::SQRT_2;
                let reach = std::f64::consts::SQRT_2 * z.norm() + 7.0 * sigma;
                (0.5 * reach * reach).ceil() as usize + 4
            }
            ModeInput::Thermal(beta) => {
                let nbar = 1.0 / beta.exp_m1();
                let spread = (nbar + 0.5) * (2.0 * r).exp();
                let base = thermal_levels_for_tail(beta, policy.tail_tolerance);
                if r == 0.0 {
                    base
                } else {
                    base.max((25.0 * spread).ceil() as usize + 8)
                }
            }
            ModeInput::Number(n) => {
                if r == 0.0 {
                    n + 1
                } else {
                    n + 8 + (25.0 * (n as f64 + 0.5) * (2.0 * r).exp()).ceil() as usize
                }
            }
        }
    }

    /// Builds the mode on `levels` levels; returns the state and the weight
    /// its input lost to that truncation.
    fn build(&self, levels: usize, tail_tolerance: f64) -> (ModeState, f64) {
        let prop = (self.squeeze != 0.0).then(|| SqueezePropagator::new(self.squeeze, levels));
        match self.input {
            ModeInput::Coherent(z) => {
                let (amps, lost) = coherent_amplitudes(z, levels);
                let v = match &prop {
                    Some(p) => p.apply(&amps),
                    None => amps,
                };
                (ModeState::Pure(v), lost)
            }
            ModeInput::Thermal(beta) => {
                let count = thermal_levels_for_tail(beta, tail_tolerance * 1e-6).min(levels);
                let (w, lost) = thermal_weights(beta, count);
                let kept: f64 = w.iter().sum();
                let parts = w
                    .iter()
                    .enumerate()
                    .map(|(n, &p)| {
                        let v = match &prop {
                            Some(s) => s.apply_to_number_state(n),
                            None => basis(levels, n),
                        };
                        (p / kept, v)
                    })
                    .collect();
                (ModeState::Mixture(parts), lost)
            }
            ModeInput::Number(n) => {
                let v = match &prop {
                    Some(s) => s.apply_to_number_state(n),
                    None => basis(levels, n),
                };
                (ModeState::Pure(v), 0.0)
            }
        }
    }
}

fn basis(levels: usize, n: usize) -> DVector<C64> {
    let mut v = DVector::from_element(levels, C64::from(0.0));
    v[n] = C64::from(1.0);
    v
}

/// A mode realized with room for the `+CONVERGENCE_STEP` check.
#[derive(Clone, Debug)]
pub struct RealizedMode {
    working: ModeState,
    pub levels: usize,
    /// Weight beyond `levels` before renormalization.
    pub tail: f64,
}

impl RealizedMode {
    pub fn state(&self) -> ModeState {
        self.working.project(self.levels)
    }

    pub fn state_at(&self, levels: usize) -> ModeState {
        self.working.project(levels.min(self.working.levels()))
    }

    pub fn gram(&self) -> Matrix3<C64> {
        self.state().gram()
    }

    pub fn gram_extended(&self) -> Matrix3<C64> {
        self.state_at(self.levels + CONVERGENCE_STEP).gram()
    }
}

/// Realizes one mode, growing the truncation until its tail passes.
pub fn realize_mode(spec: &ModeSpec, policy: &TruncationPolicy) -> Result<RealizedMode> {
    let mut levels = match policy.n_max {
        Some(n) => n + 1,
        None => spec.initial_levels(policy).max(2),
    };
    if let ModeInput::Number(n) = spec.input {
        if n >= levels {
            return Err(Error::CutoffTooSmall(format!("Fock level {n} exceeds n_max = {}", levels - 1)));
        }
    }
    loop {
        let pad = 8usize.max(2 * (8.0 * spec.squeeze.abs()).ceil() as usize) + levels / 8;
        let working_levels = levels + CONVERGENCE_STEP + if spec.squeeze != 0.0 { pad } else { 0 };
        let (working, lost) = spec.build(working_levels, policy.tail_tolerance);
        let tail = working.weight_beyond(levels) + lost;
        // Probability alone is not enough: quartic moments weight level n by n²,
        // so the n²-weighted tail must be small relative to the whole.
        let reach = (2 * working_levels + 2) as f64;
        let moment_scale = working.moment_weight_beyond(0).max(1.0);
        let moment_tail = (working.moment_weight_beyond(levels) + lost * reach * reach) / moment_scale;
        if tail < policy.tail_tolerance && moment_tail < policy.tail_tolerance {
            return Ok(RealizedMode { working, levels, tail });
        }
        if policy.n_max.is_some() {
            return Err(Error::CutoffTooSmall(format!(
                "{spec:?} loses weight {tail:.3e} (relative moment weight {moment_tail:.3e}) beyond n_max = {}",
                levels - 1
            )));
        }
        levels = (levels as f64 * 1.5).ceil() as usize + 8;
        if levels > policy.max_levels {
            return Err(Error::CutoffTooSmall(format!(
                "{spec:?} needs more than {} levels per mode",
                policy.max_levels
            )));
        }
    }
}

/// A state on a finite basis, in the cheapest exact representation available.
#[derive(Clone, Debug)]
pub enum Realization {
    /// Uncorrelated modes (squeezed coherent, squeezed thermal, Fock).
    Product { mode1: RealizedMode, mode2: RealizedMode },
    /// Joint representation; `extended` is the same state at `n_max + 4`
    /// when the family allows it.
    Joint { state: JointState, extended: Option<JointState> },
}

impl Realization {
    /// Materializes the joint-space state, e.g. for direct operator checks.
    pub fn to_joint(&self, max_dim: usize) -> Result<JointState> {
        match self {
            Realization::Joint { state, .. } => Ok(state.clone()),
            Realization::Product { mode1, mode2 } => {
                let levels = mode1.levels.max(mode2.levels);
                let cutoff = Cutoff::new((levels - 1).max(1), Cutoff::DEFAULT_PAD)?;
                if cutoff.dim() > max_dim {
                    return Err(Error::NumericalFailure(format!(
                        "joint space of dimension {} exceeds the limit {max_dim}",
                        cutoff.dim()
                    )));
                }
                let (s1, s2) = (mode1.state(), mode2.state());
                let parts: Vec<(f64, DVector<C64>)> = s1
                    .components()
                    .into_iter()
                    .flat_map(|(w1, v1)| {
                        s2.components()
                            .into_iter()
                            .map(move |(w2, v2)| (w1 * w2, product_vector(cutoff, v1, v2)))
                    })
                    .collect();
                if parts.len() == 1 {
                    let (_, amplitudes) = parts.into_iter().next().expect("one part");
                    Ok(JointState::Pure { cutoff, amplitudes })
                } else {
                    Ok(JointState::Mixture { cutoff, parts })
                }
            }
        }
    }

    pub fn levels(&self) -> (usize, usize) {
        match self {
            Realization::Product { mode1, mode2 } => (mode1.levels, mode2.levels),
            Realization::Joint { state, .. } => {
                let l = state.cutoff().levels();
                (l, l)
            }
        }
    }
}

/// The product decomposition of a family, if it has one.
pub fn mode_specs(state: &TwoModeState) -> Option<[ModeSpec; 2]> {
    match *state {
        TwoModeState::SqueezedCoherent { z1, z2, a, b } => Some([
            ModeSpec { input: ModeInput::Coherent(z1), squeeze: 0.5 * (a - b) },
            ModeSpec { input: ModeInput::Coherent(z2), squeeze: 0.5 * (a + b) },
        ]),
        TwoModeState::SqueezedThermal { beta, a, b } => Some([
            ModeSpec { input: ModeInput::Thermal(beta), squeeze: 0.5 * (a - b) },
            ModeSpec { input: ModeInput::Thermal(beta), squeeze: 0.5 * (a + b) },
        ]),
        TwoModeState::Fock { n1, n2 } => Some([
            ModeSpec { input: ModeInput::Number(n1), squeeze: 0.0 },
            ModeSpec { input: ModeInput::Number(n2), squeeze: 0.0 },
        ]),
        _ => None,
    }
}

/// Realizes `state` under `policy`.
pub fn realize(state: &TwoModeState, policy: &TruncationPolicy) -> Result<Realization> {
    state.validate()?;
    if let Some([s1, s2]) = mode_specs(state) {
        return Ok(Realization::Product {
            mode1: realize_mode(&s1, policy)?,
            mode2: realize_mode(&s2, policy)?,
        });
    }
    match *state {
        TwoModeState::CoherentSuperposition { u1, u2, v1, v2, r, eta } => {
            let at = |n_max: usize| -> Result<(JointState, f64)> {
                let cutoff = Cutoff::with_n_max(n_max)?;
                let v = superposition_unnormalized(u1, u2, v1, v2, r, eta, cutoff);
                let norm_sqr = superposition_norm_sqr(u1, u2, v1, v2, r, eta);
                let kept = v.norm_squared();
                if !(norm_sqr > 0.0 && kept > 0.0) {
                    return Err(Error::ZeroIntensity(
                        "superposition with vanishing norm".to_string(),
                    ));
                }
                let tail = (1.0 - kept / norm_sqr).max(0.0);
                let amplitudes = &v / C64::from(kept.sqrt());
                Ok((JointState::Pure { cutoff, amplitudes }, tail))
            };
            let mut n_max = match policy.n_max {
                Some(n) => n,
                None => {
                    let nbar = (u1 * u1).max(v1 * v1).max(u2 * u2).max(v2 * v2);
                    ((nbar + 8.0 * nbar.sqrt()).ceil() as usize).max(4)
                }
            };
            loop {
                let (joint, tail) = at(n_max)?;
                let reach = (2 * n_max + 2) as f64;
                if tail < policy.tail_tolerance && tail * reach * reach < policy.tail_tolerance {
                    let (extended, _) = at(n_max + CONVERGENCE_STEP)?;
                    return Ok(Realization::Joint { state: joint, extended: Some(extended) });
                }
                if policy.n_max.is_some() {
                    return Err(Error::CutoffTooSmall(format!(
                        "superposition loses weight {tail:.3e} beyond n_max = {n_max}"
                    )));
                }
                n_max = (n_max as f64 * 1.5).ceil() as usize + 4;
                if n_max + 1 > policy.max_levels.min(200) {
                    return Err(Error::CutoffTooSmall(format!(
                        "superposition needs n_max above {n_max}"
                    )));
                }
            }
        }
        TwoModeState::ExplicitDensityMatrix(ref rho) => Ok(Realization::Joint {
            state: JointState::Density(rho.clone()),
            extended: None,
        }),
        _ => unreachable!("product families handled above"),
    }
}
