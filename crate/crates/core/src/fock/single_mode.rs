//! One-mode building blocks. Two-mode product states are assembled from these,
//! which keeps strongly squeezed states affordable: a single mode needs a few
//! hundred levels where the joint space would need that number squared.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen};
use num_complex::Complex64;

use super::expm::expm;

type C64 = Complex64;

/// `a v` on a single mode truncated to `v.len()` levels.
pub fn lower(v: &DVector<C64>) -> DVector<C64> {
    let n = v.len();
    DVector::from_fn(n, |k, _| if k + 1 < n { v[k + 1] * ((k + 1) as f64).sqrt() } else { C64::from(0.0) })
}

/// Amplitudes `e^{-|z|^2/2} z^n / sqrt(n!)` for `n < levels`, plus the exact
/// weight of the omitted tail.
pub fn coherent_amplitudes(z: C64, levels: usize) -> (DVector<C64>, f64) {
    let mut amps = DVector::from_element(levels, C64::from(0.0));
    let mut c = C64::from((-0.5 * z.norm_sqr()).exp());
    for (n, slot) in amps.iter_mut().enumerate() {
        if n > 0 {
            c *= z / (n as f64).sqrt();
        }
        *slot = c;
    }
    // Continue the recursion past the cutoff until the terms are negligible.
    let nbar = z.norm_sqr();
    let mut tail = 0.0;
    let mut n = levels;
    let mut c_n = if levels == 0 { C64::from((-0.5 * nbar).exp()) } else { c * z / (levels as f64).sqrt() };
    loop {
        let w = c_n.norm_sqr();
        tail += w;
        if (n as f64) > nbar && (w < tail * 1e-18 || w < 1e-300) {
            break;
        }
        n += 1;
        c_n *= z / (n as f64).sqrt();
    }
    (amps, tail)
}

/// Geometric weights `(1 - x) x^n`, `x = e^{-beta}`, for `n < levels`, and the omitted tail `x^levels`.
pub fn thermal_weights(beta: f64, levels: usize) -> (Vec<f64>, f64) {
    let x = (-beta).exp();
    let w = (0..levels).map(|n| (1.0 - x) * x.powi(n as i32)).collect();
    (w, x.powi(levels as i32))
}

/// Smallest level count whose geometric tail falls below `tol`.
pub fn thermal_levels_for_tail(beta: f64, tol: f64) -> usize {
    ((tol.ln() / -beta).ceil().max(1.0)) as usize
}

/// The generator `(r/2)(a†² − a²)` of a one-mode squeeze, truncated.
pub fn squeeze_generator(r: f64, levels: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(levels, levels);
    for n in 0..levels.saturating_sub(2) {
        let t = 0.5 * r * (((n + 1) * (n + 2)) as f64).sqrt();
        g[(n + 2, n)] = t;
        g[(n, n + 2)] = -t;
    }
    g
}

/// `exp((r/2)(a†² − a²))` by scaling and squaring; `S† a S = a cosh r + a† sinh r`.
pub fn squeeze_matrix(r: f64, levels: usize) -> DMatrix<f64> {
    expm(&squeeze_generator(r, levels))
}

/// Spectral form of the one-mode squeeze for large truncations.
///
/// The generator couples only levels of equal parity, and on each parity
/// block it is tridiagonal and real antisymmetric. Conjugating by
/// `diag(i^k)` turns such a block `T` into `i M` with `M` real symmetric, so
/// `exp(T) = D V e^{iΛ} Vᵀ D⁻¹` from one symmetric eigendecomposition.
#[derive(Clone, Debug)]
pub struct SqueezePropagator {
    levels: usize,
    blocks: [Option<ParityBlock>; 2],
}

#[derive(Clone, Debug)]
struct ParityBlock {
    vectors: DMatrix<f64>,
    phases: DVector<C64>,
}

impl SqueezePropagator {
    pub fn new(r: f64, levels: usize) -> Self {
        let block = |parity: usize| -> Option<ParityBlock> {
            let size = (levels + 1 - parity) / 2;
            if size == 0 {
                return None;
            }
            let mut m = DMatrix::<f64>::zeros(size, size);
            for k in 0..size.saturating_sub(1) {
                let n = parity + 2 * k;
                let t = 0.5 * r * (((n + 1) * (n + 2)) as f64).sqrt();
                m[(k, k + 1)] = -t;
                m[(k + 1, k)] = -t;
            }
            let eig = SymmetricEigen::new(m);
            let phases = eig.eigenvalues.map(|l| C64::from_polar(1.0, l));
            Some(ParityBlock { vectors: eig.eigenvectors, phases })
        };
        SqueezePropagator { levels, blocks: [block(0), block(1)] }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `S v` for `v` of length `levels`.
    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        assert_eq!(v.len(), self.levels);
        let mut out = DVector::from_element(self.levels, C64::from(0.0));
        for parity in 0..2 {
            let Some(block) = &self.blocks[parity] else { continue };
            let size = block.phases.len();
            // x_k = i^{-k} v_{parity + 2k}
            let x = DVector::from_fn(size, |k, _| v[parity + 2 * k] * i_pow(-(k as i64)));
            let mut y = DVector::from_fn(size, |j, _| {
                let mut acc = C64::from(0.0);
                for k in 0..size {
                    acc += x[k] * block.vectors[(k, j)];
                }
                acc * block.phases[j]
            });
            y = DVector::from_fn(size, |k, _| {
                let mut acc = C64::from(0.0);
                for j in 0..size {
                    acc += y[j] * block.vectors[(k, j)];
                }
                acc * i_pow(k as i64)
            });
            for k in 0..size {
                out[parity + 2 * k] = y[k];
            }
        }
        out
    }

    /// `S |n>`.
    pub fn apply_to_number_state(&self, n: usize) -> DVector<C64> {
        assert!(n < self.levels);
        let parity = n % 2;
        let k0 = n / 2;
        let mut out = DVector::from_element(self.levels, C64::from(0.0));
        let Some(block) = &self.blocks[parity] else { return out };
        let size = block.phases.len();
        let lead = i_pow(-(k0 as i64));
        let coeff: Vec<C64> = (0..size).map(|j| block.vectors[(k0, j)] * block.phases[j] * lead).collect();
        for k in 0..size {
            let mut acc = C64::from(0.0);
            for (j, c) in coeff.iter().enumerate() {
                acc += c * block.vectors[(k, j)];
            }
            out[parity + 2 * k] = acc * i_pow(k as i64);
        }
        out
    }
}

fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// A single-mode state: a pure vector or a weighted mixture of pure vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum ModeState {
    Pure(DVector<C64>),
    Mixture(Vec<(f64, DVector<C64>)>),
}

impl ModeState {
    pub fn levels(&self) -> usize {
        match self {
            ModeState::Pure(v) => v.len(),
            ModeState::Mixture(parts) => parts.first().map_or(0, |(_, v)| v.len()),
        }
    }

    pub fn components(&self) -> Vec<(f64, &DVector<C64>)> {
        match self {
            ModeState::Pure(v) => vec![(1.0, v)],
            ModeState::Mixture(parts) => parts.iter().map(|(w, v)| (*w, v)).collect(),
        }
    }

    /// Weight carried by levels `>= levels`.
    pub fn weight_beyond(&self, levels: usize) -> f64 {
        self.components()
            .into_iter()
            .map(|(w, v)| w * v.iter().skip(levels).map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// `Σ_{n >= levels} p_n (n+1)(n+2)`: how much the dropped levels
    /// contribute to the second factorial moment.
    pub fn moment_weight_beyond(&self, levels: usize) -> f64 {
        self.components()
            .into_iter()
            .map(|(w, v)| {
                w * v
                    .iter()
                    .enumerate()
                    .skip(levels)
                    .map(|(n, z)| z.norm_sqr() * ((n + 1) * (n + 2)) as f64)
                    .sum::<f64>()
            })
            .sum()
    }

    /// Truncates to `levels` and renormalizes every component.
    pub fn project(&self, levels: usize) -> ModeState {
        let cut = |v: &DVector<C64>| -> DVector<C64> {
            let mut p = DVector::from_fn(levels, |k, _| if k < v.len() { v[k] } else { C64::from(0.0) });
            let norm = p.norm();
            if norm > 0.0 {
                p /= C64::from(norm);
            }
            p
        };
        match self {
            ModeState::Pure(v) => ModeState::Pure(cut(v)),
            ModeState::Mixture(parts) => {
                ModeState::Mixture(parts.iter().map(|(w, v)| (*w, cut(v))).collect())
            }
        }
    }

    /// `g[p][r] = <a^p ψ | a^r ψ>` averaged over the mixture, for `p, r <= 2`.
    pub fn gram(&self) -> Matrix3<C64> {
        let mut g = Matrix3::zeros();
        for (w, v) in self.components() {
            let v1 = lower(v);
            let v2 = lower(&v1);
            let vs = [v, &v1, &v2];
            for p in 0..3 {
                for r in 0..3 {
                    g[(p, r)] += vs[p].dotc(vs[r]) * w;
                }
            }
        }
        g
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.gram()[(1, 1)].re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_squeeze_matches_scaling_and_squaring() {
        let levels = 40;
        for &r in &[0.3, -0.7, 1.1] {
            let dense = squeeze_matrix(r, levels);
            let prop = SqueezePropagator::new(r, levels);
            for n in [0usize, 1, 5, 12] {
                let col = prop.apply_to_number_state(n);
                for k in 0..levels {
                    assert!((col[k] - C64::from(dense[(k, n)])).norm() < 1e-11, "r={r} n={n} k={k}");
                }
            }
            let v = DVector::from_fn(levels, |k, _| C64::new((k as f64 * 0.37).sin(), (k as f64).cos() * 0.2));
            let dv = dense.map(C64::from) * &v;
            assert!((prop.apply(&v) - dv).norm() < 1e-10);
        }
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        let r: f64 = 0.6;
        let prop = SqueezePropagator::new(r, 120);
        let mode = ModeState::Pure(prop.apply_to_number_state(0));
        assert!((mode.mean_photon_number() - r.sinh().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn coherent_tail_is_poisson_remainder() {
        let (amps, tail) = coherent_amplitudes(C64::new(1.0, 0.0), 8);
        let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        assert!((kept + tail - 1.0).abs() < 1e-15);
        let mut term = (-1.0f64).exp();
        let mut head = 0.0;
        for k in 0..8 {
            if k > 0 {
                term /= k as f64;
            }
            head += term;
        }
        assert!((tail - (1.0 - head)).abs() < 1e-15);
    }
}
