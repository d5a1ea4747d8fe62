use crate::error::{Error, Result};

/// Per-mode photon-number cutoff for the two-mode truncated space.
///
/// Basis vectors are laid out as `index(n1, n2) = n1 * (n_max + 1) + n2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cutoff {
    pub n_max: usize,
    /// Extra levels kept while exponentiating, projected away afterwards.
    pub pad: usize,
}

impl Cutoff {
    pub const DEFAULT_PAD: usize = 8;

    pub fn new(n_max: usize, pad: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::CutoffTooSmall(format!(
                "n_max must be at least 1, got {n_max}"
            )));
        }
        Ok(Cutoff { n_max, pad })
    }

    pub fn with_n_max(n_max: usize) -> Result<Self> {
        Self::new(n_max, Self::DEFAULT_PAD)
    }

    /// Levels per mode, `n_max + 1`.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        self.levels() * self.levels()
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        debug_assert!(n1 <= self.n_max && n2 <= self.n_max);
        n1 * self.levels() + n2
    }

    pub fn occupation(&self, index: usize) -> (usize, usize) {
        (index / self.levels(), index % self.levels())
    }

    /// Basis indices whose total photon number is at most `total`.
    pub fn indices_with_total_at_most(&self, total: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                let (n1, n2) = self.occupation(i);
                n1 + n2 <= total
            })
            .collect()
    }
}
