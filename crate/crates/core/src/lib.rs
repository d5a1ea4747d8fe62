//! The U(2)-invariant Mandel parameter of two-mode light.
//!
//! `Q(ρ)` is the smallest Mandel Q over every mode `a(α) = α1* a1 + α2* a2`
//! reachable from the two original modes by passive mixing. The library
//! computes it for squeezed coherent states, squeezed thermal states,
//! superpositions of two coherent states, Fock states and arbitrary truncated
//! density matrices.
//!
//! ```
//! use mandelq::{invariant_mandel_q, QOptions, TwoModeState};
//!
//! let r = invariant_mandel_q(&TwoModeState::Fock { n1: 2, n2: 1 }, &QOptions::default()).unwrap();
//! assert!((r.q_min + 2.0 / 3.0).abs() < 1e-12);
//! assert!((r.q_bar.q.z - 1.0).abs() < 1e-12);
//! ```

pub mod closed_forms;
pub mod error;
pub mod fock;
pub mod minimizer;
pub mod moments;
pub mod sweep;

pub use error::{Error, Result, ValidationError};
pub use fock::{Cutoff, Family, TruncatedOperator, TruncationPolicy, TwoModeState};
pub use minimizer::{invariant_mandel_q, CrossCheck, Method, QOptions, QResult};
pub use moments::{SU2Element, SphereDirection};

// Each guide chapter runs as a doctest.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/moments.md")]
    mod moments {}
    #[doc = include_str!("../../../book/src/minimizer.md")]
    mod minimizer {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
