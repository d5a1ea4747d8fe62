//! Truncated two-mode Fock space: operators, state constructors, expectation values.

mod cutoff;
mod density_file;
mod expm;
mod operator;
mod realize;
pub mod single_mode;
mod state;

pub use cutoff::Cutoff;
pub use density_file::{
    parse_density_matrix, read_density_matrix, validate_density, write_density_matrix,
};
pub use expm::expm;
pub use operator::{
    ladder_operators, noncompact_generators, number_conserving_generators, passive_transform,
    TruncatedOperator,
};
pub use realize::{
    mode_specs, realize, realize_mode, ModeInput, ModeSpec, Realization, RealizedMode,
    TruncationPolicy, CONVERGENCE_STEP,
};
pub use state::{
    apply_squeeze, coherent_state, expectation, fock_state, lower_joint, product_vector,
    projected_squeeze, recommended_pad, squeeze_operator, superposition_norm_sqr,
    superposition_state, thermal_density, Family, JointState, TwoModeState, TAIL_TOLERANCE,
};
