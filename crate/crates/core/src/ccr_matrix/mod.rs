//! Finite CCR pairs and the spectral sign calculus.
//!
//! Two independent discretizations are provided: truncation to the first `N`
//! Fock states ([`Scheme::Oscillator`]) and a position grid with exact
//! Fourier differentiation ([`Scheme::Grid`]). The sign of a truncation is not
//! the truncation of the sign, so agreement between the two is the
//! convergence certificate for every norm computed here.

mod coherent;
mod hermitian;
mod norms;
mod triple;

pub use coherent::{
    coherent_tail_mass, coherent_vector, normalized, sgn_expectation, sign_expectation,
    COHERENT_TAIL_LIMIT,
};
pub use hermitian::{
    commutator, hermitian_defect, max_abs, sgn_of_matrix, sgn_op, HermitianMatrix,
    HERMITIAN_RTOL, ZERO_EIGENVALUE_RTOL,
};
pub use norms::{
    convergence_study, fock_rotation_phases, lemma23_operator, lemma23_value, sign_sum,
    sign_sum_norm, ConvergenceRow, ConvergenceTable, CROSS_SCHEME_TOL,
};
pub use triple::{
    build_pair, default_half_width, grid_momentum, grid_points, grid_wavenumbers,
    ladder_momentum, ladder_position, symmetric_triple, symmetric_triple_in, CcrTriple, Scheme,
    GRID_VACUUM_RTOL,
};
