//! Warren's noise of splitting on a finite time grid.
//!
//! A path is a Gaussian random walk on `{j/m}` whose strict three-point
//! minima carry i.i.d. ±1 signs. First-superchaos vectors, their quadratic
//! forms and the `ψ_{n,δ}` probes are evaluated per path and averaged over
//! seeded replicas; sign variables are integrated out exactly.

mod forms;
mod lemma43;
mod obstruction;
#[allow(non_snake_case)]
mod ops;
mod path;
mod profile;
mod psi;
mod rng;

pub use forms::{
    chaos_norm_sqr, coherent_sign_probe, estimate, path_integrand, quad_form_C, quad_form_pair,
    ratio_estimate, simulate, McConfig, McEstimate, PairEstimate,
};
pub use lemma43::{lemma43_table, validate_lemma43, Lemma43Diagnostics, Lemma43Row};
pub use obstruction::{obstruction_report, select_lemma43_row, NormInput, ObstructionReport};
pub use ops::{
    op_A, op_E, AvoidsInterval, ChaosTerm, ChaosVector, ConstantSet, FnSet, ProductSet,
    SetFunction, DEFAULT_MAX_ORDER,
};
pub use path::{grid_index, local_minima, sample_path, sign, WarrenPath};
pub use profile::{chaos_eval, chaos_eval_enumerated, PathFactor, Profile, SuperchaosVector, Weight};
pub use psi::{
    chi, phi, psi_eval, AlignedPsi, ConstantFunctional, FnFunctional, PathFunctional, PsiSpec,
    SplitSignProbe,
};
pub use rng::replica_rng;
