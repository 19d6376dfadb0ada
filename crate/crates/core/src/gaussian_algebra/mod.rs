//! Exponential vectors, units and automorphisms of the white-noise product system.
//!
//! Vectors of `L₂(Ω_T)` are finite combinations of exponentials `Exp(f)` with
//! piecewise-constant `f`; all inner products are closed-form through
//! `⟨Exp f, Exp g⟩ = exp⟨f, g⟩`.

mod automorphism;
mod relations;
mod span;
mod step;

pub use automorphism::{
    apply_automorphism, apply_automorphism_per_piece, apply_sequence, AutomorphismParams,
    UNIMODULAR_TOL,
};
pub use relations::{
    ccr_phase_residual, ccr_phase_residual_with, random_span, random_step_function,
    random_unit_span, relation_suite, relation_suite_with, RelationReport, RelationResidual,
    RELATION_TOL,
};
pub use span::{span_inner, unit, ExpSpan, ExpTerm, DEDUP_TOL, GRAM_CONDITION_WARN};
pub use step::{step_inner, StepFunction};
