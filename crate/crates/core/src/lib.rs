//! Numerical laboratory for automorphisms of the white-noise and Warren-noise
//! product systems.
//!
//! * [`gaussian_algebra`]: exponential vectors, units and the shift/rotation
//!   automorphisms, with closed-form inner products.
//! * [`ccr_matrix`]: finite CCR pairs, the spectral sign calculus and the
//!   norm of `sgn P + sgn Q + sgn R`.
//! * [`warren_sim`]: Monte Carlo for Warren's noise of splitting, its first
//!   superchaos and the quadratic forms that drive the obstruction report.
//! * [`artifacts`]: CSV/JSON artifact formats.

pub mod artifacts;
pub mod ccr_matrix;
pub mod error;
pub mod gaussian_algebra;
pub mod warren_sim;

pub use error::{Error, Result};

/// Caps the worker threads used by the Monte Carlo and dense linear algebra.
///
/// Must be called before any parallel work; `0` keeps the defaults.
pub fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| error::invalid("threads", e.to_string()))?;
    let par = match std::num::NonZeroUsize::new(threads) {
        Some(n) if threads > 1 => faer::Par::Rayon(n),
        _ => faer::Par::Seq,
    };
    faer::set_global_parallelism(par);
    Ok(())
}
