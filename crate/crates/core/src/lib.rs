//! Hermite spectral solver for the inelastic Boltzmann equation.

pub mod checks;
pub mod coeff;
pub mod collision;
pub mod error;
pub mod hermite;
pub mod index;
pub mod io;
pub mod macrostate;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod state;
pub mod transport;

pub use coeff::{assemble_tensor, rescale_center, CollisionTensor, KernelSpec};
pub use error::{Error, Result};
pub use collision::CollisionModelParams;
pub use hermite::ExpansionCenter;
pub use index::{basis_size, IndexSet, MultiIndex};
pub use macrostate::{local_center_of, macro_from_state, MacroState};
pub use scalar::Real;
pub use state::{project, SpectralState};

/// Double-double scalar used where cancellation would ruin `f64`.
pub type ExactScalar = twofloat::TwoFloat;
pub type SpectralState64 = SpectralState<f64>;
pub type SpectralState32 = SpectralState<f32>;
pub type CollisionTensor64 = CollisionTensor;

/// Sizes the global worker pool used by assembly, transport and collision
/// sweeps. Must run before any parallel work; `0` keeps rayon's default.
pub fn configure_workers(n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot size worker pool: {e}")))
}
