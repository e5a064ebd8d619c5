//! Uniform Cartesian grid in `ybar`, finite-difference stencils, RK4 evolution in `y0`,
//! time history, jets and hyperboloid restrictions.

pub mod checkpoint;
pub mod evolve;
pub mod jet;
pub mod par;
pub mod sigma;
pub mod spec;
pub mod state;
pub mod stencil;

pub use checkpoint::{read_checkpoint, write_checkpoint};
pub use evolve::{ActiveRegion, Guards, LinearWave, Rhs, Stepper};
pub use jet::{boost_on_slice, jet_eval, spatial_mixed, time_derivative_from_history, JetRequest};
pub use sigma::{vectorfield_apply, SigmaGrid, SigmaPair};
pub use spec::{GridSpec, Region};
pub use state::{FieldState, History, HISTORY_DEPTH};
pub use stencil::{derivative_interior, spatial_derivative};
