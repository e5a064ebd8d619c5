//! Symbolic bookkeeping of energy growth rates `δ^a τ^p ln(τ)^q` for the bootstrap
//! hierarchy: integrands, weight tables and closure checks.

pub mod bound;
pub mod expr;
pub mod quasilinear;
pub mod scheme;
pub mod semilinear;
pub mod tables;

pub use bound::{integrate_bound, rat, scheme_principle_apply, ExponentBound, GammaAffine, Rat};
pub use quasilinear::{quasilinear_close, QuasilinearReport, TermInventory};
pub use scheme::{BootstrapScheme, SchemeKind};
pub use semilinear::{close_bootstrap, semilinear_weight, ClosureReport};
pub use tables::{emit_table, Relation, TableReport};
