//! Plane-wave background, coordinate charts, hyperboloidal foliation and metric assembly.

pub mod coords;
pub mod embedding;
pub mod metric;
pub mod profile;
pub mod quadrature;

pub use coords::{foliation_at, from_null, null_from_txt, reconstruct_txt, to_null, CoordinatePoint, Foliation, NullCoords};
pub use embedding::{embedding_and_normal, second_fundamental_form, Embedding};
pub use metric::{metric_at, metric_from_c, Jet1, Mat4, MetricState};
pub use profile::{Bump, PlaneWaveProfile};
