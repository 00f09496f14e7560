//! States, bases, and the distances and long-time averages built on them.

mod basis;
mod distance;
mod ensemble;
mod packet;
mod state;

pub use basis::{project_probabilities, project_probabilities_mixed, Basis, LabeledBasis};
pub use distance::{fubini_study, physical_distance, physical_distance_mixed};
pub use ensemble::{diagonal_ensemble, diagonal_ensemble_mixed, EnsembleProjector};
pub use packet::{gaussian_line_state, gaussian_packet_state, GaussianPacket};
pub use state::{DensityMatrix, StateVector, STATE_TOL};
