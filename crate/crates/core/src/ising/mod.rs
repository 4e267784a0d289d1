//! Transverse-field Ising model of an MIS instance, annealing schedules and
//! classical descent on the problem Hamiltonian.

mod descent;
mod model;
mod schedule;

pub use descent::{descent_map, gradient_descent, steepest_flip};
pub use model::{Coupling, TransverseFieldModel};
pub use schedule::{Schedule, ScheduleValues, ENDPOINT_RATIO};

use crate::graphs::ProblemInstance;
use crate::Result;

/// Ising model of `inst` with the given transverse fields (all ones when
/// `None`).
pub fn build_model(inst: &ProblemInstance, delta: Option<&[f64]>) -> Result<TransverseFieldModel> {
    TransverseFieldModel::from_instance(inst, delta)
}
