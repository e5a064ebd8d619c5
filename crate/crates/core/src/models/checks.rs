//! Whole-evolution checks: preservation of the background and the linearization.

use super::{Model, ModelKind};
use crate::error::ModelError;
use crate::geometry::profile::PlaneWaveProfile;
use crate::grid::evolve::{ActiveRegion, Stepper};
use crate::grid::spec::GridSpec;
use crate::grid::state::FieldState;

/// Evolves `phi = 0` for 100 steps and returns `max |phi| + |pi|`.
pub fn background_residual(kind: ModelKind, profile: &PlaneWaveProfile, grid: GridSpec) -> Result<f64, ModelError> {
    let model = Model::new(kind, profile.clone());
    let mut s = FieldState::zeros(grid.len(), 2.0);
    let mut stepper = Stepper::new(grid, ActiveRegion::Full);
    let dt = grid.dt(1.0);
    for _ in 0..100 {
        stepper.step(&model, &mut s, dt)?;
    }
    Ok(s.phi.iter().zip(&s.pi).map(|(a, b)| a.abs() + b.abs()).fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationReport {
    pub eps: f64,
    /// `max |phi_eps/eps - phi_{eps/2}/(eps/2)|`
    pub scaled_difference: f64,
    /// `max |phi_eps / eps|`
    pub scaled_size: f64,
}

impl LinearizationReport {
    pub fn relative(&self) -> f64 {
        if self.scaled_size > 0.0 {
            self.scaled_difference / self.scaled_size
        } else {
            0.0
        }
    }
}

/// Evolves `eps * data` and `eps/2 * data` to `t_end` and compares the rescaled solutions.
pub fn linearization_check(
    model: &Model,
    grid: GridSpec,
    active: ActiveRegion,
    data: &FieldState,
    eps: f64,
    t_end: f64,
) -> Result<LinearizationReport, ModelError> {
    let a = evolve_scaled(model, grid, active, data, eps, t_end)?;
    let b = evolve_scaled(model, grid, active, data, eps / 2.0, t_end)?;
    let mut diff = 0.0f64;
    let mut size = 0.0f64;
    for (x, y) in a.phi.iter().zip(&b.phi) {
        diff = diff.max((x / eps - y / (eps / 2.0)).abs());
        size = size.max((x / eps).abs());
    }
    Ok(LinearizationReport { eps, scaled_difference: diff, scaled_size: size })
}

/// Evolves `scale * data` to `t_end` with the grid's time step.
pub fn evolve_scaled(model: &Model, grid: GridSpec, active: ActiveRegion, data: &FieldState, scale: f64, t_end: f64) -> Result<FieldState, ModelError> {
    let mut s = FieldState {
        t: data.t,
        phi: data.phi.iter().map(|v| v * scale).collect(),
        pi: data.pi.iter().map(|v| v * scale).collect(),
    };
    let mut stepper = Stepper::new(grid, active);
    let steps = ((t_end - data.t) / grid.dt(1.0)).ceil().max(1.0) as usize;
    let dt = (t_end - data.t) / steps as f64;
    for _ in 0..steps {
        stepper.step(model, &mut s, dt)?;
    }
    Ok(s)
}
