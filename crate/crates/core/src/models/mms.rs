//! Manufactured solution `phi* = A exp(-|ybar|^2) sin y0` with its exact jet and forcing.

use serde::{Deserialize, Serialize};

use super::quasilinear::{solve_phi00, CoordJet, ProfileAt};
use super::{null_u, semilinear_point, Model, ModelKind};
use crate::error::ModelError;
use crate::grid::evolve::{ActiveRegion, Stepper};
use crate::grid::spec::GridSpec;
use crate::grid::state::FieldState;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manufactured {
    pub amplitude: f64,
}

impl Manufactured {
    /// Exact jet including `phi_00`.
    pub fn jet(&self, y: [f64; 4]) -> CoordJet {
        let r2 = y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
        let e = self.amplitude * (-r2).exp();
        let phi = e * y[0].sin();
        let phi0 = e * y[0].cos();
        let mut d1 = [phi0, 0.0, 0.0, 0.0];
        let mut d2 = [[0.0; 4]; 4];
        d2[0][0] = -phi;
        for i in 1..4 {
            d1[i] = -2.0 * y[i] * phi;
            d2[0][i] = -2.0 * y[i] * phi0;
            d2[i][0] = d2[0][i];
            for j in 1..4 {
                let delta = if i == j { 2.0 } else { 0.0 };
                d2[i][j] = (4.0 * y[i] * y[j] - delta) * phi;
            }
        }
        CoordJet { y, phi, d1, d2 }
    }

    pub fn state(&self, grid: &GridSpec, t: f64) -> FieldState {
        let mut s = FieldState::zeros(grid.len(), t);
        for idx in 0..grid.len() {
            let p = grid.point(idx);
            let j = self.jet([t, p[0], p[1], p[2]]);
            s.phi[idx] = j.phi;
            s.pi[idx] = j.d1[0];
        }
        s
    }

    /// Source making `phi*` an exact solution of the model's equation.
    pub fn forcing(&self, model: &Model, y: [f64; 4]) -> Result<f64, ModelError> {
        let j = self.jet(y);
        let u = null_u(y[0], y[1]);
        let prof = ProfileAt { f2: model.profile.f2(u), f3: model.profile.f3(u) };
        let lap = j.d2[1][1] + j.d2[2][2] + j.d2[3][3];
        let rhs = match model.kind {
            ModelKind::Linear => lap,
            ModelKind::Semilinear => semilinear_point(lap, j.d1[0], j.d1[1], prof.f2),
            ModelKind::Quasilinear => solve_phi00(&j, prof, &model.thresholds)?,
        };
        Ok(j.d2[0][0] - rhs)
    }
}

/// Max-norm error of the forced evolution of `phi*` at `t_end`, with `dt = cfl h`.
pub fn mms_error(model: &Model, m: Manufactured, grid: GridSpec, t_end: f64) -> Result<f64, ModelError> {
    let forced = Model { forcing: Some(m), ..model.clone() };
    let mut s = m.state(&grid, 0.0);
    let mut stepper = Stepper::new(grid, ActiveRegion::Full);
    let steps = (t_end / (grid.cfl * grid.h())).ceil() as usize;
    let dt = t_end / steps as f64;
    for _ in 0..steps {
        stepper.step(&forced, &mut s, dt)?;
    }
    let exact = m.state(&grid, s.t);
    let inner = grid.interior(super::super::grid::evolve::HALO_CELLS);
    let mut err = 0.0f64;
    for idx in 0..grid.len() {
        if inner.contains(grid.unindex(idx)) {
            err = err.max((s.phi[idx] - exact.phi[idx]).abs());
        }
    }
    Ok(err)
}

/// Errors on successive resolutions and the observed orders between neighbours.
pub fn mms_convergence(model: &Model, m: Manufactured, half_width: f64, ns: &[usize], t_end: f64) -> Result<(Vec<f64>, Vec<f64>), ModelError> {
    let mut errs = Vec::new();
    for &n in ns {
        let grid = GridSpec::new(half_width, n, 0.0, 0.5)?;
        errs.push(mms_error(model, m, grid, t_end)?);
    }
    let hs: Vec<f64> = ns.iter().map(|&n| 2.0 * half_width / (n - 1) as f64).collect();
    let orders = (1..ns.len()).map(|k| (errs[k - 1] / errs[k]).ln() / (hs[k - 1] / hs[k]).ln()).collect();
    Ok((errs, orders))
}
