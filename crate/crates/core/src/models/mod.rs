//! Right-hand sides of the evolved equations: the linear wave, the semilinear model
//! `d/dt pi = Laplacian phi + F''(u) (V phi)^2` and the quasilinear perturbation equation.

pub mod checks;
pub mod mms;
pub mod oracle;
pub mod quasilinear;
pub mod tt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::geometry::profile::PlaneWaveProfile;
use crate::grid::evolve::{try_region_map, Rhs};
use crate::grid::spec::{GridSpec, Region};
use crate::grid::state::FieldState;
use crate::grid::stencil::PointStencil;
pub use mms::Manufactured;
pub use quasilinear::{assemble, solve_phi00, Assembly, CoordJet, ProfileAt, Thresholds};
pub use tt::{tt_solve, FrameJet, TtState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Linear,
    Semilinear,
    Quasilinear,
}

/// `u = (y0 + y1)/sqrt 2`.
pub fn null_u(t: f64, y1: f64) -> f64 {
    (t + y1) * std::f64::consts::FRAC_1_SQRT_2
}

/// `V phi = (phi_0 - phi_1)/sqrt 2`.
pub fn vbar(phi0: f64, phi1: f64) -> f64 {
    (phi0 - phi1) * std::f64::consts::FRAC_1_SQRT_2
}

/// Pointwise semilinear right-hand side.
pub fn semilinear_point(laplacian: f64, pi: f64, phi_1: f64, f2: f64) -> f64 {
    let v = vbar(pi, phi_1);
    laplacian + f2 * v * v
}

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub kind: ModelKind,
    pub profile: PlaneWaveProfile,
    pub thresholds: Thresholds,
    /// Source added to `d/dt pi`, for manufactured solutions.
    pub forcing: Option<Manufactured>,
}

impl Model {
    pub fn new(kind: ModelKind, profile: PlaneWaveProfile) -> Self {
        Model { kind, profile, thresholds: Thresholds::default(), forcing: None }
    }

    pub fn with_forcing(mut self, m: Manufactured) -> Self {
        self.forcing = Some(m);
        self
    }

    /// `F''` and `F'''` for each index along the `y1` axis at time `t`.
    fn profile_table(&self, grid: &GridSpec, t: f64) -> Vec<ProfileAt> {
        (0..grid.n)
            .map(|i| {
                let u = null_u(t, grid.coord(i));
                if self.kind == ModelKind::Linear {
                    ProfileAt { f2: 0.0, f3: 0.0 }
                } else {
                    ProfileAt { f2: self.profile.f2(u), f3: self.profile.f3(u) }
                }
            })
            .collect()
    }

    /// Coordinate jet at a grid point from stencils on `phi` and `pi`, without `phi_00`.
    pub fn grid_jet(ps: &PointStencil, grid: &GridSpec, t: f64, phi: &[f64], pi: &[f64], idx: usize) -> CoordJet {
        let p = grid.point(idx);
        let mut d1 = [pi[idx], 0.0, 0.0, 0.0];
        let mut d2 = [[0.0; 4]; 4];
        for a in 0..3 {
            d1[a + 1] = ps.d1(phi, idx, a);
            let pa = ps.d1(pi, idx, a);
            d2[0][a + 1] = pa;
            d2[a + 1][0] = pa;
            d2[a + 1][a + 1] = ps.d2(phi, idx, a);
            for b in a + 1..3 {
                let m = ps.d11(phi, idx, a, b);
                d2[a + 1][b + 1] = m;
                d2[b + 1][a + 1] = m;
            }
        }
        CoordJet { y: [t, p[0], p[1], p[2]], phi: phi[idx], d1, d2 }
    }

    fn point_rhs(&self, ps: &PointStencil, grid: &GridSpec, t: f64, phi: &[f64], pi: &[f64], idx: usize, prof: ProfileAt) -> Result<f64, ModelError> {
        let base = match self.kind {
            ModelKind::Linear => ps.laplacian(phi, idx),
            ModelKind::Semilinear => semilinear_point(ps.laplacian(phi, idx), pi[idx], ps.d1(phi, idx, 0), prof.f2),
            ModelKind::Quasilinear => solve_phi00(&Self::grid_jet(ps, grid, t, phi, pi, idx), prof, &self.thresholds)?,
        };
        Ok(match &self.forcing {
            Some(m) => {
                let p = grid.point(idx);
                base + m.forcing(self, [t, p[0], p[1], p[2]])?
            }
            None => base,
        })
    }

    /// `d^2/dy0^2 phi` on a region of a state.
    pub fn phi00(&self, grid: &GridSpec, s: &FieldState, region: &Region) -> Result<Vec<f64>, ModelError> {
        let mut out = vec![0.0; grid.len()];
        self.pi_dot(grid, s.t, &s.phi, &s.pi, region, &mut out)?;
        Ok(out)
    }
}

impl Rhs for Model {
    fn pi_dot(&self, grid: &GridSpec, t: f64, phi: &[f64], pi: &[f64], region: &Region, out: &mut [f64]) -> Result<(), ModelError> {
        let ps = PointStencil::new(grid);
        let table = self.profile_table(grid, t);
        let n = grid.n;
        try_region_map(grid, region, out, |idx| {
            let i = idx / (n * n);
            self.point_rhs(&ps, grid, t, phi, pi, idx, table[i])
        })
    }
}
