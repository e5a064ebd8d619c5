//! Method-of-lines time stepping: classical RK4 with Kreiss-Oliger dissipation on an
//! active box that follows the light cone of the initial support.

use super::par::{for_slabs, try_for_slabs};
use super::spec::{GridSpec, Region, RK4_STABILITY};
use super::state::FieldState;
use super::stencil::ko_point;
use crate::error::{GridError, ModelError};

/// Cells adjacent to a face that must stay free of the solution.
pub const MARGIN_CELLS: usize = 4;
/// Cells never updated by the stepper (dissipation stencil reach).
pub const HALO_CELLS: usize = 3;

/// Second-order-in-time model `d/dt pi = F(phi, pi)`.
pub trait Rhs: Sync {
    /// Writes `d/dt pi` at every point of `region` into `out`.
    fn pi_dot(
        &self,
        grid: &GridSpec,
        t: f64,
        phi: &[f64],
        pi: &[f64],
        region: &Region,
        out: &mut [f64],
    ) -> Result<(), ModelError>;

    /// Bound on characteristic speeds, used for the time step.
    fn max_speed(&self) -> f64 {
        1.0
    }
}

/// Where the stepper updates the fields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ActiveRegion {
    /// Every point away from the halo.
    Full,
    /// Box around the ball `|y - center| <= radius + (t - t0)` grown by `pad`.
    Cone { center: [f64; 3], radius: f64, t0: f64, pad: f64 },
}

impl ActiveRegion {
    pub fn region(&self, grid: &GridSpec, t: f64) -> Region {
        let inner = grid.interior(HALO_CELLS);
        match *self {
            ActiveRegion::Full => inner,
            ActiveRegion::Cone { center, radius, t0, pad } => {
                Region::around(grid, center, radius + (t - t0).max(0.0) + pad).meet(&inner)
            }
        }
    }
}

/// Post-step checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Guards {
    /// Relative size above which a value counts as nonzero in the margin or ahead of the cone.
    pub escape_tol: f64,
    /// Extra distance beyond the cone tolerated before a value counts as escaped, in cells.
    pub cone_cells: f64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { escape_tol: 1e-4, cone_cells: 8.0 }
    }
}

pub struct Stepper {
    pub grid: GridSpec,
    pub active: ActiveRegion,
    pub guards: Guards,
    acc_phi: Vec<f64>,
    acc_pi: Vec<f64>,
    tmp_phi: Vec<f64>,
    tmp_pi: Vec<f64>,
    k_phi: Vec<f64>,
    k_pi: Vec<f64>,
}

fn region_slabs<F>(grid: &GridSpec, region: &Region, out: &mut [f64], f: F)
where
    F: Fn(usize, usize, &mut f64) + Sync + Send,
{
    let n = grid.n;
    let slab = n * n;
    for_slabs(out, slab, |i, chunk| {
        if i < region.lo[0] || i >= region.hi[0] {
            return;
        }
        for j in region.lo[1]..region.hi[1] {
            for k in region.lo[2]..region.hi[2] {
                let off = j * n + k;
                f(i * slab + off, i, &mut chunk[off]);
            }
        }
    });
}

impl Stepper {
    pub fn new(grid: GridSpec, active: ActiveRegion) -> Self {
        let z = vec![0.0; grid.len()];
        Stepper {
            grid,
            active,
            guards: Guards::default(),
            acc_phi: z.clone(),
            acc_pi: z.clone(),
            tmp_phi: z.clone(),
            tmp_pi: z.clone(),
            k_phi: z.clone(),
            k_pi: z,
        }
    }

    pub fn with_guards(mut self, guards: Guards) -> Self {
        self.guards = guards;
        self
    }

    /// `d/dt (phi, pi)` of the stage `(tmp_phi, tmp_pi)` into `(k_phi, k_pi)`.
    fn stage<M: Rhs>(&mut self, model: &M, t: f64, region: &Region) -> Result<(), ModelError> {
        let grid = self.grid;
        model.pi_dot(&grid, t, &self.tmp_phi, &self.tmp_pi, region, &mut self.k_pi)?;
        let eps = grid.dissipation;
        let strides = grid.strides();
        let scale = eps / (64.0 * grid.h());
        let (tp, tq) = (&self.tmp_phi, &self.tmp_pi);
        region_slabs(&grid, region, &mut self.k_phi, |idx, _, o| {
            *o = tq[idx] + if eps > 0.0 { ko_point(tp, idx, strides, scale) } else { 0.0 };
        });
        if eps > 0.0 {
            region_slabs(&grid, region, &mut self.k_pi, |idx, _, o| {
                *o += ko_point(tq, idx, strides, scale);
            });
        }
        Ok(())
    }

    /// `acc += a k`, `tmp = base + b k` on the region.
    fn combine(&mut self, s: &FieldState, region: &Region, a: f64, b: Option<f64>) {
        let grid = self.grid;
        let (kp, kq) = (&self.k_phi, &self.k_pi);
        region_slabs(&grid, region, &mut self.acc_phi, |idx, _, o| *o += a * kp[idx]);
        region_slabs(&grid, region, &mut self.acc_pi, |idx, _, o| *o += a * kq[idx]);
        if let Some(b) = b {
            region_slabs(&grid, region, &mut self.tmp_phi, |idx, _, o| *o = s.phi[idx] + b * kp[idx]);
            region_slabs(&grid, region, &mut self.tmp_pi, |idx, _, o| *o = s.pi[idx] + b * kq[idx]);
        }
    }

    /// Advances `state` by `dt` with classical RK4.
    pub fn step<M: Rhs>(&mut self, model: &M, state: &mut FieldState, dt: f64) -> Result<(), ModelError> {
        let limit = RK4_STABILITY * self.grid.h() / model.max_speed();
        if !(dt > 0.0 && dt <= limit) {
            return Err(GridError::Cfl { dt, limit }.into());
        }
        let t = state.t;
        let region = self.active.region(&self.grid, t + dt);
        self.acc_phi.copy_from_slice(&state.phi);
        self.acc_pi.copy_from_slice(&state.pi);
        self.tmp_phi.copy_from_slice(&state.phi);
        self.tmp_pi.copy_from_slice(&state.pi);
        self.stage(model, t, &region)?;
        self.combine(state, &region, dt / 6.0, Some(dt / 2.0));
        self.stage(model, t + dt / 2.0, &region)?;
        self.combine(state, &region, dt / 3.0, Some(dt / 2.0));
        self.stage(model, t + dt / 2.0, &region)?;
        self.combine(state, &region, dt / 3.0, Some(dt));
        self.stage(model, t + dt, &region)?;
        self.combine(state, &region, dt / 6.0, None);
        std::mem::swap(&mut state.phi, &mut self.acc_phi);
        std::mem::swap(&mut state.pi, &mut self.acc_pi);
        state.t = t + dt;
        self.check(state, &region)?;
        Ok(())
    }

    /// Finiteness, margin and light-cone checks after a step.
    pub fn check(&self, s: &FieldState, region: &Region) -> Result<(), GridError> {
        let grid = &self.grid;
        let n = grid.n;
        let h = grid.h();
        let slab = n * n;
        // per-slab (max |phi|, first non-finite, worst margin value, worst escape value)
        type SlabStats = (f64, bool, (f64, usize), (f64, usize));
        let stats: Vec<SlabStats> = super::par::map_indices(n, |i| {
            let mut st: SlabStats = (0.0, false, (0.0, 0), (0.0, 0));
            if i < region.lo[0] || i >= region.hi[0] {
                return st;
            }
            for j in region.lo[1]..region.hi[1] {
                for k in region.lo[2]..region.hi[2] {
                    let idx = i * slab + j * n + k;
                    let v = s.phi[idx].abs().max(s.pi[idx].abs());
                    if !v.is_finite() {
                        st.1 = true;
                        continue;
                    }
                    st.0 = st.0.max(v);
                    let p = [i, j, k];
                    if p.iter().any(|&c| c < MARGIN_CELLS || c + MARGIN_CELLS >= n) && v > st.2 .0 {
                        st.2 = (v, idx);
                    }
                    if let ActiveRegion::Cone { center, radius, t0, .. } = self.active {
                        let y = grid.point(idx);
                        let d = ((y[0] - center[0]).powi(2) + (y[1] - center[1]).powi(2) + (y[2] - center[2]).powi(2))
                            .sqrt();
                        if d > radius + (s.t - t0) + self.guards.cone_cells * h && v > st.3 .0 {
                            st.3 = (v, idx);
                        }
                    }
                }
            }
            st
        });
        if stats.iter().any(|st| st.1) {
            return Err(GridError::NonFinite { y0: s.t });
        }
        let max = stats.iter().fold(0.0f64, |m, st| m.max(st.0));
        let tol = self.guards.escape_tol * max;
        for st in &stats {
            if st.2 .0 > tol && st.2 .0 > 0.0 {
                return Err(GridError::SupportEscape { y0: s.t, value: st.2 .0, point: grid.point(st.2 .1) });
            }
            if st.3 .0 > tol && st.3 .0 > 0.0 {
                return Err(GridError::SupportEscape { y0: s.t, value: st.3 .0, point: grid.point(st.3 .1) });
            }
        }
        Ok(())
    }
}

/// Largest value ahead of the light cone of the initial support, relative to the maximum.
pub fn cone_leak(grid: &GridSpec, s: &FieldState, center: [f64; 3], radius: f64, t0: f64, cells: f64) -> f64 {
    let mut max = 0.0f64;
    let mut out = 0.0f64;
    let edge = radius + (s.t - t0) + cells * grid.h();
    for idx in 0..grid.len() {
        let v = s.phi[idx].abs();
        max = max.max(v);
        let y = grid.point(idx);
        let d = ((y[0] - center[0]).powi(2) + (y[1] - center[1]).powi(2) + (y[2] - center[2]).powi(2)).sqrt();
        if d > edge {
            out = out.max(v);
        }
    }
    if max > 0.0 {
        out / max
    } else {
        0.0
    }
}

/// Grid form of the support condition at the current time: points whose value exceeds
/// `tol` times the maximum must satisfy `|y - center|^2 <= (t - 2 + radius)^2 + 4h`,
/// which for the unit ball at the origin reads `2 y0 <= tau^2 + 1 + 4h`.
/// Returns the number of violating points and their largest relative value.
pub fn support_condition(grid: &GridSpec, s: &FieldState, center: [f64; 3], radius: f64, tol: f64) -> (usize, f64) {
    let max = s.phi.iter().chain(&s.pi).fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return (0, 0.0);
    }
    let reach = (s.t - 2.0 + radius).max(0.0);
    let bound = reach * reach + 4.0 * grid.h();
    let mut count = 0;
    let mut worst = 0.0f64;
    for idx in 0..grid.len() {
        let v = s.phi[idx].abs().max(s.pi[idx].abs()) / max;
        if v <= tol {
            continue;
        }
        let y = grid.point(idx);
        let d2 = (y[0] - center[0]).powi(2) + (y[1] - center[1]).powi(2) + (y[2] - center[2]).powi(2);
        if d2 > bound {
            count += 1;
            worst = worst.max(v);
        }
    }
    (count, worst)
}

/// Linear wave `d/dt pi = Laplacian phi`, used by grid tests and as the zero-profile model.
pub struct LinearWave;

impl Rhs for LinearWave {
    fn pi_dot(
        &self,
        grid: &GridSpec,
        _t: f64,
        phi: &[f64],
        _pi: &[f64],
        region: &Region,
        out: &mut [f64],
    ) -> Result<(), ModelError> {
        let ps = super::stencil::PointStencil::new(grid);
        region_slabs(grid, region, out, |idx, _, o| *o = ps.laplacian(phi, idx));
        Ok(())
    }
}

/// Applies a pointwise closure on the region slab by slab, stopping at the first error.
pub fn try_region_map<F>(grid: &GridSpec, region: &Region, out: &mut [f64], f: F) -> Result<(), ModelError>
where
    F: Fn(usize) -> Result<f64, ModelError> + Sync + Send,
{
    let n = grid.n;
    let slab = n * n;
    try_for_slabs(out, slab, |i, chunk| {
        if i < region.lo[0] || i >= region.hi[0] {
            return Ok(());
        }
        for j in region.lo[1]..region.hi[1] {
            for k in region.lo[2]..region.hi[2] {
                let off = j * n + k;
                chunk[off] = f(i * slab + off)?;
            }
        }
        Ok(())
    })
}
