//! Restriction of the evolved fields to hyperboloids `Sigma_tau`.

use crate::error::DiagnosticsError;
use crate::grid::sigma::{SigmaGrid, SigmaPair};
use crate::grid::spec::{GridSpec, Region};
use crate::grid::state::History;

/// Forward light cone of the initial support `|ybar - center| <= radius` at `y0 = 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportCone {
    pub center: [f64; 3],
    pub radius: f64,
}

pub const INITIAL_TIME: f64 = 2.0;

impl SupportCone {
    pub fn unit() -> Self {
        SupportCone { center: [0.0; 3], radius: 1.0 }
    }

    /// Distance of `y` outside the cone (negative inside).
    pub fn excess(&self, y: [f64; 4]) -> f64 {
        let d = ((y[1] - self.center[0]).powi(2) + (y[2] - self.center[1]).powi(2) + (y[3] - self.center[2]).powi(2)).sqrt();
        d - (self.radius + y[0] - INITIAL_TIME)
    }

    /// Support condition with slack `slack` added to the squared radius; for the unit
    /// ball at the origin this is `2 y0 <= tau^2 + 1 + slack`.
    pub fn admits(&self, y: [f64; 4], slack: f64) -> bool {
        let d2 = (y[1] - self.center[0]).powi(2) + (y[2] - self.center[1]).powi(2) + (y[3] - self.center[2]).powi(2);
        let reach = (self.radius + y[0] - INITIAL_TIME).max(0.0);
        d2 <= reach * reach + slack
    }

    /// Largest `y0` of `Sigma_tau` inside the cone; needs `radius + |center| < 2`.
    pub fn y0_max(&self, tau: f64) -> f64 {
        let c = (self.center[0].powi(2) + self.center[1].powi(2) + self.center[2].powi(2)).sqrt();
        let a = INITIAL_TIME - self.radius - c;
        0.5 * (a + tau * tau / a)
    }

    /// Box of the grid containing `Sigma_tau` inside the cone, padded by `pad` cells.
    pub fn sigma_region(&self, grid: &GridSpec, tau: f64, pad: usize) -> Region {
        let reach = self.radius + self.y0_max(tau) - INITIAL_TIME + pad as f64 * grid.h();
        Region::around(grid, self.center, reach).meet(&grid.full())
    }
}

/// `phi` and `T phi` on `Sigma_tau` over a box of grid columns.
#[derive(Clone, Debug)]
pub struct HyperboloidSample {
    pub sg: SigmaGrid,
    pub pair: SigmaPair,
}

/// Cells of zero padding around the cone on each sample box.
pub const SAMPLE_PAD: usize = 3;

/// Samples `Sigma_tau` from a history whose window covers every column carrying a nonzero field.
pub fn sample_hyperboloid(grid: &GridSpec, history: &History, tau: f64, region: Region) -> Result<HyperboloidSample, DiagnosticsError> {
    let sg = SigmaGrid::new(grid, region, tau);
    let mut pair = SigmaPair { f: vec![0.0; sg.len()], tf: vec![0.0; sg.len()] };
    for idx in 0..sg.len() {
        let gi = sg.parent_index(grid, idx);
        match history.interpolate(gi, sg.y0[idx]) {
            Ok((f, tf)) => {
                pair.f[idx] = f;
                pair.tf[idx] = tf;
            }
            Err(_) => {
                if history.levels().any(|l| l.phi[gi] != 0.0 || l.pi[gi] != 0.0) {
                    return Err(DiagnosticsError::WindowInsufficient { tau });
                }
            }
        }
    }
    Ok(HyperboloidSample { sg, pair })
}

/// Sample of an analytic field `y -> (f, T f)`.
pub fn inject<F>(grid: &GridSpec, region: Region, tau: f64, f: F) -> HyperboloidSample
where
    F: Fn([f64; 4]) -> (f64, f64),
{
    let sg = SigmaGrid::new(grid, region, tau);
    let (f, tf) = (0..sg.len()).map(|i| f(sg.spacetime_point(i))).unzip();
    HyperboloidSample { sg, pair: SigmaPair { f, tf } }
}

struct Plan {
    sg: SigmaGrid,
    /// `(sample index, grid index, y0)` sorted by `y0`.
    points: Vec<(usize, usize, f64)>,
    next: usize,
    pair: SigmaPair,
}

/// Fills hyperboloid samples while the evolution advances, so that only the ring buffer of
/// recent levels is kept. A point is interpolated once the history reaches three levels past it.
pub struct IncrementalSampler {
    plans: Vec<Plan>,
    y0_needed: f64,
}

impl IncrementalSampler {
    pub fn new(grid: &GridSpec, taus: &[f64], cone: SupportCone) -> Self {
        let mut plans = Vec::new();
        let mut y0_needed = INITIAL_TIME;
        for &tau in taus {
            let sg = SigmaGrid::new(grid, cone.sigma_region(grid, tau, SAMPLE_PAD), tau);
            let mut points: Vec<(usize, usize, f64)> = (0..sg.len())
                .filter(|&i| cone.excess(sg.spacetime_point(i)) <= 0.0)
                .map(|i| (i, sg.parent_index(grid, i), sg.y0[i]))
                .collect();
            points.sort_by(|a, b| a.2.total_cmp(&b.2));
            if let Some(p) = points.last() {
                y0_needed = y0_needed.max(p.2);
            }
            let len = sg.len();
            plans.push(Plan { sg, points, next: 0, pair: SigmaPair { f: vec![0.0; len], tf: vec![0.0; len] } });
        }
        IncrementalSampler { plans, y0_needed }
    }

    /// Latest `y0` any sample needs.
    pub fn y0_needed(&self) -> f64 {
        self.y0_needed
    }

    pub fn pending(&self) -> usize {
        self.plans.len()
    }

    /// Interpolates every point the history can serve and returns the completed samples in
    /// order of `tau`. With `flush`, all remaining points must lie in the window.
    pub fn advance(&mut self, history: &History, flush: bool) -> Result<Vec<HyperboloidSample>, DiagnosticsError> {
        let times = history.times();
        let cutoff = if flush {
            f64::INFINITY
        } else if history.is_full() {
            times[times.len() - 3]
        } else {
            return Ok(Vec::new());
        };
        for plan in &mut self.plans {
            while plan.next < plan.points.len() && plan.points[plan.next].2 < cutoff {
                let (si, gi, y0) = plan.points[plan.next];
                let w = history.weights(y0, false).map_err(|_| DiagnosticsError::WindowInsufficient { tau: plan.sg.tau })?;
                let (f, tf) = history.combine_at(&w, gi);
                plan.pair.f[si] = f;
                plan.pair.tf[si] = tf;
                plan.next += 1;
            }
        }
        let mut done = Vec::new();
        let mut keep = Vec::new();
        for plan in self.plans.drain(..) {
            if plan.next == plan.points.len() {
                done.push(HyperboloidSample { sg: plan.sg, pair: plan.pair });
            } else {
                keep.push(plan);
            }
        }
        self.plans = keep;
        done.sort_by(|a, b| a.sg.tau.total_cmp(&b.sg.tau));
        Ok(done)
    }
}
