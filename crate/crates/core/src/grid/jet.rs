//! Mixed derivatives of the evolved fields on a constant-`y0` slice.

use super::spec::GridSpec;
use super::state::{FieldState, History};
use super::stencil::{check_halo, derivative_interior, half_width};
use crate::error::GridError;

/// Number of time derivatives reachable: `phi`, `pi`, and `d^2/dt^2 phi` from the model.
pub const SUBSTITUTION_DEPTH: usize = 2;
pub const MAX_TOTAL_ORDER: usize = 5;

/// `d^time/dy0^time d^space[0]/dy1 .. d^space[2]/dy3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JetRequest {
    pub time: usize,
    pub space: [usize; 3],
}

impl JetRequest {
    pub fn new(time: usize, space: [usize; 3]) -> Result<Self, GridError> {
        let r = JetRequest { time, space };
        if r.total() > MAX_TOTAL_ORDER {
            return Err(GridError::UnsupportedOrder(r.total()));
        }
        if time > SUBSTITUTION_DEPTH {
            return Err(GridError::UnsupportedOrder(time));
        }
        Ok(r)
    }

    pub fn total(&self) -> usize {
        self.time + self.space.iter().sum::<usize>()
    }
}

/// Evaluates a mixed derivative. `tt` is `d^2/dt^2 phi` from the model's TT-solve and is
/// needed only for requests with two time derivatives.
pub fn jet_eval(grid: &GridSpec, s: &FieldState, tt: Option<&[f64]>, req: JetRequest) -> Result<Vec<f64>, GridError> {
    let req = JetRequest::new(req.time, req.space)?;
    let base: &[f64] = match req.time {
        0 => &s.phi,
        1 => &s.pi,
        _ => tt.ok_or(GridError::UnsupportedOrder(req.time))?,
    };
    spatial_mixed(grid, base, req.space)
}

/// Composition of one-axis stencils; the input must vanish on the combined halo.
pub fn spatial_mixed(grid: &GridSpec, f: &[f64], space: [usize; 3]) -> Result<Vec<f64>, GridError> {
    let reach: usize = space.iter().filter(|&&o| o > 0).map(|&o| half_width(o)).sum();
    check_halo(grid, f, reach)?;
    let mut out = f.to_vec();
    for (axis, &o) in space.iter().enumerate() {
        if o > 0 {
            out = derivative_interior(grid, &out, axis, o)?;
        }
    }
    Ok(out)
}

/// `L^i phi = y0 d_i phi + y^i pi` on the current slice (`axis = i - 1`).
pub fn boost_on_slice(grid: &GridSpec, s: &FieldState, axis: usize) -> Result<Vec<f64>, GridError> {
    let mut space = [0; 3];
    space[axis] = 1;
    let d = spatial_mixed(grid, &s.phi, space)?;
    Ok((0..grid.len()).map(|idx| s.t * d[idx] + grid.point(idx)[axis] * s.pi[idx]).collect())
}

/// Time derivative at `t` of a field computed level by level from `phi`, by
/// differentiating the interpolating polynomial through the stored levels.
pub fn time_derivative_from_history<F>(history: &History, t: f64, f: F) -> Result<Vec<f64>, GridError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, GridError>,
{
    let w = history.weights(t, true)?;
    let mut out: Option<Vec<f64>> = None;
    for (l, &c) in history.levels().zip(&w) {
        let v = f(&l.phi)?;
        match &mut out {
            None => out = Some(v.iter().map(|x| c * x).collect()),
            Some(o) => o.iter_mut().zip(&v).for_each(|(a, b)| *a += c * b),
        }
    }
    out.ok_or(GridError::WindowInsufficient { needed: t, lo: f64::NAN, hi: f64::NAN })
}
