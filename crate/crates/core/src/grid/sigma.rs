//! Fields restricted to a hyperboloid `Sigma_tau`, parametrized by `ybar` on a sub-box
//! of the evolution grid.
//!
//! The boosts are tangent to `Sigma_tau`: with `f^(ybar) = f(sqrt(tau^2 + |ybar|^2), ybar)`
//! one has `L^i f = y0 d f^/d ybar^i`. A field is carried together with its `T`-derivative;
//! since `[T, L^i] = d_i` and `d_i = (L^i - y^i T)/y0`,
//! `T L^i f = L^i (T f) + (L^i f - y^i T f)/y0`, so words in the boosts need only `f` and
//! `T f` on the slice.

use super::spec::{GridSpec, Region};
use super::stencil::{apply_axis, weights, Dims, Edge};
use crate::error::GridError;
use crate::weight_algebra::Letter;

#[derive(Clone, Debug)]
pub struct SigmaGrid {
    pub tau: f64,
    pub h: f64,
    pub dims: Dims,
    /// Coordinates of the first point.
    pub origin: [f64; 3],
    /// Box of the parent grid covered by the sample.
    pub region: Region,
    /// `y0 = sqrt(tau^2 + |ybar|^2)` per point.
    pub y0: Vec<f64>,
    d1: Vec<f64>,
}

/// A field and its `T`-derivative on `Sigma_tau`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaPair {
    pub f: Vec<f64>,
    pub tf: Vec<f64>,
}

impl SigmaGrid {
    pub fn new(grid: &GridSpec, region: Region, tau: f64) -> Self {
        let dims = Dims([0, 1, 2].map(|a| region.hi[a] - region.lo[a]));
        let origin = [0, 1, 2].map(|a| grid.coord(region.lo[a]));
        let h = grid.h();
        let mut sg = SigmaGrid { tau, h, dims, origin, region, y0: Vec::new(), d1: weights(1, h).expect("order 1") };
        sg.y0 = (0..dims.len())
            .map(|i| {
                let p = sg.point(i);
                (tau * tau + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
            })
            .collect();
        sg
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let p = self.dims.unindex(idx);
        [0, 1, 2].map(|a| self.origin[a] + p[a] as f64 * self.h)
    }

    pub fn spacetime_point(&self, idx: usize) -> [f64; 4] {
        let p = self.point(idx);
        [self.y0[idx], p[0], p[1], p[2]]
    }

    /// Index of the same column in the parent grid.
    pub fn parent_index(&self, grid: &GridSpec, idx: usize) -> usize {
        let p = self.dims.unindex(idx);
        grid.index(p[0] + self.region.lo[0], p[1] + self.region.lo[1], p[2] + self.region.lo[2])
    }

    /// Induced volume weight `(tau / y0) h^3`.
    pub fn weight(&self, idx: usize) -> f64 {
        self.tau / self.y0[idx] * self.h.powi(3)
    }

    /// `L^{axis+1} f = y0 d f^/d ybar`, with zero extension outside the box.
    pub fn tangential(&self, f: &[f64], axis: usize) -> Vec<f64> {
        let mut d = apply_axis(f, self.dims, axis, &self.d1, Edge::ZeroPad);
        d.iter_mut().zip(&self.y0).for_each(|(v, y0)| *v *= y0);
        d
    }

    /// `(L^i f, T L^i f)` from `(f, T f)`.
    pub fn boost(&self, p: &SigmaPair, axis: usize) -> SigmaPair {
        let lf = self.tangential(&p.f, axis);
        let mut tlf = self.tangential(&p.tf, axis);
        for idx in 0..self.len() {
            let yi = self.point(idx)[axis];
            tlf[idx] += (lf[idx] - yi * p.tf[idx]) / self.y0[idx];
        }
        SigmaPair { f: lf, tf: tlf }
    }

    /// Coordinate gradient `(d_0 f, d_1 f, d_2 f, d_3 f)` at `idx` from `T f` and the boosts.
    pub fn coordinate_gradient(&self, idx: usize, tf: f64, lf: [f64; 3]) -> [f64; 4] {
        let p = self.point(idx);
        let y0 = self.y0[idx];
        [tf, (lf[0] - p[0] * tf) / y0, (lf[1] - p[1] * tf) / y0, (lf[2] - p[2] * tf) / y0]
    }
}

/// Applies a word (last letter first) to `base`. `T` may only be the outermost letter,
/// giving `T L^alpha f`; boosts carry the `T`-derivative along.
pub fn vectorfield_apply(sg: &SigmaGrid, base: &SigmaPair, letters: &[Letter]) -> Result<Vec<f64>, GridError> {
    if letters.len() > 4 {
        return Err(GridError::UnsupportedOrder(letters.len()));
    }
    let mut cur = base.clone();
    for (pos, &x) in letters.iter().enumerate().rev() {
        match x {
            Letter::L(i) if (1..=3).contains(&i) => cur = sg.boost(&cur, i - 1),
            Letter::T if pos == 0 => return Ok(cur.tf),
            Letter::T => return Err(GridError::UnsupportedOrder(letters.iter().filter(|&&l| l == Letter::T).count() + 1)),
            Letter::L(i) => return Err(GridError::Spec(format!("boost index {i} outside 1..=3"))),
        }
    }
    Ok(cur.f)
}
