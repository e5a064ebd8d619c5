//! Uniform cubic grid in `(y1, y2, y3)` and index boxes on it.

use serde::{Deserialize, Serialize};

use crate::error::GridError;

/// Largest stable `dt / h` for RK4 with the 4th-order Laplacian at unit speed.
pub const RK4_STABILITY: f64 = 0.7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Half-width `R` of the box `[-R, R]^3`.
    pub half_width: f64,
    /// Points per axis (odd).
    pub n: usize,
    /// Stencil order; only 4 is implemented.
    pub order: usize,
    /// Kreiss-Oliger coefficient.
    pub dissipation: f64,
    /// CFL factor `dt = cfl * h / speed`.
    pub cfl: f64,
}

impl GridSpec {
    pub fn new(half_width: f64, n: usize, dissipation: f64, cfl: f64) -> Result<Self, GridError> {
        let g = GridSpec { half_width, n, order: 4, dissipation, cfl };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(GridError::Spec(format!("half-width must be positive, got {}", self.half_width)));
        }
        if self.n < 17 || self.n % 2 == 0 {
            return Err(GridError::Spec(format!("points per axis must be odd and at least 17, got {}", self.n)));
        }
        if self.order != 4 {
            return Err(GridError::Spec(format!("stencil order {} not implemented", self.order)));
        }
        if !(self.dissipation >= 0.0 && self.dissipation <= 1.0) {
            return Err(GridError::Spec(format!("dissipation must lie in [0, 1], got {}", self.dissipation)));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(GridError::Spec(format!("cfl factor must lie in (0, 1), got {}", self.cfl)));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn dt(&self, speed: f64) -> f64 {
        self.cfl * self.h() / speed
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.h()
    }

    /// Nearest index to coordinate `x`, clamped to the box.
    pub fn index_of(&self, x: f64) -> usize {
        let i = ((x + self.half_width) / self.h()).round();
        i.clamp(0.0, (self.n - 1) as f64) as usize
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn unindex(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.unindex(idx);
        [self.coord(i), self.coord(j), self.coord(k)]
    }

    pub fn strides(&self) -> [usize; 3] {
        [self.n * self.n, self.n, 1]
    }

    pub fn full(&self) -> Region {
        Region::cube(0, self.n)
    }

    /// Points at least `halo` cells away from every face.
    pub fn interior(&self, halo: usize) -> Region {
        Region::cube(halo, self.n - halo)
    }
}

/// Half-open index box `lo <= i < hi` on each axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub lo: [usize; 3],
    pub hi: [usize; 3],
}

impl Region {
    pub fn cube(lo: usize, hi: usize) -> Self {
        Region { lo: [lo; 3], hi: [hi; 3] }
    }

    pub fn contains(&self, p: [usize; 3]) -> bool {
        (0..3).all(|a| p[a] >= self.lo[a] && p[a] < self.hi[a])
    }

    pub fn is_empty(&self) -> bool {
        (0..3).any(|a| self.hi[a] <= self.lo[a])
    }

    pub fn count(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (0..3).map(|a| self.hi[a] - self.lo[a]).product()
        }
    }

    /// Intersection with another box.
    pub fn meet(&self, o: &Region) -> Region {
        let mut r = *self;
        for a in 0..3 {
            r.lo[a] = r.lo[a].max(o.lo[a]);
            r.hi[a] = r.hi[a].min(o.hi[a]).max(r.lo[a]);
        }
        r
    }

    /// Box covering `|y^a - center^a| <= radius` on `grid`.
    pub fn around(grid: &GridSpec, center: [f64; 3], radius: f64) -> Region {
        let h = grid.h();
        let mut r = Region::cube(0, grid.n);
        for a in 0..3 {
            let lo = ((center[a] - radius + grid.half_width) / h).floor();
            let hi = ((center[a] + radius + grid.half_width) / h).ceil() + 1.0;
            r.lo[a] = lo.clamp(0.0, grid.n as f64) as usize;
            r.hi[a] = hi.clamp(0.0, grid.n as f64) as usize;
        }
        r
    }
}
