//! Centered finite-difference stencils of fourth-order accuracy and their application
//! along one axis of a 3-d array.

use super::par::for_slabs;
use super::spec::GridSpec;
use crate::error::GridError;

/// Exact weights `(numerator, denominator)` at offsets `-m..=m`, derivative order 1..=5,
/// plus the sixth difference used for dissipation (order 6).
pub fn rational_weights(order: usize) -> Result<&'static [(i64, i64)], GridError> {
    const D1: [(i64, i64); 5] = [(1, 12), (-2, 3), (0, 1), (2, 3), (-1, 12)];
    const D2: [(i64, i64); 5] = [(-1, 12), (4, 3), (-5, 2), (4, 3), (-1, 12)];
    const D3: [(i64, i64); 7] = [(1, 8), (-1, 1), (13, 8), (0, 1), (-13, 8), (1, 1), (-1, 8)];
    const D4: [(i64, i64); 7] = [(-1, 6), (2, 1), (-13, 2), (28, 3), (-13, 2), (2, 1), (-1, 6)];
    const D5: [(i64, i64); 9] =
        [(1, 6), (-3, 2), (13, 3), (-29, 6), (0, 1), (29, 6), (-13, 3), (3, 2), (-1, 6)];
    const D6: [(i64, i64); 7] = [(1, 1), (-6, 1), (15, 1), (-20, 1), (15, 1), (-6, 1), (1, 1)];
    match order {
        1 => Ok(&D1),
        2 => Ok(&D2),
        3 => Ok(&D3),
        4 => Ok(&D4),
        5 => Ok(&D5),
        6 => Ok(&D6),
        _ => Err(GridError::UnsupportedOrder(order)),
    }
}

/// Floating-point weights already divided by `h^order`.
pub fn weights(order: usize, h: f64) -> Result<Vec<f64>, GridError> {
    let scale = h.powi(order as i32);
    Ok(rational_weights(order)?.iter().map(|&(p, q)| p as f64 / q as f64 / scale).collect())
}

/// Half-width of the stencil of a given order.
pub fn half_width(order: usize) -> usize {
    match order {
        1 | 2 => 2,
        5 => 4,
        _ => 3,
    }
}

/// Shape of a 3-d array stored with the last axis contiguous.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims(pub [usize; 3]);

impl Dims {
    pub fn cube(n: usize) -> Self {
        Dims([n; 3])
    }

    pub fn len(&self) -> usize {
        self.0.iter().product()
    }

    pub fn strides(&self) -> [usize; 3] {
        [self.0[1] * self.0[2], self.0[2], 1]
    }

    pub fn unindex(&self, idx: usize) -> [usize; 3] {
        [idx / (self.0[1] * self.0[2]), (idx / self.0[2]) % self.0[1], idx % self.0[2]]
    }
}

/// What to do where the stencil leaves the array.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    /// Output zero within the halo.
    Skip,
    /// Treat values outside the array as zero.
    ZeroPad,
}

/// Applies `w` (centered, odd length) along `axis`.
pub fn apply_axis(f: &[f64], dims: Dims, axis: usize, w: &[f64], edge: Edge) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    let m = w.len() / 2;
    let stride = dims.strides()[axis];
    let len = dims.0[axis];
    let slab = dims.0[1] * dims.0[2];
    for_slabs(&mut out, slab, |s, chunk| {
        for (off, o) in chunk.iter_mut().enumerate() {
            let idx = s * slab + off;
            let p = dims.unindex(idx)[axis];
            if p >= m && p + m < len {
                let base = idx - m * stride;
                let mut acc = 0.0;
                for (q, &c) in w.iter().enumerate() {
                    acc += c * f[base + q * stride];
                }
                *o = acc;
            } else if edge == Edge::ZeroPad {
                let mut acc = 0.0;
                for (q, &c) in w.iter().enumerate() {
                    let pos = p as isize + q as isize - m as isize;
                    if pos >= 0 && (pos as usize) < len {
                        acc += c * f[(idx as isize + (q as isize - m as isize) * stride as isize) as usize];
                    }
                }
                *o = acc;
            }
        }
    });
    out
}

/// Derivative of order `order` along `axis` at interior points; zero in the halo.
pub fn derivative_interior(grid: &GridSpec, f: &[f64], axis: usize, order: usize) -> Result<Vec<f64>, GridError> {
    let w = weights(order, grid.h())?;
    Ok(apply_axis(f, Dims::cube(grid.n), axis, &w, Edge::Skip))
}

/// Derivative of order `order <= 5` along `axis`, requiring `f` to vanish in the halo.
pub fn spatial_derivative(grid: &GridSpec, f: &[f64], axis: usize, order: usize) -> Result<Vec<f64>, GridError> {
    if !(1..=5).contains(&order) {
        return Err(GridError::UnsupportedOrder(order));
    }
    check_halo(grid, f, half_width(order))?;
    derivative_interior(grid, f, axis, order)
}

/// Fails if `f` is nonzero within `halo` cells of a face.
pub fn check_halo(grid: &GridSpec, f: &[f64], halo: usize) -> Result<(), GridError> {
    let n = grid.n;
    for (idx, &v) in f.iter().enumerate() {
        if v != 0.0 {
            let p = grid.unindex(idx);
            if p.iter().any(|&c| c < halo || c + halo >= n) {
                return Err(GridError::InsufficientMargin { y0: f64::NAN, value: v });
            }
        }
    }
    Ok(())
}

/// Kreiss-Oliger term `eps/(64 h) * sum_a h^6 D_a^6 f` at one point.
#[inline]
pub fn ko_point(f: &[f64], idx: usize, strides: [usize; 3], scale: f64) -> f64 {
    const W: [f64; 7] = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];
    let mut acc = 0.0;
    for s in strides {
        let base = idx - 3 * s;
        for (q, &c) in W.iter().enumerate() {
            acc += c * f[base + q * s];
        }
    }
    scale * acc
}

/// Pointwise stencil helpers on a cubic grid; callers guarantee a halo of 2.
#[derive(Clone, Copy, Debug)]
pub struct PointStencil {
    pub strides: [usize; 3],
    d1: [f64; 5],
    d2: [f64; 5],
}

impl PointStencil {
    pub fn new(grid: &GridSpec) -> Self {
        let h = grid.h();
        let d1 = weights(1, h).expect("order 1");
        let d2 = weights(2, h).expect("order 2");
        PointStencil {
            strides: grid.strides(),
            d1: [d1[0], d1[1], d1[2], d1[3], d1[4]],
            d2: [d2[0], d2[1], d2[2], d2[3], d2[4]],
        }
    }

    #[inline]
    pub fn d1(&self, f: &[f64], idx: usize, axis: usize) -> f64 {
        let s = self.strides[axis];
        self.d1[0] * f[idx - 2 * s] + self.d1[1] * f[idx - s] + self.d1[3] * f[idx + s] + self.d1[4] * f[idx + 2 * s]
    }

    #[inline]
    pub fn d2(&self, f: &[f64], idx: usize, axis: usize) -> f64 {
        let s = self.strides[axis];
        self.d2[0] * (f[idx - 2 * s] + f[idx + 2 * s]) + self.d2[1] * (f[idx - s] + f[idx + s]) + self.d2[2] * f[idx]
    }

    /// Mixed derivative along two distinct axes as a product of first-derivative stencils.
    #[inline]
    pub fn d11(&self, f: &[f64], idx: usize, a: usize, b: usize) -> f64 {
        let sb = self.strides[b];
        let inner = |i: usize| {
            self.d1[0] * f[i - 2 * sb] + self.d1[1] * f[i - sb] + self.d1[3] * f[i + sb] + self.d1[4] * f[i + 2 * sb]
        };
        let sa = self.strides[a];
        self.d1[0] * inner(idx - 2 * sa) + self.d1[1] * inner(idx - sa) + self.d1[3] * inner(idx + sa)
            + self.d1[4] * inner(idx + 2 * sa)
    }

    #[inline]
    pub fn laplacian(&self, f: &[f64], idx: usize) -> f64 {
        self.d2(f, idx, 0) + self.d2(f, idx, 1) + self.d2(f, idx, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn factorial(n: usize) -> i64 {
        (1..=n as i64).product()
    }

    #[test]
    fn exact_moments() {
        for order in 1..=6 {
            let w = rational_weights(order).unwrap();
            let m = (w.len() / 2) as i64;
            for p in 0..w.len() {
                let mom: Rational64 = w
                    .iter()
                    .enumerate()
                    .map(|(q, &(a, b))| Rational64::new(a, b) * Rational64::from_integer((q as i64 - m).pow(p as u32)))
                    .sum();
                let want = if p == order { factorial(order) } else { 0 };
                assert_eq!(mom, Rational64::from_integer(want), "order {order} moment {p}");
            }
        }
        assert!(rational_weights(7).is_err());
    }

    fn sample(grid: &GridSpec, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
        (0..grid.len()).map(|i| f(grid.point(i))).collect()
    }

    #[test]
    fn polynomial_exactness() {
        let g = GridSpec::new(2.0, 17, 0.0, 0.25).unwrap();
        let f = sample(&g, |p| p[1].powi(3) + p[0] * p[1] * p[1] - 2.0 * p[2].powi(4));
        let d = derivative_interior(&g, &f, 1, 1).unwrap();
        let d3 = derivative_interior(&g, &f, 2, 4).unwrap();
        for idx in 0..g.len() {
            let p = g.unindex(idx);
            if p.iter().all(|&c| c >= 4 && c + 4 < g.n) {
                let y = g.point(idx);
                assert!((d[idx] - (3.0 * y[1] * y[1] + 2.0 * y[0] * y[1])).abs() < 1e-11);
                assert!((d3[idx] + 48.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn sextic_first_derivative_error_is_the_predicted_term() {
        // the 5-point stencil is exact to degree 4; on y^6 it misses exactly h^4 y^(5)/30 = 24 h^4 y
        let g = GridSpec::new(2.0, 17, 0.0, 0.25).unwrap();
        let h = g.h();
        let f = sample(&g, |p| p[1].powi(6));
        let d = derivative_interior(&g, &f, 1, 1).unwrap();
        for j in 2..15 {
            let y = g.coord(j);
            let idx = g.index(8, j, 8);
            assert!((d[idx] - (6.0 * y.powi(5) - 24.0 * h.powi(4) * y)).abs() < 1e-11);
        }
    }

    fn sine_error(n: usize, order: usize) -> f64 {
        let g = GridSpec::new(3.0, n, 0.0, 0.25).unwrap();
        let k = 1.3;
        let f = sample(&g, |p| (k * p[1]).sin());
        let d = derivative_interior(&g, &f, 1, order).unwrap();
        let exact = |y: f64| match order {
            1 => k * (k * y).cos(),
            2 => -k * k * (k * y).sin(),
            3 => -k.powi(3) * (k * y).cos(),
            4 => k.powi(4) * (k * y).sin(),
            _ => k.powi(5) * (k * y).cos(),
        };
        let m = half_width(order);
        let mut err: f64 = 0.0;
        for j in m..n - m {
            let idx = g.index(n / 2, j, n / 2);
            err = err.max((d[idx] - exact(g.coord(j))).abs());
        }
        err
    }

    #[test]
    fn fourth_order_under_refinement() {
        for order in 1..=5 {
            let e1 = sine_error(33, order);
            let e2 = sine_error(65, order);
            let rate = (e1 / e2).log2();
            assert!(rate > 3.8, "order {order}: observed {rate}");
        }
    }

    #[test]
    fn zero_field_and_halo_guard() {
        let g = GridSpec::new(2.0, 17, 0.0, 0.25).unwrap();
        let z = vec![0.0; g.len()];
        assert!(spatial_derivative(&g, &z, 0, 3).unwrap().iter().all(|&v| v == 0.0));
        let mut f = z.clone();
        f[g.index(1, 8, 8)] = 1.0;
        assert!(matches!(spatial_derivative(&g, &f, 0, 1), Err(GridError::InsufficientMargin { .. })));
        assert!(matches!(spatial_derivative(&g, &z, 0, 6), Err(GridError::UnsupportedOrder(6))));
    }

    #[test]
    fn zero_padding_matches_interior_for_compact_data() {
        let d = Dims([9, 11, 13]);
        let mut f = vec![0.0; d.len()];
        for (i, v) in f.iter_mut().enumerate() {
            let p = d.unindex(i);
            if p.iter().zip(d.0).all(|(&c, n)| c >= 3 && c + 3 < n) {
                *v = (i as f64 * 0.37).sin();
            }
        }
        let w = weights(1, 0.5).unwrap();
        for axis in 0..3 {
            let a = apply_axis(&f, d, axis, &w, Edge::ZeroPad);
            let b = apply_axis(&f, d, axis, &w, Edge::Skip);
            for i in 0..d.len() {
                let p = d.unindex(i)[axis];
                if p >= 2 && p + 2 < d.0[axis] {
                    assert_eq!(a[i], b[i]);
                }
            }
        }
    }

    #[test]
    fn point_stencils_match_array_stencils() {
        let g = GridSpec::new(2.0, 17, 0.0, 0.25).unwrap();
        let f = sample(&g, |p| (p[0] * 0.7).sin() * (p[1] * 1.1).cos() * (1.0 + p[2] * p[2]));
        let ps = PointStencil::new(&g);
        let idx = g.index(7, 9, 10);
        let dx = derivative_interior(&g, &f, 0, 1).unwrap();
        let dxy = derivative_interior(&g, &dx, 1, 1).unwrap();
        let dzz = derivative_interior(&g, &f, 2, 2).unwrap();
        assert!((ps.d1(&f, idx, 0) - dx[idx]).abs() < 1e-14);
        assert!((ps.d11(&f, idx, 0, 1) - dxy[idx]).abs() < 1e-13);
        assert!((ps.d2(&f, idx, 2) - dzz[idx]).abs() < 1e-13);
    }
}
