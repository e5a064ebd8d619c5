//! Pointwise stress identity, Hardy and global Sobolev checks on hyperboloids, and the
//! induced volume element.

use super::energy::dtau;
use crate::error::DiagnosticsError;
use crate::geometry::metric::{contract, ETA};
use crate::geometry::quadrature::integrate;
use crate::grid::sigma::SigmaGrid;
use serde::Serialize;

/// Value and gradient of a field at a spacetime point.
pub type AnalyticJet = (f64, [f64; 4]);

/// Both sides of the stress decomposition at `y`:
/// `S[f; m](T, -(d tau)^#)` and `|L f|^2/(2 tau^2 cosh rho) + (T f)^2/(2 cosh rho)`.
pub fn stress_sides(y: [f64; 4], df: [f64; 4]) -> (f64, f64) {
    let tau = (y[0] * y[0] - y[1] * y[1] - y[2] * y[2] - y[3] * y[3]).sqrt();
    let dt = dtau(y);
    // X = -eta^{-1} d tau, eta(T, X) = -X^0 eta_00
    let x = [dt[0], -dt[1], -dt[2], -dt[3]];
    let xf: f64 = (0..4).map(|m| x[m] * df[m]).sum();
    let g_tx = -x[0];
    let lhs = df[0] * xf - 0.5 * g_tx * contract(&ETA, &df, &df);
    let cosh = y[0] / tau;
    let l2: f64 = (1..4).map(|i| (y[0] * df[i] + y[i] * df[0]).powi(2)).sum();
    let rhs = l2 / (2.0 * tau * tau * cosh) + df[0] * df[0] / (2.0 * cosh);
    (lhs, rhs)
}

/// Largest relative mismatch of the stress decomposition over `points`.
pub fn check_stress_decomposition<F>(f: F, points: &[[f64; 4]]) -> f64
where
    F: Fn([f64; 4]) -> AnalyticJet,
{
    points
        .iter()
        .map(|&y| {
            let (lhs, rhs) = stress_sides(y, f(y).1);
            let scale = lhs.abs().max(rhs.abs());
            if scale == 0.0 {
                0.0
            } else {
                (lhs - rhs).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

/// `(int f^2 / cosh rho) / (int |L f|^2 / cosh rho)` on the sample.
pub fn check_hardy(sg: &SigmaGrid, f: &[f64]) -> Result<f64, DiagnosticsError> {
    let l: Vec<Vec<f64>> = (0..3).map(|a| sg.tangential(f, a)).collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for idx in 0..sg.len() {
        let w = sg.weight(idx) * sg.tau / sg.y0[idx];
        num += f[idx] * f[idx] * w;
        den += (l[0][idx].powi(2) + l[1][idx].powi(2) + l[2][idx].powi(2)) * w;
    }
    if den == 0.0 {
        return Err(DiagnosticsError::ZeroDenominator);
    }
    Ok(num / den)
}

/// Hardy constant `4/(d-2)^2` at `d = 3`.
pub const HARDY_CONSTANT: f64 = 4.0;

/// `sup |f|^2 tau^3 cosh(rho)^{2 + l} / sum_{|alpha| <= 2} int cosh(rho)^l |L^alpha f|^2`.
pub fn sobolev_ratio(sg: &SigmaGrid, f: &[f64], ell: i32) -> f64 {
    let tau = sg.tau;
    let mut words: Vec<Vec<f64>> = vec![f.to_vec()];
    for a in 0..3 {
        let la = sg.tangential(f, a);
        for b in 0..3 {
            words.push(sg.tangential(&la, b));
        }
        words.push(la);
    }
    let mut integral = 0.0;
    for w in &words {
        for idx in 0..sg.len() {
            integral += (sg.y0[idx] / tau).powi(ell) * w[idx] * w[idx] * sg.weight(idx);
        }
    }
    if integral == 0.0 {
        return 0.0;
    }
    let mut sup = 0.0f64;
    for idx in 0..sg.len() {
        let cosh = sg.y0[idx] / tau;
        sup = sup.max(f[idx] * f[idx] * tau.powi(3) * cosh.powi(2 + ell));
    }
    sup / integral
}

/// `sqrt det` of the metric induced on `Sigma_tau` by `eta` in the chart `ybar`.
pub fn induced_volume_density(tau: f64, yb: [f64; 3]) -> f64 {
    let y0 = (tau * tau + yb[0] * yb[0] + yb[1] * yb[1] + yb[2] * yb[2]).sqrt();
    // pullback of -dy0^2 + |dybar|^2 with dy0 = ybar . dybar / y0
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            h[i][j] = if i == j { 1.0 } else { 0.0 } - yb[i] * yb[j] / (y0 * y0);
        }
    }
    let det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
        + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
    det.sqrt()
}

/// Volume of the coordinate ball `|ybar| <= a` on `Sigma_tau`, by the `(tau/y0)` weight and by
/// the determinant of the induced metric along a fixed direction.
pub fn ball_volumes(tau: f64, a: f64) -> Result<(f64, f64), DiagnosticsError> {
    let four_pi = 4.0 * std::f64::consts::PI;
    let tol = 1e-13 * (1.0 + a * a * a);
    let weight = integrate(&|r| four_pi * r * r * tau / (tau * tau + r * r).sqrt(), 0.0, a, tol)
        .map_err(|e| DiagnosticsError::Model(e.into()))?;
    let dir = [0.48, -0.6, 0.64];
    let brute = integrate(&|r| four_pi * r * r * induced_volume_density(tau, dir.map(|c| c * r)), 0.0, a, tol)
        .map_err(|e| DiagnosticsError::Model(e.into()))?;
    Ok((weight, brute))
}

/// Test function `k` of the Hardy family (`k < 20`): radial bumps in `rho` of growing width
/// for `k < 10`, shifted and narrower ones after, every third one made anisotropic.
pub fn hardy_test_function(k: usize, y: [f64; 4], tau: f64) -> f64 {
    let r = (y[1] * y[1] + y[2] * y[2] + y[3] * y[3]).sqrt();
    let rho = (r / tau).asinh();
    let kk = k as f64;
    let (c, w) = if k < 10 { (0.0, 0.4 + 0.15 * kk) } else { (0.1 * (kk - 10.0), 0.5 + 0.05 * (kk - 10.0)) };
    let s = (rho - c) / w;
    let base = if s.abs() < 1.0 { (1.0 - s * s).powi(4) } else { 0.0 };
    if k % 3 == 2 {
        base * (1.0 + 0.5 * y[1] / y[0] - 0.3 * y[2] * y[3] / (y[0] * y[0]))
    } else {
        base
    }
}

pub const HARDY_FAMILY_SIZE: usize = 20;

/// Largest Hardy ratio over the family on a grid of `n` points per axis covering `rho <= 2.3`.
pub fn hardy_family_worst(tau: f64, n: usize) -> Result<f64, DiagnosticsError> {
    let grid = crate::grid::GridSpec::new(tau * 2.3f64.sinh() + 1.0, n, 0.0, 0.5)?;
    let sg = SigmaGrid::new(&grid, grid.full(), tau);
    let mut worst = 0.0f64;
    for k in 0..HARDY_FAMILY_SIZE {
        let f: Vec<f64> = (0..sg.len()).map(|i| hardy_test_function(k, sg.spacetime_point(i), tau)).collect();
        worst = worst.max(check_hardy(&sg, &f)?);
    }
    Ok(worst)
}

/// Points inside the future light cone from a Weyl sequence, `tau` in `[0.5, 10]`, `|y^i| <= 10`.
pub fn cone_points(count: usize) -> Vec<[f64; 4]> {
    let alpha = [0.5698402909980532, 0.7548776662466927, 0.6180339887498949, 0.4142135623730950];
    (1..=count)
        .map(|n| {
            let u = alpha.map(|a| (n as f64 * a).fract());
            let tau = 0.5 + 9.5 * u[0];
            let yb = [u[1], u[2], u[3]].map(|v| 20.0 * v - 10.0);
            [(tau * tau + yb.iter().map(|v| v * v).sum::<f64>()).sqrt(), yb[0], yb[1], yb[2]]
        })
        .collect()
}

/// Gradient of the cubic polynomial with coefficient vector `c` (4 linear, 10 quadratic,
/// 4 pure cubic terms).
pub fn cubic_gradient(c: &[f64; 18], y: [f64; 4]) -> [f64; 4] {
    let mut g = [0.0; 4];
    let mut k = 0;
    for m in 0..4 {
        g[m] += c[k];
        k += 1;
    }
    for m in 0..4 {
        for n in m..4 {
            g[m] += c[k] * y[n];
            g[n] += c[k] * y[m];
            k += 1;
        }
    }
    for m in 0..4 {
        g[m] += 3.0 * c[k] * y[m] * y[m];
        k += 1;
    }
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeCheck {
    pub tau: f64,
    pub radius: f64,
    pub weighted: f64,
    pub induced: f64,
    pub relative: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub stress_fields: usize,
    pub stress_worst: f64,
    /// `(tau, worst ratio)` over the Hardy family.
    pub hardy: Vec<(f64, f64)>,
    pub hardy_constant: f64,
    pub volumes: Vec<VolumeCheck>,
}

/// Stress identity on `fields` deterministic cubics, the Hardy family at each `tau` on grids of
/// `n` points per axis, and the volume-element comparison.
pub fn inequality_suite(fields: usize, taus: &[f64], n: usize) -> Result<InequalityReport, DiagnosticsError> {
    let points = cone_points(200);
    let mut stress_worst = 0.0f64;
    for j in 0..fields {
        let c: [f64; 18] = std::array::from_fn(|k| ((j * 18 + k) as f64 * 1.618_033_988_749_895 + 0.3).sin());
        stress_worst = stress_worst.max(check_stress_decomposition(|y| (0.0, cubic_gradient(&c, y)), &points));
    }
    let hardy = taus.iter().map(|&t| Ok((t, hardy_family_worst(t, n)?))).collect::<Result<Vec<_>, DiagnosticsError>>()?;
    let mut volumes = Vec::new();
    for &tau in taus {
        for radius in [0.5, 2.0, 10.0] {
            let (weighted, induced) = ball_volumes(tau, radius)?;
            volumes.push(VolumeCheck { tau, radius, weighted, induced, relative: (weighted - induced).abs() / weighted });
        }
    }
    Ok(InequalityReport { stress_fields: fields, stress_worst, hardy, hardy_constant: HARDY_CONSTANT, volumes })
}
