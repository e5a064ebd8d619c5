//! Pointwise assembly of the quasilinear perturbation equation.
//!
//! With `c = phi F''(u)`, `gt^{-1} = eta^{-1} + 2c V V` (`V = d/dubar`), `W = gt^{-1} dphi`,
//! `G = 1 + W.dphi` and `g^{-1} = gt^{-1} - W W / G`, the Euler-Lagrange equation
//! `d_mu(gt^{mu nu} phi_nu / sqrt G) = F'' (V phi)^2 / sqrt G` expands to
//!
//! `g^{mu nu} phi_{mu nu} + N = F'' (V phi)^2`,  `N = 2 F'' (V phi)^2 - (W.dc)(V phi)^2 / G`,
//!
//! using `d_mu gt^{mu nu} = 2 (V.dc) V^nu` and `V.dc = F'' V phi` (since `V.du = 0`).

use crate::error::ModelError;
use crate::geometry::metric::{contract, gt_inverse, mat_vec, Mat4, DU, DUBAR};

/// Hyperbolicity thresholds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub min_abs_a00: f64,
    pub det_min: f64,
    pub det_max: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { min_abs_a00: 0.5, det_min: 0.5, det_max: 2.0 }
    }
}

/// Value, gradient and second derivatives of `phi` at a point; `d2[0][0]` is ignored by
/// the solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoordJet {
    pub y: [f64; 4],
    pub phi: f64,
    pub d1: [f64; 4],
    pub d2: [[f64; 4]; 4],
}

/// Profile values at the point: `F''(u)` and `F'''(u)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileAt {
    pub f2: f64,
    pub f3: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Assembly {
    /// Coefficients of `phi_{mu nu}` (equal to `g^{-1}`).
    pub a: Mat4,
    /// First-order remainder.
    pub n: f64,
    pub source: f64,
    /// `|g| = G`.
    pub det: f64,
}

pub fn assemble(jet: &CoordJet, p: ProfileAt, th: &Thresholds) -> Result<Assembly, ModelError> {
    let c = jet.phi * p.f2;
    let gti = gt_inverse(c);
    let w = mat_vec(&gti, &jet.d1);
    let det = 1.0 + (0..4).map(|m| w[m] * jet.d1[m]).sum::<f64>();
    let mut a = gti;
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] -= w[i] * w[j] / det;
        }
    }
    if !(det >= th.det_min && det <= th.det_max) || !(a[0][0].abs() >= th.min_abs_a00) {
        return Err(ModelError::HyperbolicityLoss { y: jet.y, a00: a[0][0], det });
    }
    let vphi = (0..4).map(|m| DUBAR[m] * jet.d1[m]).sum::<f64>();
    let w_dc = (0..4).map(|m| w[m] * (p.f2 * jet.d1[m] + jet.phi * p.f3 * DU[m])).sum::<f64>();
    let v2 = vphi * vphi;
    Ok(Assembly { a, n: 2.0 * p.f2 * v2 - w_dc * v2 / det, source: p.f2 * v2, det })
}

/// Sum of `A^{mu nu} phi_{mu nu}` over all pairs except `(0, 0)`.
pub fn off_principal(a: &Mat4, d2: &[[f64; 4]; 4]) -> f64 {
    contract_pairs(a, d2) - a[0][0] * d2[0][0]
}

fn contract_pairs(a: &Mat4, d2: &[[f64; 4]; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += a[i][j] * d2[i][j];
        }
    }
    s
}

/// `d^2/dy0^2 phi` from the expanded equation.
pub fn solve_phi00(jet: &CoordJet, p: ProfileAt, th: &Thresholds) -> Result<f64, ModelError> {
    let asm = assemble(jet, p, th)?;
    Ok((asm.source - off_principal(&asm.a, &jet.d2) - asm.n) / asm.a[0][0])
}

/// Residual `g^{mu nu} phi_{mu nu} + N - source` of a full jet.
pub fn residual(jet: &CoordJet, p: ProfileAt, th: &Thresholds) -> Result<f64, ModelError> {
    let asm = assemble(jet, p, th)?;
    Ok(contract_pairs(&asm.a, &jet.d2) + asm.n - asm.source)
}

/// `g^{-1}(d tau, d tau)` from the jet; `-1` on the background.
pub fn dtau_norm(jet: &CoordJet, p: ProfileAt, th: &Thresholds) -> Result<f64, ModelError> {
    let asm = assemble(jet, p, th)?;
    let y = jet.y;
    let tau = (y[0] * y[0] - y[1] * y[1] - y[2] * y[2] - y[3] * y[3]).sqrt();
    let dtau = [y[0] / tau, -y[1] / tau, -y[2] / tau, -y[3] / tau];
    Ok(contract(&asm.a, &dtau, &dtau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::metric::ETA;

    fn jet0() -> CoordJet {
        CoordJet { y: [2.0, 0.0, 0.0, 0.0], phi: 0.0, d1: [0.0; 4], d2: [[0.0; 4]; 4] }
    }

    #[test]
    fn zero_jet_is_the_wave_operator() {
        let asm = assemble(&jet0(), ProfileAt { f2: 0.7, f3: -0.3 }, &Thresholds::default()).unwrap();
        assert_eq!(asm.a, ETA);
        assert_eq!(asm.n, 0.0);
        assert_eq!(asm.source, 0.0);
    }

    #[test]
    fn rank_one_principal_coefficient() {
        let mut j = jet0();
        j.phi = 0.1;
        let asm = assemble(&j, ProfileAt { f2: 0.5, f3: 0.0 }, &Thresholds::default()).unwrap();
        assert!((asm.a[0][0] - (-1.0 + 0.05)).abs() < 1e-15);
    }

    #[test]
    fn guard_trips_on_large_gradient() {
        let mut j = jet0();
        j.d1 = [0.9, 0.0, 0.0, 0.0];
        assert!(matches!(
            assemble(&j, ProfileAt { f2: 0.0, f3: 0.0 }, &Thresholds::default()),
            Err(ModelError::HyperbolicityLoss { .. })
        ));
    }
}
