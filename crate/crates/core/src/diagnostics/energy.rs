//! Energies of fields on `Sigma_tau`.
//!
//! The Minkowski energy is
//! `E^2 = sum [ |L psi|^2 / (tau^2 cosh rho) + (T psi)^2 / cosh rho ] (tau/y0) h^3`, `cosh rho = y0/tau`.
//! For the dynamical metric, with `X = -g^{-1} d tau` and `g(T, X) = -y0/tau`,
//! `E^2 = 2 sum S[psi; g](T, X) sqrt|g| (tau/y0) h^3`,
//! `S(T, X) = (T psi)(X psi) + (y0/tau) g^{-1}(d psi, d psi) / 2`.

use crate::error::{DiagnosticsError, ModelError};
use crate::geometry::metric::{contract, metric_from_c, MetricState};
use crate::geometry::profile::PlaneWaveProfile;
use crate::grid::sigma::SigmaGrid;
use crate::models::null_u;

/// Lower bound of `-g^{-1}(d tau, d tau)` accepted as spacelike.
pub const SPACELIKE_MIN: f64 = 0.5;

/// A field on a sample with its `T`-derivative and boosts.
#[derive(Clone, Copy, Debug)]
pub struct SigmaJet<'a> {
    pub t: &'a [f64],
    pub l: [&'a [f64]; 3],
}

pub fn energy_mink(sg: &SigmaGrid, psi: SigmaJet) -> f64 {
    let tau = sg.tau;
    let mut e2 = 0.0;
    for idx in 0..sg.len() {
        let cosh = sg.y0[idx] / tau;
        let l2 = psi.l[0][idx].powi(2) + psi.l[1][idx].powi(2) + psi.l[2][idx].powi(2);
        e2 += (l2 / (tau * tau * cosh) + psi.t[idx].powi(2) / cosh) * sg.weight(idx);
    }
    e2.sqrt()
}

/// `d tau` at a point.
pub fn dtau(y: [f64; 4]) -> [f64; 4] {
    let tau = (y[0] * y[0] - y[1] * y[1] - y[2] * y[2] - y[3] * y[3]).sqrt();
    [y[0] / tau, -y[1] / tau, -y[2] / tau, -y[3] / tau]
}

/// Dynamical metric at every point of a sample, from `phi`, `T phi` and `L^i phi`.
pub fn metrics_on_sigma(sg: &SigmaGrid, phi: &[f64], jet: SigmaJet, profile: &PlaneWaveProfile) -> Result<Vec<MetricState>, DiagnosticsError> {
    (0..sg.len())
        .map(|idx| {
            let y = sg.spacetime_point(idx);
            let d = sg.coordinate_gradient(idx, jet.t[idx], [jet.l[0][idx], jet.l[1][idx], jet.l[2][idx]]);
            let c = phi[idx] * profile.f2(null_u(y[0], y[1]));
            metric_from_c(c, &d).map_err(|e| DiagnosticsError::Model(ModelError::Geometry(e)))
        })
        .collect()
}

/// `g^{-1}(d tau, d tau)` per point.
pub fn dtau_norms(sg: &SigmaGrid, metrics: &[MetricState]) -> Vec<f64> {
    (0..sg.len())
        .map(|idx| {
            let dt = dtau(sg.spacetime_point(idx));
            contract(&metrics[idx].g_inv, &dt, &dt)
        })
        .collect()
}

pub fn energy_geom(sg: &SigmaGrid, psi: SigmaJet, metrics: &[MetricState]) -> Result<f64, DiagnosticsError> {
    let tau = sg.tau;
    let mut e2 = 0.0;
    for idx in 0..sg.len() {
        let y = sg.spacetime_point(idx);
        let m = &metrics[idx];
        let dt = dtau(y);
        let norm = contract(&m.g_inv, &dt, &dt);
        if !(-norm >= SPACELIKE_MIN) {
            return Err(DiagnosticsError::NotSpacelike { value: norm, y });
        }
        let dpsi = sg.coordinate_gradient(idx, psi.t[idx], [psi.l[0][idx], psi.l[1][idx], psi.l[2][idx]]);
        let xpsi = -contract(&m.g_inv, &dt, &dpsi);
        let s = psi.t[idx] * xpsi + 0.5 * (y[0] / tau) * contract(&m.g_inv, &dpsi, &dpsi);
        e2 += 2.0 * s * m.det.sqrt() * sg.weight(idx);
    }
    Ok(e2.max(0.0).sqrt())
}
