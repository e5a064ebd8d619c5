//! Solving the quasilinear equation for `TT phi` from data tangent to `Sigma_tau`.
//!
//! Coordinate derivatives are rebuilt from `T phi`, `L^i phi`, `L^i T phi`, `L^i L^j phi`
//! (with `L^i` applied last) and the unknown `X = TT phi`:
//! `phi_i = (L^i phi - y^i T phi)/y0`, `phi_{0i} = (L^i T phi - y^i X)/y0`,
//! `phi_{ij} = [(L^i L^j phi - y^i (L^j T phi + phi_j))/y0 - delta_ij T phi - y^j phi_{0i}]/y0`.
//! The equation is affine in `X` with coefficient `g^{-1}(zeta, zeta)`,
//! `zeta = (1, -ybar/y0) = (tau/y0) d tau`, so `c_TT = -(tau/y0)^2 g^{-1}(d tau, d tau)`.

use super::quasilinear::{assemble, CoordJet, ProfileAt, Thresholds};
use crate::error::ModelError;
use crate::geometry::profile::PlaneWaveProfile;
use crate::grid::sigma::{SigmaGrid, SigmaPair};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameJet {
    pub y: [f64; 4],
    pub phi: f64,
    pub t: f64,
    pub l: [f64; 3],
    /// `L^i (T phi)`
    pub lt: [f64; 3],
    /// `L^i (L^j phi)`
    pub ll: [[f64; 3]; 3],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TtState {
    pub c_tt: f64,
    pub tt: f64,
}

/// Coordinate jet for a given value `x` of `TT phi`.
pub fn coordinate_jet(f: &FrameJet, x: f64) -> CoordJet {
    let y0 = f.y[0];
    let yb = [f.y[1], f.y[2], f.y[3]];
    let mut d1 = [f.t, 0.0, 0.0, 0.0];
    for i in 0..3 {
        d1[i + 1] = (f.l[i] - yb[i] * f.t) / y0;
    }
    let mut d2 = [[0.0; 4]; 4];
    d2[0][0] = x;
    for i in 0..3 {
        let v = (f.lt[i] - yb[i] * x) / y0;
        d2[0][i + 1] = v;
        d2[i + 1][0] = v;
    }
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { f.t } else { 0.0 };
            d2[i + 1][j + 1] = ((f.ll[i][j] - yb[i] * (f.lt[j] + d1[j + 1])) / y0 - delta - yb[j] * d2[0][i + 1]) / y0;
        }
    }
    // the two orderings agree for consistent data; symmetrize the rounding
    for i in 1..4 {
        for j in i + 1..4 {
            let m = 0.5 * (d2[i][j] + d2[j][i]);
            d2[i][j] = m;
            d2[j][i] = m;
        }
    }
    CoordJet { y: f.y, phi: f.phi, d1, d2 }
}

/// Lower bound of `c_TT (y0/tau)^2` accepted by [`tt_solve`].
pub const MIN_CTT_RATIO: f64 = 0.5;

pub fn tt_solve(f: &FrameJet, p: ProfileAt, th: &Thresholds) -> Result<TtState, ModelError> {
    let j0 = coordinate_jet(f, 0.0);
    let asm = assemble(&j0, p, th)?;
    let y = f.y;
    let zeta = [1.0, -y[1] / y[0], -y[2] / y[0], -y[3] / y[0]];
    let mut coef = 0.0;
    let mut rest = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            coef += asm.a[m][n] * zeta[m] * zeta[n];
            rest += asm.a[m][n] * j0.d2[m][n];
        }
    }
    let c_tt = -coef;
    let tau2 = y[0] * y[0] - y[1] * y[1] - y[2] * y[2] - y[3] * y[3];
    let ratio = c_tt * y[0] * y[0] / tau2;
    if !(ratio >= MIN_CTT_RATIO) {
        return Err(ModelError::CoefficientDegenerate { y, ratio });
    }
    Ok(TtState { c_tt, tt: (rest + asm.n - asm.source) / c_tt })
}

/// Frame data of a full coordinate jet (`d2[0][0]` included).
pub fn frame_from_coordinates(j: &CoordJet) -> FrameJet {
    let y = j.y;
    let y0 = y[0];
    let yb = [y[1], y[2], y[3]];
    let mut l = [0.0; 3];
    let mut lt = [0.0; 3];
    let mut ll = [[0.0; 3]; 3];
    for i in 0..3 {
        l[i] = y0 * j.d1[i + 1] + yb[i] * j.d1[0];
        lt[i] = y0 * j.d2[0][i + 1] + yb[i] * j.d2[0][0];
    }
    for i in 0..3 {
        for k in 0..3 {
            let delta = if i == k { y0 * j.d1[0] } else { 0.0 };
            ll[i][k] = y0 * y0 * j.d2[i + 1][k + 1]
                + y0 * yb[i] * j.d2[0][k + 1]
                + yb[i] * j.d1[k + 1]
                + y0 * yb[k] * j.d2[0][i + 1]
                + yb[i] * yb[k] * j.d2[0][0]
                + delta;
        }
    }
    FrameJet { y, phi: j.phi, t: j.d1[0], l, lt, ll }
}

/// `c_TT` and `TT phi` at every point of a hyperboloid sample, from `phi` and `T phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct TtField {
    pub c_tt: Vec<f64>,
    pub tt: Vec<f64>,
}

pub fn tt_on_sigma(sg: &SigmaGrid, pair: &SigmaPair, profile: &PlaneWaveProfile, th: &Thresholds) -> Result<TtField, ModelError> {
    let l: Vec<Vec<f64>> = (0..3).map(|a| sg.tangential(&pair.f, a)).collect();
    let lt: Vec<Vec<f64>> = (0..3).map(|a| sg.tangential(&pair.tf, a)).collect();
    let ll: Vec<Vec<Vec<f64>>> = (0..3).map(|i| (0..3).map(|j| sg.tangential(&l[j], i)).collect()).collect();
    let mut out = TtField { c_tt: vec![0.0; sg.len()], tt: vec![0.0; sg.len()] };
    for idx in 0..sg.len() {
        let y = sg.spacetime_point(idx);
        let f = FrameJet {
            y,
            phi: pair.f[idx],
            t: pair.tf[idx],
            l: [l[0][idx], l[1][idx], l[2][idx]],
            lt: [lt[0][idx], lt[1][idx], lt[2][idx]],
            ll: [0, 1, 2].map(|i| [0, 1, 2].map(|j| ll[i][j][idx])),
        };
        let u = super::null_u(y[0], y[1]);
        let s = tt_solve(&f, ProfileAt { f2: profile.f2(u), f3: profile.f3(u) }, th)?;
        out.c_tt[idx] = s.c_tt;
        out.tt[idx] = s.tt;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_jet_at_the_vertex() {
        let f = FrameJet { y: [2.0, 0.0, 0.0, 0.0], phi: 0.0, t: 0.0, l: [0.0; 3], lt: [0.0; 3], ll: [[0.0; 3]; 3] };
        let s = tt_solve(&f, ProfileAt { f2: 1.0, f3: 0.0 }, &Thresholds::default()).unwrap();
        assert_eq!(s.c_tt, 1.0);
        assert_eq!(s.tt, 0.0);
    }
}
