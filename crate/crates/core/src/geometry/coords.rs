//! Rectangular (`y`), double-null (`u`, `ubar`, `xhat`) and original (`t`, `x1`) charts,
//! plus the hyperboloidal time function.

use std::f64::consts::FRAC_1_SQRT_2;

use super::profile::PlaneWaveProfile;
use crate::error::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoordinatePoint {
    pub y: [f64; 4],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NullCoords {
    pub u: f64,
    pub ubar: f64,
    pub xhat: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Foliation {
    pub tau: f64,
    pub rho: f64,
    pub cosh_rho: f64,
}

impl CoordinatePoint {
    pub fn new(y: [f64; 4]) -> Self {
        CoordinatePoint { y }
    }

    pub fn null(&self) -> NullCoords {
        to_null(self.y)
    }

    pub fn foliation(&self) -> Result<Foliation, GeometryError> {
        foliation_at(self.y)
    }

    pub fn r2(&self) -> f64 {
        self.y[1] * self.y[1] + self.y[2] * self.y[2] + self.y[3] * self.y[3]
    }
}

pub fn to_null(y: [f64; 4]) -> NullCoords {
    NullCoords {
        u: (y[0] + y[1]) * FRAC_1_SQRT_2,
        ubar: (y[0] - y[1]) * FRAC_1_SQRT_2,
        xhat: [y[2], y[3]],
    }
}

pub fn from_null(n: NullCoords) -> [f64; 4] {
    [
        (n.u + n.ubar) * FRAC_1_SQRT_2,
        (n.u - n.ubar) * FRAC_1_SQRT_2,
        n.xhat[0],
        n.xhat[1],
    ]
}

pub fn foliation_at(y: [f64; 4]) -> Result<Foliation, GeometryError> {
    let r2 = y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
    let tau2 = y[0] * y[0] - r2;
    if !(tau2 > 0.0) || y[0] <= 0.0 {
        return Err(GeometryError::OutsideLightCone { y });
    }
    let tau = tau2.sqrt();
    let cosh_rho = y[0] / tau;
    let sinh_rho = r2.sqrt() / tau;
    Ok(Foliation { tau, rho: sinh_rho.asinh(), cosh_rho })
}

/// `(t, x1)` of the original chart from the null coordinates.
pub fn reconstruct_txt(n: NullCoords, profile: &PlaneWaveProfile) -> Result<(f64, f64), GeometryError> {
    let i = profile.int_f1_sq(n.u)?;
    Ok((0.5 * n.u + n.ubar + 0.5 * i, 0.5 * n.u - n.ubar - 0.5 * i))
}

/// Inverse of [`reconstruct_txt`]: `u = t + x1`, `ubar = (t - x1 - int_0^u (F')^2) / 2`.
pub fn null_from_txt(t: f64, x1: f64, xhat: [f64; 2], profile: &PlaneWaveProfile) -> Result<NullCoords, GeometryError> {
    let u = t + x1;
    let i = profile.int_f1_sq(u)?;
    Ok(NullCoords { u, ubar: 0.5 * (t - x1 - i), xhat })
}
