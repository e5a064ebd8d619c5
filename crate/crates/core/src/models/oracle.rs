//! Divergence-form evaluation of the quasilinear equation by forward-mode
//! differentiation, independent of the expanded assembly.

use std::ops::{Add, Div, Mul, Sub};

use super::quasilinear::{CoordJet, ProfileAt};
use crate::geometry::metric::{DU, DUBAR, ETA};

/// First-order dual number `v + d eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub fn constant(v: f64) -> Self {
        Dual { v, d: 0.0 }
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        Dual { v: s, d: self.d / (2.0 * s) }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual { v: self.v - o.v, d: self.d - o.d }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual { v: self.v / o.v, d: (self.d * o.v - self.v * o.d) / (o.v * o.v) }
    }
}

fn c(v: f64) -> Dual {
    Dual::constant(v)
}

/// Flux `gt^{mu nu} phi_nu / sqrt G` of the quadratic polynomial defined by `jet`,
/// differentiated along `dir`.
fn flux_derivative(jet: &CoordJet, p: ProfileAt, dir: usize) -> f64 {
    // along y = y_0 + s e_dir: phi(s), phi_nu(s), F''(u(s))
    let phi = Dual { v: jet.phi, d: jet.d1[dir] };
    let grad: Vec<Dual> = (0..4).map(|n| Dual { v: jet.d1[n], d: jet.d2[n][dir] }).collect();
    let f2 = Dual { v: p.f2, d: p.f3 * DU[dir] };
    let cc = phi * f2;
    let gti = |m: usize, n: usize| c(ETA[m][n]) + c(2.0 * DUBAR[m] * DUBAR[n]) * cc;
    let mut norm = c(0.0);
    for m in 0..4 {
        for n in 0..4 {
            norm = norm + gti(m, n) * grad[m] * grad[n];
        }
    }
    let root = (c(1.0) + norm).sqrt();
    let mut j = c(0.0);
    for n in 0..4 {
        j = j + gti(dir, n) * grad[n];
    }
    (j / root).d
}

/// `sqrt G * [d_mu(gt^{mu nu} phi_nu / sqrt G) - F'' (V phi)^2 / sqrt G]`.
pub fn divergence_residual(jet: &CoordJet, p: ProfileAt) -> f64 {
    let div: f64 = (0..4).map(|m| flux_derivative(jet, p, m)).sum();
    let cc = jet.phi * p.f2;
    let mut norm = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            norm += (ETA[m][n] + 2.0 * cc * DUBAR[m] * DUBAR[n]) * jet.d1[m] * jet.d1[n];
        }
    }
    let root = (1.0 + norm).sqrt();
    let vphi: f64 = (0..4).map(|m| DUBAR[m] * jet.d1[m]).sum();
    root * div - p.f2 * vphi * vphi
}
