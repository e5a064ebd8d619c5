//! Background pulse profile: `F''` is a finite sum of compactly supported smooth bumps.

use serde::{Deserialize, Serialize};

use super::quadrature::integrate;
use crate::error::GeometryError;

const QUAD_TOL: f64 = 1e-12;

/// `amplitude * exp(-r^2 / (r^2 - (u - center)^2))` on `|u - center| < r`, zero elsewhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
}

impl Bump {
    /// `n`-th derivative of the bump at `u`.
    pub fn derivative(&self, u: f64, n: u32) -> f64 {
        let x = u - self.center;
        let r = self.half_width;
        let r2 = r * r;
        let dd = r2 - x * x;
        if dd <= 0.0 || self.amplitude == 0.0 {
            return 0.0;
        }
        let g = (-r2 / dd).exp();
        if g == 0.0 {
            return 0.0;
        }
        // g^(n) = Q_n(x) g / D^{2n}, Q_{n+1} = Q_n' D^2 - 2 r^2 x Q_n + 4 n x D Q_n
        let mut qn = vec![1.0];
        for k in 0..n {
            qn = next_q(&qn, r2, k);
        }
        let val = poly_eval(&qn, x) / dd.powi(2 * n as i32);
        self.amplitude * g * val
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn next_q(qn: &[f64], r2: f64, k: u32) -> Vec<f64> {
    let d = [r2, 0.0, -1.0];
    let d2 = poly_mul(&d, &d);
    let deriv: Vec<f64> = if qn.len() > 1 {
        qn.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()
    } else {
        vec![0.0]
    };
    let t1 = poly_mul(&deriv, &d2);
    let t2 = poly_mul(&[0.0, -2.0 * r2], qn);
    let t3 = poly_mul(&poly_mul(&[0.0, 4.0 * k as f64], &d), qn);
    poly_add(&poly_add(&t1, &t2), &t3)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveProfile {
    pub bumps: Vec<Bump>,
}

impl PlaneWaveProfile {
    pub fn single(center: f64, half_width: f64, amplitude: f64) -> Self {
        PlaneWaveProfile { bumps: vec![Bump { center, half_width, amplitude }] }
    }

    /// Unit-amplitude bump on `u in [0, 2]`.
    pub fn canonical() -> Self {
        Self::single(1.0, 1.0, 1.0)
    }

    /// Two bumps of opposite sign on `u in [0, 3]`.
    pub fn double_bump() -> Self {
        PlaneWaveProfile {
            bumps: vec![
                Bump { center: 0.75, half_width: 0.75, amplitude: 1.0 },
                Bump { center: 2.25, half_width: 0.75, amplitude: -0.6 },
            ],
        }
    }

    pub fn flat() -> Self {
        PlaneWaveProfile { bumps: vec![] }
    }

    pub fn is_flat(&self) -> bool {
        self.bumps.iter().all(|b| b.amplitude == 0.0)
    }

    /// Hull of the bump supports; `(0, 0)` for a flat profile.
    pub fn support_interval(&self) -> (f64, f64) {
        let mut it = self.bumps.iter().filter(|b| b.amplitude != 0.0).map(|b| b.support());
        match it.next() {
            None => (0.0, 0.0),
            Some(first) => it.fold(first, |(a, b), (c, d)| (a.min(c), b.max(d))),
        }
    }

    /// `F^{(2+n)}(u)`
    pub fn deriv(&self, u: f64, n: u32) -> f64 {
        self.bumps.iter().map(|b| b.derivative(u, n)).sum()
    }

    pub fn f2(&self, u: f64) -> f64 {
        self.deriv(u, 0)
    }

    pub fn f3(&self, u: f64) -> f64 {
        self.deriv(u, 1)
    }

    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = vec![lo];
        for b in &self.bumps {
            let (a, c) = b.support();
            for p in [a, b.center, c] {
                if p > lo && p < hi {
                    pts.push(p);
                }
            }
        }
        pts.push(hi);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }

    fn integrate_pieces(&self, f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64, GeometryError> {
        if hi <= lo {
            return Ok(0.0);
        }
        let pts = self.breakpoints(lo, hi);
        let mut s = 0.0;
        for w in pts.windows(2) {
            s += integrate(f, w[0], w[1], QUAD_TOL / pts.len() as f64)?;
        }
        Ok(s)
    }

    /// `F'(u)`, normalised to vanish to the left of the support.
    pub fn f1(&self, u: f64) -> Result<f64, GeometryError> {
        let (a, b) = self.support_interval();
        if self.is_flat() || u <= a {
            return Ok(0.0);
        }
        self.integrate_pieces(&|s| self.f2(s), a, u.min(b))
    }

    /// `F(u)`, vanishing to the left of the support.
    pub fn f0(&self, u: f64) -> Result<f64, GeometryError> {
        let (a, b) = self.support_interval();
        if self.is_flat() || u <= a {
            return Ok(0.0);
        }
        let top = u.min(b);
        let inner = self.integrate_pieces(&|s| (top - s) * self.f2(s), a, top)?;
        let slope = self.f1(b)?;
        Ok(inner + slope * (u - top))
    }

    /// `int_0^u (F')^2`
    pub fn int_f1_sq(&self, u: f64) -> Result<f64, GeometryError> {
        if self.is_flat() {
            return Ok(0.0);
        }
        let (a, b) = self.support_interval();
        let tail = self.f1(b)?;
        let sign = if u >= 0.0 { 1.0 } else { -1.0 };
        let (lo, hi) = if u >= 0.0 { (0.0, u) } else { (u, 0.0) };
        // (F')^2 vanishes left of a and is the constant `tail^2` right of b
        let clo = lo.max(a);
        let chi = hi.min(b);
        let mut s = 0.0;
        if chi > clo {
            let f = |x: f64| {
                let v = self.f1(x).unwrap_or(f64::NAN);
                v * v
            };
            s += self.integrate_pieces(&f, clo, chi)?;
            if s.is_nan() {
                return Err(GeometryError::QuadratureNonConvergence { a: clo, b: chi, tol: QUAD_TOL });
            }
        }
        let rlo = lo.max(b);
        if hi > rlo {
            s += tail * tail * (hi - rlo);
        }
        Ok(sign * s)
    }
}
