//! The perturbed embedding into `R^{1,4}` and the background's extrinsic curvature.

use super::coords::{from_null, reconstruct_txt, CoordinatePoint, NullCoords};
use super::metric::{invert4, Jet1, Mat4};
use super::profile::PlaneWaveProfile;
use crate::error::GeometryError;

pub type Vec5 = [f64; 5];

pub fn minkowski5(a: &Vec5, b: &Vec5) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] + a[4] * b[4]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Embedding {
    /// background point plus `phi * n`
    pub position: Vec5,
    pub normal: Vec5,
}

/// Unit normal of the background graph `x4 = F(t + x1)`.
pub fn unit_normal(u: f64, profile: &PlaneWaveProfile) -> Result<Vec5, GeometryError> {
    let fp = profile.f1(u)?;
    Ok([fp, -fp, 0.0, 0.0, 1.0])
}

fn background(n: NullCoords, profile: &PlaneWaveProfile) -> Result<Vec5, GeometryError> {
    let (t, x1) = reconstruct_txt(n, profile)?;
    Ok([t, x1, n.xhat[0], n.xhat[1], profile.f0(n.u)?])
}

pub fn embedding_and_normal(
    point: CoordinatePoint,
    profile: &PlaneWaveProfile,
    jet: &Jet1,
) -> Result<Embedding, GeometryError> {
    let n = point.null();
    let x = background(n, profile)?;
    let nu = unit_normal(n.u, profile)?;
    let mut position = x;
    for i in 0..5 {
        position[i] += jet.phi * nu[i];
    }
    Ok(Embedding { position, normal: nu })
}

/// Diagnostics of the background second fundamental form at `(u, ubar, xhat)`.
#[derive(Clone, Copy, Debug)]
pub struct SecondFormCheck {
    /// `II(d_u, d_u) - F''(u)`
    pub uu_defect: f64,
    /// largest other component of `II` in null coordinates
    pub off_max: f64,
    pub trace: f64,
    pub self_contraction: f64,
    /// largest `|<n, d_a X>|`
    pub normality: f64,
}

/// Second fundamental form `II_ab = -<d_a n, d_b X>` by central differences in null coordinates.
pub fn second_fundamental_form(n0: NullCoords, profile: &PlaneWaveProfile) -> Result<SecondFormCheck, GeometryError> {
    let h = 1e-4;
    let shift = |a: usize, s: f64| {
        let mut c = [n0.u, n0.ubar, n0.xhat[0], n0.xhat[1]];
        c[a] += s;
        NullCoords { u: c[0], ubar: c[1], xhat: [c[2], c[3]] }
    };
    let mut dx = [[0.0; 5]; 4];
    let mut dn = [[0.0; 5]; 4];
    for a in 0..4 {
        let xp = background(shift(a, h), profile)?;
        let xm = background(shift(a, -h), profile)?;
        let np = unit_normal(shift(a, h).u, profile)?;
        let nm = unit_normal(shift(a, -h).u, profile)?;
        for k in 0..5 {
            dx[a][k] = (xp[k] - xm[k]) / (2.0 * h);
            dn[a][k] = (np[k] - nm[k]) / (2.0 * h);
        }
    }
    let nu = unit_normal(n0.u, profile)?;
    let mut gind: Mat4 = [[0.0; 4]; 4];
    let mut ii: Mat4 = [[0.0; 4]; 4];
    let mut normality: f64 = 0.0;
    for a in 0..4 {
        normality = normality.max(minkowski5(&nu, &dx[a]).abs());
        for b in 0..4 {
            gind[a][b] = minkowski5(&dx[a], &dx[b]);
            ii[a][b] = -minkowski5(&dn[a], &dx[b]);
        }
    }
    let ginv = invert4(&gind).ok_or(GeometryError::DegenerateMetric { det: 0.0 })?;
    let mut trace = 0.0;
    let mut sc = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            trace += ginv[a][b] * ii[a][b];
            for c in 0..4 {
                for d in 0..4 {
                    sc += ginv[a][c] * ginv[b][d] * ii[a][b] * ii[c][d];
                }
            }
        }
    }
    let mut off_max: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            if (a, b) != (0, 0) {
                off_max = off_max.max(ii[a][b].abs());
            }
        }
    }
    Ok(SecondFormCheck {
        uu_defect: ii[0][0] - profile.f2(n0.u),
        off_max,
        trace,
        self_contraction: sc,
        normality,
    })
}

/// `y` chart point for given null coordinates.
pub fn point_from_null(n: NullCoords) -> CoordinatePoint {
    CoordinatePoint::new(from_null(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_background_is_a_plane() {
        let p = CoordinatePoint::new([3.0, 1.0, 0.5, -0.2]);
        let jet = Jet1 { phi: 0.0, dphi: [0.0; 4], location: p };
        let e = embedding_and_normal(p, &PlaneWaveProfile::flat(), &jet).unwrap();
        assert_eq!(e.normal, [0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(e.position[4], 0.0);
    }

    #[test]
    fn normal_has_unit_length() {
        let prof = PlaneWaveProfile::canonical();
        for u in [-1.0, 0.3, 1.0, 1.7, 4.0] {
            let n = unit_normal(u, &prof).unwrap();
            assert!((minkowski5(&n, &n) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn background_second_form_is_null() {
        let prof = PlaneWaveProfile::canonical();
        for &u in &[0.4, 1.0, 1.6] {
            let c = second_fundamental_form(NullCoords { u, ubar: 2.0, xhat: [0.3, -0.1] }, &prof).unwrap();
            assert!(c.normality < 1e-8, "{c:?}");
            assert!(c.uu_defect.abs() < 1e-6, "{c:?}");
            assert!(c.off_max < 1e-6, "{c:?}");
            assert!(c.trace.abs() < 1e-6, "{c:?}");
            assert!(c.self_contraction.abs() < 1e-8, "{c:?}");
        }
    }
}
