//! Pointwise assembly of the perturbed metrics from a first jet of the perturbation.

use std::f64::consts::FRAC_1_SQRT_2;

use super::coords::CoordinatePoint;
use super::profile::PlaneWaveProfile;
use crate::error::GeometryError;

pub type Mat4 = [[f64; 4]; 4];

pub const ETA: Mat4 = [
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// `d/dubar` in the `y` chart.
pub const DUBAR: [f64; 4] = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0, 0.0];
/// `du` in the `y` chart.
pub const DU: [f64; 4] = [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0];

/// Minimal determinant ratio accepted by [`metric_at`].
pub const MIN_DET: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1 {
    pub phi: f64,
    pub dphi: [f64; 4],
    pub location: CoordinatePoint,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricState {
    /// `eta - 2 phi F'' du du`
    pub gt: Mat4,
    pub g: Mat4,
    pub gt_inv: Mat4,
    pub g_inv: Mat4,
    /// `|g| = 1 + gt^{-1}(dphi, dphi)`
    pub det: f64,
    /// `|g|^{-2/(d-1)}` with `d = 3`
    pub conformal: f64,
}

pub fn contract(m: &Mat4, a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += m[i][j] * a[i] * b[j];
        }
    }
    s
}

pub fn mat_vec(m: &Mat4, a: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i] += m[i][j] * a[j];
        }
    }
    out
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// `gt^{-1}` for a given value of `c = phi F''`.
pub fn gt_inverse(c: f64) -> Mat4 {
    let mut m = ETA;
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] += 2.0 * c * DUBAR[i] * DUBAR[j];
        }
    }
    m
}

pub fn metric_at(jet: &Jet1, profile: &PlaneWaveProfile) -> Result<MetricState, GeometryError> {
    let u = jet.location.null().u;
    let c = jet.phi * profile.f2(u);
    metric_from_c(c, &jet.dphi)
}

/// Metric assembly given `c = phi F''(u)` and the gradient.
pub fn metric_from_c(c: f64, dphi: &[f64; 4]) -> Result<MetricState, GeometryError> {
    let mut gt = ETA;
    for i in 0..4 {
        for j in 0..4 {
            gt[i][j] -= 2.0 * c * DU[i] * DU[j];
        }
    }
    let gt_inv = gt_inverse(c);
    let w = mat_vec(&gt_inv, dphi);
    let det = 1.0 + w.iter().zip(dphi).map(|(a, b)| a * b).sum::<f64>();
    if !(det >= MIN_DET) {
        return Err(GeometryError::DegenerateMetric { det });
    }
    let mut g = gt;
    let mut g_inv = gt_inv;
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] += dphi[i] * dphi[j];
            g_inv[i][j] -= w[i] * w[j] / det;
        }
    }
    Ok(MetricState { gt, g, gt_inv, g_inv, det, conformal: 1.0 / det })
}

/// Gauss-Jordan inverse with partial pivoting (reference implementation).
pub fn invert4(m: &Mat4) -> Option<Mat4> {
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for k in 0..4 {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for r in 0..4 {
            if r != col {
                let f = a[r][col];
                for k in 0..4 {
                    a[r][k] -= f * a[col][k];
                    inv[r][k] -= f * inv[col][k];
                }
            }
        }
    }
    Some(inv)
}

pub fn det4(m: &Mat4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for k in col..4 {
                a[r][k] -= f * a[col][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin() -> CoordinatePoint {
        CoordinatePoint::new([2.0, 0.0, 0.0, 0.0])
    }

    #[test]
    fn zero_jet_is_minkowski() {
        let m = metric_at(&Jet1 { phi: 0.0, dphi: [0.0; 4], location: origin() }, &PlaneWaveProfile::canonical()).unwrap();
        assert_eq!(m.g, ETA);
        assert_eq!(m.g_inv, ETA);
        assert_eq!(m.det, 1.0);
    }

    #[test]
    fn rank_one_components() {
        let m = metric_from_c(0.05, &[0.0; 4]).unwrap();
        assert!((m.gt_inv[0][0] + 0.95).abs() < 1e-15);
        assert!((m.gt_inv[0][1] + 0.05).abs() < 1e-15);
        assert!((m.gt_inv[1][1] - 1.05).abs() < 1e-15);
    }

    #[test]
    fn determinant_ratio_matches_matrix_determinant() {
        let m = metric_from_c(0.03, &[0.05, -0.02, 0.07, 0.01]).unwrap();
        assert!((det4(&m.g) / det4(&ETA) - m.det).abs() < 1e-14);
    }

    #[test]
    fn degenerate_metric_rejected() {
        assert!(matches!(metric_from_c(0.0, &[0.0, 0.8, 0.0, 0.0]), Ok(_)));
        assert!(matches!(metric_from_c(0.0, &[0.9, 0.0, 0.0, 0.0]), Err(GeometryError::DegenerateMetric { .. })));
    }
}
