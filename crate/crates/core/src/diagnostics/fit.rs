//! Growth-rate fits `v ~ tau^p` and `v ~ tau^p (ln tau)^q` by least squares in log variables.

use serde::{Deserialize, Serialize};

use crate::error::DiagnosticsError;

pub const MIN_SAMPLES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// Exponent of the pure power fit.
    pub p: f64,
    /// RMS residual of `ln v` for the power fit.
    pub residual: f64,
    /// Exponents `(p, q)` of the power-times-log fit.
    pub log_fit: (f64, f64),
    pub log_residual: f64,
    /// Set when the log-augmented fit explains the data markedly better.
    pub log_flag: bool,
}

/// Least squares for `z ~ sum_j c_j x_j` by the normal equations (at most 3 unknowns).
fn lsq(rows: &[Vec<f64>], z: &[f64]) -> Result<(Vec<f64>, f64), DiagnosticsError> {
    let m = rows[0].len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for (r, &zv) in rows.iter().zip(z) {
        for i in 0..m {
            for j in 0..m {
                a[i][j] += r[i] * r[j];
            }
            a[i][m] += r[i] * zv;
        }
    }
    for c in 0..m {
        let piv = (c..m).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, piv);
        if a[c][c].abs() < 1e-14 * (1.0 + a[c][m].abs()) {
            return Err(DiagnosticsError::DegenerateWindow("singular normal equations".into()));
        }
        for r in 0..m {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=m {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..m).map(|i| a[i][m] / a[i][i]).collect();
    let rss: f64 = rows.iter().zip(z).map(|(r, &zv)| (zv - r.iter().zip(&coef).map(|(x, c)| x * c).sum::<f64>()).powi(2)).sum();
    Ok((coef, (rss / rows.len() as f64).sqrt()))
}

/// Fits the samples with `lo <= tau <= hi`.
pub fn fit_rate(series: &[(f64, f64)], window: (f64, f64)) -> Result<RateFit, DiagnosticsError> {
    let pts: Vec<(f64, f64)> = series.iter().copied().filter(|&(t, _)| t >= window.0 && t <= window.1).collect();
    if pts.len() < MIN_SAMPLES {
        return Err(DiagnosticsError::DegenerateWindow(format!("{} samples in [{}, {}], need {MIN_SAMPLES}", pts.len(), window.0, window.1)));
    }
    if let Some(&(t, v)) = pts.iter().find(|&&(t, v)| !(v > 0.0) || !(t > 1.0)) {
        return Err(DiagnosticsError::DegenerateWindow(format!("sample ({t}, {v}) is not positive with tau > 1")));
    }
    let z: Vec<f64> = pts.iter().map(|&(_, v)| v.ln()).collect();
    let power: Vec<Vec<f64>> = pts.iter().map(|&(t, _)| vec![1.0, t.ln()]).collect();
    let (c, residual) = lsq(&power, &z)?;
    let logs: Vec<Vec<f64>> = pts.iter().map(|&(t, _)| vec![1.0, t.ln(), t.ln().ln()]).collect();
    let (cl, log_residual) = lsq(&logs, &z)?;
    let log_flag = residual > 1e-9 && log_residual < 0.5 * residual;
    Ok(RateFit { p: c[1], residual, log_fit: (cl[1], cl[2]), log_residual, log_flag })
}
