//! Evolved fields and their time history.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::GridError;

/// `phi` and `pi = T phi` on the grid at time `t = y0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub phi: Vec<f64>,
    pub pi: Vec<f64>,
}

impl FieldState {
    pub fn zeros(len: usize, t: f64) -> Self {
        FieldState { t, phi: vec![0.0; len], pi: vec![0.0; len] }
    }
}

/// One stored time level; arrays are shared with readers.
#[derive(Clone, Debug)]
pub struct Level {
    pub t: f64,
    pub phi: Arc<Vec<f64>>,
    pub pi: Arc<Vec<f64>>,
}

/// Ring buffer of the most recent time levels, oldest first.
#[derive(Clone, Debug)]
pub struct History {
    depth: usize,
    levels: VecDeque<Level>,
}

pub const HISTORY_DEPTH: usize = 6;

impl History {
    pub fn new(depth: usize) -> Self {
        History { depth: depth.max(2), levels: VecDeque::with_capacity(depth) }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.levels.len() == self.depth
    }

    pub fn push(&mut self, s: &FieldState) {
        if self.levels.len() == self.depth {
            self.levels.pop_front();
        }
        self.levels.push_back(Level { t: s.t, phi: Arc::new(s.phi.clone()), pi: Arc::new(s.pi.clone()) });
    }

    pub fn levels(&self) -> impl Iterator<Item = &Level> {
        self.levels.iter()
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    pub fn latest(&self) -> Option<&Level> {
        self.levels.back()
    }

    pub fn times(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.t).collect()
    }

    /// `[oldest, newest]` stored time.
    pub fn window(&self) -> (f64, f64) {
        match (self.levels.front(), self.levels.back()) {
            (Some(a), Some(b)) => (a.t, b.t),
            _ => (f64::NAN, f64::NAN),
        }
    }

    /// Weights of the interpolating polynomial through all stored levels (or of its
    /// first derivative) at time `t`, which must lie in the window.
    pub fn weights(&self, t: f64, derivative: bool) -> Result<Vec<f64>, GridError> {
        let (lo, hi) = self.window();
        let slack = 1e-12 * (1.0 + hi.abs());
        if self.levels.len() < 2 || !(t >= lo - slack && t <= hi + slack) {
            return Err(GridError::WindowInsufficient { needed: t, lo, hi });
        }
        let ts = self.times();
        Ok(if derivative { lagrange_derivative_weights(&ts, t) } else { lagrange_weights(&ts, t) })
    }

    /// Interpolated `(phi, pi)` at grid index `idx` and time `t`.
    pub fn interpolate(&self, idx: usize, t: f64) -> Result<(f64, f64), GridError> {
        let w = self.weights(t, false)?;
        Ok(self.combine_at(&w, idx))
    }

    pub fn combine_at(&self, w: &[f64], idx: usize) -> (f64, f64) {
        let mut a = 0.0;
        let mut b = 0.0;
        for (l, &c) in self.levels.iter().zip(w) {
            a += c * l.phi[idx];
            b += c * l.pi[idx];
        }
        (a, b)
    }
}

pub fn lagrange_weights(ts: &[f64], t: f64) -> Vec<f64> {
    (0..ts.len())
        .map(|j| {
            ts.iter().enumerate().filter(|&(m, _)| m != j).map(|(_, &tm)| (t - tm) / (ts[j] - tm)).product()
        })
        .collect()
}

pub fn lagrange_derivative_weights(ts: &[f64], t: f64) -> Vec<f64> {
    (0..ts.len())
        .map(|j| {
            let denom: f64 = ts.iter().enumerate().filter(|&(m, _)| m != j).map(|(_, &tm)| ts[j] - tm).product();
            let mut s = 0.0;
            for k in 0..ts.len() {
                if k == j {
                    continue;
                }
                let p: f64 = ts
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != j && m != k)
                    .map(|(_, &tm)| t - tm)
                    .product();
                s += p;
            }
            s / denom
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_interpolation_is_exact() {
        let ts: Vec<f64> = (0..6).map(|i| 2.0 + 0.3 * i as f64).collect();
        let p = |t: f64| 1.0 - 2.0 * t + 0.5 * t.powi(3) - 0.1 * t.powi(5);
        let dp = |t: f64| -2.0 + 1.5 * t * t - 0.5 * t.powi(4);
        for t in [2.0, 2.17, 2.9, 3.5] {
            let w = lagrange_weights(&ts, t);
            let v: f64 = w.iter().zip(&ts).map(|(a, &s)| a * p(s)).sum();
            assert!((v - p(t)).abs() < 1e-12);
            let w = lagrange_derivative_weights(&ts, t);
            let v: f64 = w.iter().zip(&ts).map(|(a, &s)| a * p(s)).sum();
            assert!((v - dp(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn ring_buffer_keeps_the_latest_levels() {
        let mut h = History::new(HISTORY_DEPTH);
        for i in 0..9 {
            let mut s = FieldState::zeros(2, i as f64);
            s.phi[0] = (i * i) as f64;
            s.pi[1] = 2.0 * i as f64;
            h.push(&s);
        }
        assert_eq!(h.len(), 6);
        assert_eq!(h.window(), (3.0, 8.0));
        let (a, b) = h.interpolate(0, 5.5).unwrap();
        assert!((a - 30.25).abs() < 1e-12);
        assert!((b - 0.0).abs() < 1e-12);
        assert!(matches!(h.interpolate(0, 8.5), Err(GridError::WindowInsufficient { .. })));
    }
}
