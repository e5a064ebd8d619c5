//! Commuted energies `E[L^alpha phi]` for `|alpha| <= 4` and their running suprema
//! `E_k = sup E[L^{<=k} phi]`, `F_k = sup E[L^{<=k} L^1 phi]`.

use serde::{Deserialize, Serialize};

use super::energy::{energy_geom, energy_mink, metrics_on_sigma, SigmaJet};
use super::sample::HyperboloidSample;
use crate::error::DiagnosticsError;
use crate::geometry::metric::MetricState;
use crate::geometry::profile::PlaneWaveProfile;
use crate::grid::sigma::{SigmaGrid, SigmaPair};

pub const K_MAX: usize = 4;

/// Boost word, listed in application order (first entry applied first), axes `0..3`.
pub type Word = Vec<usize>;

/// Energy of every boost word of length `<= k_max` on one sample.
#[derive(Clone, Debug, PartialEq)]
pub struct WordEnergies {
    pub words: Vec<Word>,
    pub energies: Vec<f64>,
}

impl WordEnergies {
    /// `E[L^{<=k} phi] = (sum over words of length <= k of E^2)^{1/2}`.
    pub fn e_level(&self, k: usize) -> f64 {
        self.sum(|w| w.len() <= k)
    }

    /// `E[L^{<=k} L^1 phi]`: words of length `1..=k+1` whose first-applied boost is `L^1`.
    pub fn f_level(&self, k: usize) -> f64 {
        self.sum(|w| !w.is_empty() && w.len() <= k + 1 && w[0] == 0)
    }

    fn sum(&self, keep: impl Fn(&Word) -> bool) -> f64 {
        self.words.iter().zip(&self.energies).filter(|(w, _)| keep(w)).map(|(_, e)| e * e).sum::<f64>().sqrt()
    }

    pub fn energy(&self, word: &[usize]) -> Option<f64> {
        self.words.iter().position(|w| w.as_slice() == word).map(|i| self.energies[i])
    }
}

/// Which metric defines the commuted energies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyMetric {
    Minkowski,
    Dynamical,
}

struct Walk<'a> {
    sg: &'a SigmaGrid,
    metrics: Option<&'a [MetricState]>,
    k_max: usize,
    out: WordEnergies,
}

impl Walk<'_> {
    /// Depth-first over words; the boosts of a node are its children's fields.
    fn visit(&mut self, word: &mut Word, pair: &SigmaPair) -> Result<(), DiagnosticsError> {
        let l: Vec<Vec<f64>> = (0..3).map(|a| self.sg.tangential(&pair.f, a)).collect();
        let jet = SigmaJet { t: &pair.tf, l: [&l[0], &l[1], &l[2]] };
        let e = match self.metrics {
            None => energy_mink(self.sg, jet),
            Some(m) => energy_geom(self.sg, jet, m)?,
        };
        self.out.words.push(word.clone());
        self.out.energies.push(e);
        if word.len() == self.k_max {
            return Ok(());
        }
        for (a, la) in l.into_iter().enumerate() {
            let mut tlf = self.sg.tangential(&pair.tf, a);
            for idx in 0..self.sg.len() {
                let yi = self.sg.point(idx)[a];
                tlf[idx] += (la[idx] - yi * pair.tf[idx]) / self.sg.y0[idx];
            }
            word.push(a);
            self.visit(word, &SigmaPair { f: la, tf: tlf })?;
            word.pop();
        }
        Ok(())
    }
}

/// Energies of `L^alpha phi` for every word with `|alpha| <= k_max`.
pub fn word_energies(sample: &HyperboloidSample, metrics: Option<&[MetricState]>, k_max: usize) -> Result<WordEnergies, DiagnosticsError> {
    let mut walk = Walk { sg: &sample.sg, metrics, k_max, out: WordEnergies { words: Vec::new(), energies: Vec::new() } };
    walk.visit(&mut Vec::new(), &sample.pair)?;
    Ok(walk.out)
}

/// Dynamical metric of `phi` itself on the sample.
pub fn sample_metrics(sample: &HyperboloidSample, profile: &PlaneWaveProfile) -> Result<Vec<MetricState>, DiagnosticsError> {
    let sg = &sample.sg;
    let l: Vec<Vec<f64>> = (0..3).map(|a| sg.tangential(&sample.pair.f, a)).collect();
    metrics_on_sigma(sg, &sample.pair.f, SigmaJet { t: &sample.pair.tf, l: [&l[0], &l[1], &l[2]] }, profile)
}

/// Running suprema of the levels.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningSup {
    pub e: Vec<f64>,
    pub f: Vec<f64>,
}

impl RunningSup {
    pub fn new(k_max: usize) -> Self {
        RunningSup { e: vec![0.0; k_max + 1], f: vec![0.0; k_max] }
    }

    /// Raises the suprema with the levels of one slice.
    pub fn absorb(&mut self, e: &[f64], f: &[f64]) {
        for (s, v) in self.e.iter_mut().zip(e) {
            *s = s.max(*v);
        }
        for (s, v) in self.f.iter_mut().zip(f) {
            *s = s.max(*v);
        }
    }
}
