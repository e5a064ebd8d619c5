//! Hyperboloid sampling, energies and their hierarchy, inequality checks, decay monitors
//! and growth-rate fits.

pub mod energy;
pub mod fit;
pub mod hierarchy;
pub mod inequalities;
pub mod sample;

use serde::{Deserialize, Serialize};

use crate::error::DiagnosticsError;
use crate::geometry::profile::PlaneWaveProfile;
pub use energy::{energy_geom, energy_mink, SigmaJet};
pub use fit::{fit_rate, RateFit};
pub use hierarchy::{word_energies, EnergyMetric, RunningSup, WordEnergies};
pub use inequalities::{check_hardy, check_stress_decomposition, sobolev_ratio};
pub use sample::{inject, sample_hyperboloid, HyperboloidSample, IncrementalSampler, SupportCone};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsOptions {
    pub k_max: usize,
    pub gamma: f64,
    pub metric: EnergyMetric,
    /// Pointwise monitors and the Sobolev ratio.
    pub monitors: bool,
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        DiagnosticsOptions { k_max: hierarchy::K_MAX, gamma: 0.25, metric: EnergyMetric::Minkowski, monitors: true }
    }
}

/// Everything measured on one hyperboloid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceRecord {
    pub tau: f64,
    /// `E[L^{<=k} phi]` for `k = 0..=k_max`.
    pub e: Vec<f64>,
    /// `E[L^{<=k} L^1 phi]` for `k = 0..k_max`.
    pub f: Vec<f64>,
    pub mink_e0: f64,
    pub geom_e0: f64,
    pub sup_phi_w: f64,
    pub sup_tphi_w: f64,
    pub sup_l1_w: f64,
    pub sup_l2_w: f64,
    pub sobolev_ratio: f64,
    /// `max |g^{-1}(d tau, d tau) + 1|`.
    pub dtau_deviation: f64,
    pub det_range: (f64, f64),
    /// Points with a nonzero field farther than `4h` outside the support cone.
    pub support_violations: usize,
}

pub fn analyze_slice(
    sample: &HyperboloidSample,
    profile: &PlaneWaveProfile,
    opts: &DiagnosticsOptions,
    cone: SupportCone,
) -> Result<SliceRecord, DiagnosticsError> {
    let sg = &sample.sg;
    let tau = sg.tau;
    let metrics = hierarchy::sample_metrics(sample, profile)?;
    let words = word_energies(sample, (opts.metric == EnergyMetric::Dynamical).then_some(metrics.as_slice()), opts.k_max)?;
    let phi = &sample.pair.f;
    let tphi = &sample.pair.tf;
    let l: Vec<Vec<f64>> = (0..3).map(|a| sg.tangential(phi, a)).collect();
    let jet = SigmaJet { t: tphi, l: [&l[0], &l[1], &l[2]] };
    let mink_e0 = energy_mink(sg, jet);
    let geom_e0 = energy_geom(sg, jet, &metrics)?;
    let norms = energy::dtau_norms(sg, &metrics);
    let dtau_deviation = norms.iter().map(|v| (v + 1.0).abs()).fold(0.0, f64::max);
    let det_range = metrics.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), m| (a.min(m.det), b.max(m.det)));
    let g = opts.gamma;
    let (mut sp, mut st, mut s1, mut s2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let fmax = phi.iter().chain(tphi).fold(0.0f64, |m, v| m.max(v.abs()));
    let mut support_violations = 0;
    for idx in 0..sg.len() {
        let w = sg.y0[idx].sqrt();
        sp = sp.max(phi[idx].abs() * w);
        st = st.max(tphi[idx].abs() * w * tau.powf(1.0 - g));
        s1 = s1.max(l[0][idx].abs() * w);
        s2 = s2.max(l[1][idx].abs() * w * tau.powf(-g));
        let v = phi[idx].abs().max(tphi[idx].abs());
        if v > 1e-4 * fmax && !cone.admits(sg.spacetime_point(idx), 4.0 * sg.h) {
            support_violations += 1;
        }
    }
    let sobolev = if opts.monitors { sobolev_ratio(sg, phi, 0) } else { 0.0 };
    Ok(SliceRecord {
        tau,
        e: (0..=opts.k_max).map(|k| words.e_level(k)).collect(),
        f: (0..opts.k_max).map(|k| words.f_level(k)).collect(),
        mink_e0,
        geom_e0,
        sup_phi_w: sp,
        sup_tphi_w: st,
        sup_l1_w: s1,
        sup_l2_w: s2,
        sobolev_ratio: sobolev,
        dtau_deviation,
        det_range,
        support_violations,
    })
}

/// One output row: running suprema of the hierarchy plus the slice monitors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub tau: f64,
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub slice: SliceRecord,
}

#[derive(Clone, Debug, Default)]
pub struct HierarchyTracker {
    pub sup: RunningSup,
    pub records: Vec<EnergyRecord>,
}

impl HierarchyTracker {
    pub fn new(k_max: usize) -> Self {
        HierarchyTracker { sup: RunningSup::new(k_max), records: Vec::new() }
    }

    pub fn push(&mut self, slice: SliceRecord) -> &EnergyRecord {
        self.sup.absorb(&slice.e, &slice.f);
        self.records.push(EnergyRecord { tau: slice.tau, e: self.sup.e.clone(), f: self.sup.f.clone(), slice });
        self.records.last().expect("just pushed")
    }

    /// `(tau, value)` series of a column.
    pub fn series(&self, pick: impl Fn(&EnergyRecord) -> f64) -> Vec<(f64, f64)> {
        self.records.iter().map(|r| (r.tau, pick(r))).collect()
    }
}
