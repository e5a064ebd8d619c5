//! Run configuration (TOML).
//!
//! ```toml
//! model = "quasilinear"            # linear | semilinear | quasilinear
//!
//! [profile]                        # F''(u) = amplitude * bump((u - center)/half_width)
//! center = 1.0
//! half_width = 1.0
//! amplitude = 1.0
//!
//! [data]                           # phi = amplitude * bump(|ybar - center|/radius) at y0 = 2
//! amplitude = 1e-3
//! radius = 1.0
//! center = [0.0, 0.0, 0.0]
//! pi_amplitude = 0.0               # pi = pi_amplitude * the same bump
//! shape = "polynomial"             # polynomial (1 - s^2)^8 | smooth exp(1 - 1/(1 - s^2))
//!
//! [grid]
//! half_width = 36.0
//! n = 97
//! cfl = 0.5
//! dissipation = 0.1
//!
//! [run]
//! tau_max = 8.0
//! tau_samples = 25
//! history_depth = 6
//! checkpoint_every = 0             # steps between checkpoints, 0 for the final one only
//!
//! [diagnostics]
//! k_max = 4
//! gamma = 0.25
//! monitors = true
//!
//! [output]
//! directory = "run"
//! formats = ["csv", "json"]
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagnostics::sample::{SupportCone, INITIAL_TIME};
use crate::diagnostics::{DiagnosticsOptions, EnergyMetric};
use crate::error::ConfigError;
use crate::geometry::profile::PlaneWaveProfile;
use crate::grid::evolve::{Guards, MARGIN_CELLS};
use crate::grid::spec::GridSpec;
use crate::grid::state::HISTORY_DEPTH;
use crate::models::ModelKind;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataShape {
    Polynomial,
    Smooth,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub amplitude: f64,
    pub radius: f64,
    #[serde(default)]
    pub center: [f64; 3],
    #[serde(default)]
    pub pi_amplitude: f64,
    #[serde(default = "default_shape")]
    pub shape: DataShape,
}

fn default_shape() -> DataShape {
    DataShape::Polynomial
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub half_width: f64,
    pub n: usize,
    pub cfl: f64,
    pub dissipation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub tau_max: f64,
    pub tau_samples: usize,
    #[serde(default = "default_depth")]
    pub history_depth: usize,
    #[serde(default)]
    pub checkpoint_every: usize,
}

fn default_depth() -> usize {
    HISTORY_DEPTH
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    pub k_max: usize,
    pub gamma: f64,
    #[serde(default = "yes")]
    pub monitors: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_formats() -> Vec<String> {
    vec!["csv".into(), "json".into()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    pub profile: ProfileConfig,
    pub data: DataConfig,
    pub grid: GridConfig,
    pub run: RunSection,
    pub diagnostics: DiagnosticsConfig,
    pub output: OutputConfig,
}

fn invalid(field: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), msg: msg.into() }
}

/// Time steps evolved past the last sampled point.
pub const TAIL_STEPS: f64 = 3.0;

impl RunConfig {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let c: RunConfig = toml::from_str(src).map_err(|e| ConfigError::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization.
    pub fn hash(&self) -> [u8; 32] {
        Sha256::digest(self.to_toml().as_bytes()).into()
    }

    pub fn hash_hex(&self) -> String {
        self.hash().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn profile(&self) -> PlaneWaveProfile {
        PlaneWaveProfile::single(self.profile.center, self.profile.half_width, self.profile.amplitude)
    }

    pub fn grid_spec(&self) -> Result<GridSpec, ConfigError> {
        GridSpec::new(self.grid.half_width, self.grid.n, self.grid.dissipation, self.grid.cfl)
            .map_err(|e| invalid("grid", e.to_string()))
    }

    pub fn cone(&self) -> SupportCone {
        SupportCone { center: self.data.center, radius: self.data.radius }
    }

    pub fn diagnostics_options(&self) -> DiagnosticsOptions {
        DiagnosticsOptions {
            k_max: self.diagnostics.k_max,
            gamma: self.diagnostics.gamma,
            metric: if self.model == ModelKind::Quasilinear { EnergyMetric::Dynamical } else { EnergyMetric::Minkowski },
            monitors: self.diagnostics.monitors,
        }
    }

    pub fn taus(&self) -> Vec<f64> {
        let n = self.run.tau_samples;
        (0..n).map(|i| INITIAL_TIME + (self.run.tau_max - INITIAL_TIME) * i as f64 / (n - 1) as f64).collect()
    }

    /// Time the evolution must reach to cover every sample.
    pub fn end_time(&self, grid: &GridSpec) -> f64 {
        self.cone().y0_max(self.run.tau_max) + TAIL_STEPS * grid.dt(1.0)
    }

    /// Smallest box half-width keeping the cone, the guard tolerance and the margin band
    /// inside the grid until the end time.
    pub fn required_half_width(&self, grid: &GridSpec) -> f64 {
        let d = &self.data;
        let c = (d.center[0].powi(2) + d.center[1].powi(2) + d.center[2].powi(2)).sqrt();
        let cells = MARGIN_CELLS as f64 + Guards::default().cone_cells + 1.0;
        c + d.radius + self.end_time(grid) - INITIAL_TIME + cells * grid.h()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = &self.profile;
        if !(p.half_width > 0.0) || !p.center.is_finite() || !p.amplitude.is_finite() {
            return Err(invalid("profile", "half_width must be positive and all values finite"));
        }
        let d = &self.data;
        if !d.amplitude.is_finite() || !d.pi_amplitude.is_finite() {
            return Err(invalid("data.amplitude", "must be finite"));
        }
        let c = (d.center[0].powi(2) + d.center[1].powi(2) + d.center[2].powi(2)).sqrt();
        if !(d.radius > 0.0 && c + d.radius <= 1.0 + 1e-12) {
            return Err(invalid("data", "the data ball must lie in the unit ball"));
        }
        let grid = self.grid_spec()?;
        let r = &self.run;
        if !(r.tau_max > INITIAL_TIME) {
            return Err(invalid("run.tau_max", "must exceed 2"));
        }
        if r.tau_samples < 2 {
            return Err(invalid("run.tau_samples", "need at least 2"));
        }
        if r.history_depth != HISTORY_DEPTH {
            return Err(invalid("run.history_depth", format!("quintic interpolation needs {HISTORY_DEPTH} levels")));
        }
        let dg = &self.diagnostics;
        if dg.k_max == 0 || dg.k_max > 4 {
            return Err(invalid("diagnostics.k_max", "must be in 1..=4"));
        }
        if !(dg.gamma > 0.0 && dg.gamma < 1.0 / 3.0) {
            return Err(invalid("diagnostics.gamma", "must be in (0, 1/3)"));
        }
        for f in &self.output.formats {
            if f != "csv" && f != "json" {
                return Err(invalid("output.formats", format!("unknown format `{f}`")));
            }
        }
        let reach = self.required_half_width(&grid);
        if reach > grid.half_width {
            return Err(invalid(
                "grid.half_width",
                format!("the light cone of the data reaches {reach:.3} by tau_max; need half_width >= that"),
            ));
        }
        Ok(())
    }
}
