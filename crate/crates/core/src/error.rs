use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point {y:?} is not inside the forward light cone")]
    OutsideLightCone { y: [f64; 4] },
    #[error("degenerate metric: |g| = {det}")]
    DegenerateMetric { det: f64 },
    #[error("quadrature on [{a}, {b}] did not reach tolerance {tol}")]
    QuadratureNonConvergence { a: f64, b: f64, tol: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LedgerError {
    #[error("middle energy index {middle} exceeds k_max = {k_max}")]
    ClosureViolation { middle: usize, k_max: usize },
    #[error("gamma = {gamma} outside the admissible range (0, {bound})")]
    InvalidGamma { gamma: String, bound: String },
    #[error("no bootstrap scheme for dimension {0}")]
    UnsupportedDimension(usize),
    #[error("term inventory `{0}` is missing")]
    MissingInventory(String),
    #[error("inventory data: {0}")]
    InventoryFormat(String),
    #[error("golden table line {line}: {msg}")]
    GoldenFormat { line: usize, msg: String },
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid parameters: {0}")]
    Spec(String),
    #[error("derivative order {0} not supported")]
    UnsupportedOrder(usize),
    #[error("field nonzero ({value:e}) inside the stencil halo at y0 = {y0}")]
    InsufficientMargin { y0: f64, value: f64 },
    #[error("support escape at y0 = {y0}: |field| = {value:e} at {point:?}")]
    SupportEscape { y0: f64, value: f64, point: [f64; 3] },
    #[error("non-finite value at y0 = {y0}")]
    NonFinite { y0: f64 },
    #[error("time step {dt} exceeds the stability limit {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("time history does not cover y0 = {needed} (window [{lo}, {hi}])")]
    WindowInsufficient { needed: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("hyperbolicity lost at {y:?}: A00 = {a00}, |g| = {det}")]
    HyperbolicityLoss { y: [f64; 4], a00: f64, det: f64 },
    #[error("TT coefficient degenerate at {y:?}: c_TT (y0/tau)^2 = {ratio}")]
    CoefficientDegenerate { y: [f64; 4], ratio: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("time history does not cover Sigma_tau for tau = {tau}")]
    WindowInsufficient { tau: f64 },
    #[error("foliation not spacelike: g^-1(dtau, dtau) = {value} at {y:?}")]
    NotSpacelike { value: f64, y: [f64; 4] },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config field `{field}`: {msg}")]
    Invalid { field: String, msg: String },
    #[error("config i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Errors of a full run, each mapped to a stable process exit code.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("guard tripped: {0}")]
    Guard(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Guard(_) => 3,
            RunError::Numerical(_) | RunError::Io(_) => 4,
        }
    }
}

impl From<GridError> for RunError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::SupportEscape { .. } | GridError::InsufficientMargin { .. } | GridError::Cfl { .. } => {
                RunError::Guard(e.to_string())
            }
            _ => RunError::Numerical(e.to_string()),
        }
    }
}

impl From<ModelError> for RunError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Grid(g) => g.into(),
            ModelError::HyperbolicityLoss { .. } | ModelError::CoefficientDegenerate { .. } => {
                RunError::Guard(e.to_string())
            }
            ModelError::Geometry(GeometryError::DegenerateMetric { .. }) => RunError::Guard(e.to_string()),
            ModelError::Geometry(_) => RunError::Numerical(e.to_string()),
        }
    }
}

impl From<DiagnosticsError> for RunError {
    fn from(e: DiagnosticsError) -> Self {
        match e {
            DiagnosticsError::Model(m) => m.into(),
            DiagnosticsError::Grid(g) => g.into(),
            DiagnosticsError::NotSpacelike { .. } => RunError::Guard(e.to_string()),
            _ => RunError::Numerical(e.to_string()),
        }
    }
}
