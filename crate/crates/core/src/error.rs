use thiserror::Error;

/// Errors produced by the simulation core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("time series has {got} rows, expected {expected}")]
    SeriesLength { got: usize, expected: usize },

    #[error("line {line}: expected hour {expected}, found {got}")]
    HourSequence { line: usize, expected: u32, got: u32 },

    #[error("line {line}: cannot parse {field} value {text:?}")]
    NumericCell { line: usize, field: &'static str, text: String },

    #[error("line {line}: negative value {value} not allowed for {quantity}")]
    NegativeValue { line: usize, quantity: &'static str, value: f64 },

    #[error("bad header {got:?}, expected {expected:?}")]
    HeaderMismatch { got: String, expected: &'static str },

    #[error("{context}: value {value} outside [{min}, {max}]")]
    OutOfRange { context: &'static str, value: f64, min: f64, max: f64 },

    #[error("series mean is {mean}; a positive mean is required to rescale")]
    NonPositiveMean { mean: f64 },

    #[error("load peak {peak_kw} kW is below the average power {avg_kw} kW")]
    PeakBelowAverage { peak_kw: f64, avg_kw: f64 },

    #[error("load series has no positive values")]
    AllZeroLoad,

    #[error("power curve: {0}")]
    PowerCurve(String),

    #[error("battery state {stored_kwh} kWh outside bank bounds [{min_kwh}, {max_kwh}] kWh")]
    SocOutOfBounds { stored_kwh: f64, min_kwh: f64, max_kwh: f64 },

    #[error("search space dimension {0} is empty")]
    EmptySearchDimension(&'static str),

    #[error("search space dimension {0} must be strictly increasing and nonnegative")]
    UnsortedSearchDimension(&'static str),

    #[error("no energy served; cannot compute per-kWh figures")]
    ZeroServedEnergy,

    #[error("inflation rate must be greater than -1, got {0}")]
    InvalidInflation(f64),

    #[error("project life must be at least one year, got {0}")]
    InvalidProjectLife(f64),

    #[error("component life must be positive, got {0}")]
    InvalidComponentLife(f64),

    #[error("network access disabled; rerun with networking explicitly enabled")]
    OfflineMode,

    #[error("resource service returned HTTP status {0}")]
    HttpStatus(u16),

    #[error("resource service request failed: {0}")]
    HttpTransport(String),

    #[error("resource service response missing field {0:?}")]
    MissingField(String),
}

pub type Result<T> = std::result::Result<T, Error>;
