use thiserror::Error;

/// Errors produced by the rail model and the noise pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A spec field violates its domain invariant (reported per field).
    #[error("invalid {field}: {reason}")]
    InvalidSpec { field: &'static str, reason: String },

    /// The boundary-value solve is singular: the drive frequency sits on an
    /// undamped resonance and the response diverges.
    #[error("resonance singularity: boundary solve ill-conditioned at omega = {omega} rad/s (condition number {condition:.3e})")]
    ResonanceSingularity { omega: f64, condition: f64 },

    /// Root bracketing failed to isolate a bending resonance.
    #[error("failed to bracket bending resonance {index}: no sign change in [{lo}, {hi}]")]
    RootBracketing { index: usize, lo: f64, hi: f64 },

    /// A spectrum file line could not be parsed.
    #[error("spectrum parse error at line {line}: {reason}")]
    SpectrumParse { line: usize, reason: String },

    /// Spectrum samples out of order or otherwise invalid.
    #[error("invalid spectrum at line {line}: {reason}")]
    SpectrumInvalid { line: usize, reason: String },

    /// A frequency fell outside the tabulated spectrum support.
    #[error("frequency {nu} Hz outside spectrum support [{lo}, {hi}] Hz")]
    OutsideSpectrum { nu: f64, lo: f64, hi: f64 },

    /// Integration bounds select nothing.
    #[error("empty integration range [{f_min}, {f_max}] Hz")]
    EmptyRange { f_min: f64, f_max: f64 },

    /// Visibility fit rejected its input.
    #[error("visibility fit: {reason}")]
    VisibilityFit { reason: String },

    /// Underlying I/O failure while reading an input file.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidSpec {
            field,
            reason: reason.into(),
        }
    }
}

/// Finite and strictly positive; the validity test for most spec fields.
pub(crate) fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}
