//! Structured warnings attached to numerical results.
//!
//! Diagnostics never abort a computation. They record pole proximity,
//! exhausted subdivision budgets, regime-validity warnings and similar
//! conditions so that callers (and the CLI output) can surface them
//! verbatim next to the numbers they qualify.

use serde::Serialize;

/// Severity of a diagnostic. `Warning`s qualify a result that is still
/// usable; `Error`s mark a value that should not be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Warning,
    Error,
}

/// Machine-readable diagnostic category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticCode {
    /// Adaptive subdivision stopped at the segment budget before the
    /// requested tolerance was met.
    MaxSegmentsExhausted,
    /// The integrand hit an exact pole (unit loop reflectivity on
    /// resonance); the point was excluded as measure zero.
    PoleAtResonance,
    /// The oscillatory tail did not alternate in sign; a plain truncated
    /// sum was used instead of series acceleration.
    NonAlternatingTail,
    /// Richardson refinement of a numerical derivative did not settle.
    DerivativeNotConverged,
    /// An integral was truncated at an ultraviolet cutoff.
    TruncatedAtCutoff,
    /// Field frequencies approach the scatterer mass: the no-recoil
    /// scattering matrix is no longer a good approximation.
    RecoilRegime,
    /// The low-frequency thermal weight makes this spectral form
    /// ill-conditioned (it diverges for cavities with unit reflection
    /// at zero frequency).
    ThermalPhaseFormIllConditioned,
    /// Fewer features (e.g. resonance maxima) were found than requested.
    FewerThanRequested,
    /// The computed value is not finite.
    NonFiniteValue,
}

/// One structured warning with an optional frequency it refers to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

impl Diagnostic {
    pub fn warning(code: DiagnosticCode, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            omega: None,
        }
    }

    pub fn error(code: DiagnosticCode, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            omega: None,
        }
    }

    pub fn at_omega(mut self, omega: f64) -> Self {
        self.omega = Some(omega);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}
