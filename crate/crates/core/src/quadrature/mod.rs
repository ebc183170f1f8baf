//! Integration engine for semi-infinite, resonance-peaked, conditionally
//! convergent oscillatory spectral integrals.
//!
//! Three entry points cover the needs of the spectral observables:
//!
//! * [`integrate_adaptive`] — globally adaptive Gauss-Kronrod subdivision
//!   on a finite interval, optionally seeded with breakpoints around
//!   known resonances;
//! * [`integrate_oscillatory_tail`] — alternating half-period segment
//!   sums with iterated-averaging acceleration, for tails that decay only
//!   through oscillation;
//! * [`wick_axis_value`] — the imaginary-frequency route to the vacuum
//!   cavity energy, where the integrand is smooth and exponentially
//!   damped.
//!
//! Everything is deterministic: identical inputs produce bit-identical
//! results, and the final reduction always sums segments in interval
//! order.

pub mod gauss_kronrod;

mod adaptive;
mod tail;
mod wick;

pub use adaptive::{integrate_adaptive, integrate_adaptive_with_markers};
pub use tail::{integrate_oscillatory_tail, integrate_oscillatory_tail_with_edges};
pub use wick::wick_axis_value;

use serde::{Deserialize, Serialize};

use crate::diagnostics::Diagnostic;

/// Subdivision policy for the resonant part of a spectral integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Segmentation {
    /// Segment boundaries on the cavity phase grid, with extra brackets
    /// hugging each resonance peak.
    #[default]
    ResonanceAware,
    /// Segment boundaries on the cavity phase grid only.
    UniformInPhase,
}

/// Tolerances, budgets and cutoff policy for one integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_segments: usize,
    /// Ultraviolet cutoff Λ; 0 means none (rely on oscillatory-tail
    /// acceleration). Mandatory only for integrals that diverge without
    /// it, which report the cutoff they used.
    pub uv_cutoff: f64,
    pub segmentation: Segmentation,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_segments: 20_000,
            uv_cutoff: 0.0,
            segmentation: Segmentation::ResonanceAware,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(format!("rel_tol must be positive, got {}", self.rel_tol));
        }
        if !(self.abs_tol.is_finite() && self.abs_tol >= 0.0) {
            return Err(format!("abs_tol must be >= 0, got {}", self.abs_tol));
        }
        if self.max_segments == 0 {
            return Err("max_segments must be at least 1".into());
        }
        if !(self.uv_cutoff.is_finite() && self.uv_cutoff >= 0.0) {
            return Err(format!("uv_cutoff must be >= 0, got {}", self.uv_cutoff));
        }
        Ok(())
    }

    /// The cutoff as an option; `0` encodes "none".
    pub fn effective_cutoff(&self) -> Option<f64> {
        if self.uv_cutoff > 0.0 {
            Some(self.uv_cutoff)
        } else {
            None
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_uv_cutoff(mut self, uv_cutoff: f64) -> Self {
        self.uv_cutoff = uv_cutoff;
        self
    }

    pub(crate) fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Value of an integral together with its error estimate and whatever
/// the engine wants the caller to know about how it got there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub segments_used: usize,
    pub diagnostics: Vec<Diagnostic>,
}

impl IntegralResult {
    pub fn new(value: f64, error_estimate: f64, segments_used: usize) -> Self {
        IntegralResult {
            value,
            error_estimate,
            segments_used,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_diagnostics(mut self, diagnostics: Vec<Diagnostic>) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    /// True when any attached diagnostic is error-level.
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.is_error())
    }

    /// Maps the value, combining error estimates and diagnostics of two
    /// results (for sums of integrals over adjacent ranges).
    pub fn combine(mut self, other: IntegralResult) -> IntegralResult {
        self.value += other.value;
        self.error_estimate += other.error_estimate;
        self.segments_used += other.segments_used;
        self.diagnostics.extend(other.diagnostics);
        self
    }

    /// Rescales value and error by a constant factor.
    pub fn scaled(mut self, factor: f64) -> IntegralResult {
        self.value *= factor;
        self.error_estimate *= factor.abs();
        self
    }
}
