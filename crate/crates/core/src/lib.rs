//! Mechanical observables of vacuum and thermal field fluctuations for a
//! two-mirror cavity and a pointlike scatterer, in 1+1 dimensions with
//! ħ = c = 1.
//!
//! The crate computes the Casimir force and energy of a cavity of
//! partially transmitting mirrors by three independent spectral routes
//! (phase shifts, time delays and force integration), the quasistatic
//! stiffness and inertial mass correction, and the quantum noise
//! spectrum of the field-induced mass of a point scatterer — all on top
//! of a deterministic adaptive quadrature engine built for
//! resonance-peaked, conditionally convergent oscillatory integrands.

pub mod cavity;
pub mod diagnostics;
pub mod mirrors;
pub mod numdiff;
pub mod observables;
pub mod quadrature;
pub mod scatterer;

pub use cavity::{Cavity, CavityError, ResonanceScan, SpectralSample};
pub use diagnostics::{Diagnostic, DiagnosticCode, Severity};
pub use mirrors::{amplitude_phase, MirrorError, MirrorModel, PhaseSweep};
pub use observables::{
    casimir_energy_delay, casimir_energy_phase, casimir_energy_wick, casimir_force,
    energy_breakdown, mass_correction, perfect_mirror_oracle, planck_occupation, stiffness,
    EnergyBreakdown, ObservableError, QuasistaticSummary, RouteResiduals, ThermalState,
};
pub use quadrature::{
    integrate_adaptive, integrate_adaptive_with_markers, integrate_oscillatory_tail,
    integrate_oscillatory_tail_with_edges, wick_axis_value, IntegralResult, QuadratureSpec,
    Segmentation,
};
pub use scatterer::{
    low_freq_asymptote, mass_noise_spectrum, mass_variance_t0, mean_mass_correction,
    recoil_validity, scatterer_statistics, MassStatistics, MeanMassCorrection, PointScattererSpec,
    RecoilStatus, RecoilValidity, ScattererError, VarianceT0,
};
