//! Casimir observables of a cavity in vacuum or thermal field
//! fluctuations (ħ = c = 1).
//!
//! The Casimir force and energy are spectral integrals over the cavity
//! functions:
//!
//! ```text
//! F_c = ∫_0^∞ (dω/2π) ω (1 - g[ω])          force (vacuum)
//! E_c = ∫_0^∞ (dω/2π) (-δ[ω])               energy, phase-shift form
//! E_c = ∫_0^∞ (dω/2π) ω τ[ω]                energy, time-delay form
//! ```
//!
//! and dE_c = F_c dq ties the force to either energy form. At
//! temperature T the spectral weight ω picks up the Planck occupation,
//! ω → 2ω(½ + n̄(ω)); the delay form is printed with the same
//! substitution, and the phase form applies it too (flagged: its
//! low-frequency thermal weight is ill-conditioned for cavities that
//! reflect perfectly at DC).
//!
//! Quasistatic motion adds the stiffness κ = -∂F_c/∂q and the inertial
//! mass correction of the cavity, μ = -2 F_c q, to be compared with the
//! stressed-rigid-body relation μ = E_c - F_c q: the difference is the
//! energy stored in reflection delays on the mirrors themselves, which
//! vanishes in the perfect-mirror limit where E_c = -F_c q.

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cavity::{Cavity, CavityError};
use crate::diagnostics::{Diagnostic, DiagnosticCode};
use crate::mirrors::MirrorError;
use crate::numdiff;
use crate::quadrature::{
    integrate_adaptive, integrate_adaptive_with_markers, integrate_oscillatory_tail_with_edges,
    wick_axis_value, IntegralResult, QuadratureSpec,
};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ObservableError {
    #[error("temperature must be >= 0, got {0}")]
    NegativeTemperature(f64),
    #[error("Planck occupation diverges at zero frequency for T > 0")]
    ZeroFrequencyOccupation,
    #[error("model unsupported on the imaginary axis: {0}")]
    UnsupportedModel(String),
    #[error(transparent)]
    Cavity(#[from] CavityError),
}

/// Temperature of the field state; T = 0 is vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalState {
    pub temperature: f64,
}

impl ThermalState {
    pub fn vacuum() -> Self {
        ThermalState { temperature: 0.0 }
    }

    pub fn new(temperature: f64) -> Result<Self, ObservableError> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(ObservableError::NegativeTemperature(temperature));
        }
        Ok(ThermalState { temperature })
    }

    pub fn is_vacuum(&self) -> bool {
        self.temperature == 0.0
    }
}

/// Mean photon number n̄ = 1/(e^{ω/T} - 1); zero in vacuum.
pub fn planck_occupation(omega: f64, thermal: &ThermalState) -> Result<f64, ObservableError> {
    if thermal.is_vacuum() {
        return Ok(0.0);
    }
    if omega <= 0.0 {
        return Err(ObservableError::ZeroFrequencyOccupation);
    }
    Ok(1.0 / f64::exp_m1(omega / thermal.temperature))
}

/// Spectral flux weight: ω in vacuum, 2ω(½ + n̄) = ω + 2ω n̄ thermally.
/// Finite at ω = 0 (→ 2T) thanks to ω n̄ = T·x/(eˣ-1), x = ω/T.
fn flux_weight(omega: f64, thermal: &ThermalState) -> f64 {
    if thermal.is_vacuum() {
        return omega;
    }
    let t = thermal.temperature;
    let x = omega / t;
    let omega_nbar = if x > 700.0 { 0.0 } else { t * x / f64::exp_m1(x) };
    omega + 2.0 * omega_nbar
}

/// Mode-count weight: 1 in vacuum, 1 + 2n̄ thermally. Diverges like
/// 2T/ω toward zero frequency.
fn count_weight(omega: f64, thermal: &ThermalState) -> f64 {
    if thermal.is_vacuum() {
        return 1.0;
    }
    let x = omega / thermal.temperature;
    if x > 700.0 {
        1.0
    } else {
        1.0 + 2.0 / f64::exp_m1(x)
    }
}

/// Extra breakpoints resolving the Planck knee around ω ~ T.
fn thermal_markers(thermal: &ThermalState, hi: f64) -> Vec<f64> {
    if thermal.is_vacuum() {
        return Vec::new();
    }
    let t = thermal.temperature;
    [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
        .iter()
        .map(|s| s * t)
        .filter(|w| *w < hi)
        .collect()
}

/// Evaluates a spectral integrand built from cavity functions,
/// converting exact on-resonance poles (measure zero) into diagnostics
/// and a zero sample.
struct PoleGuard<'c> {
    cavity: &'c Cavity,
    poles: RefCell<Vec<f64>>,
}

impl<'c> PoleGuard<'c> {
    fn new(cavity: &'c Cavity) -> Self {
        PoleGuard {
            cavity,
            poles: RefCell::new(Vec::new()),
        }
    }

    fn eval(&self, omega: f64, f: impl Fn(&Cavity, f64) -> Result<f64, CavityError>) -> f64 {
        match f(self.cavity, omega) {
            Ok(v) => v,
            Err(CavityError::PoleAtResonance { omega }) => {
                self.poles.borrow_mut().push(omega);
                0.0
            }
            Err(_) => f64::NAN,
        }
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        self.poles
            .borrow()
            .iter()
            .map(|w| {
                Diagnostic::warning(
                    DiagnosticCode::PoleAtResonance,
                    "unit loop reflectivity on resonance; point excluded from the integral"
                        .to_string(),
                )
                .at_omega(*w)
            })
            .collect()
    }
}

/// Shared driver for the semi-infinite spectral integrals: adaptive
/// resonance-aware subdivision up to the transparency crossover, then
/// oscillatory-tail acceleration (or truncation at Λ when a cutoff is
/// set, reported as such).
fn spectral_integral<F>(
    cavity: &Cavity,
    thermal: &ThermalState,
    spec: &QuadratureSpec,
    integrand: F,
) -> IntegralResult
where
    F: Fn(f64) -> f64,
{
    let crossover = cavity.crossover_frequency();
    let (body_hi, truncated) = match spec.effective_cutoff() {
        Some(lambda) if lambda <= crossover => (lambda, true),
        _ => (crossover, false),
    };

    if truncated {
        let mut markers = cavity.phase_breakpoints(0.0, body_hi, spec.segmentation);
        markers.extend(thermal_markers(thermal, body_hi));
        let mut result = integrate_adaptive_with_markers(&integrand, 0.0, body_hi, &markers, spec);
        result.diagnostics.push(Diagnostic::warning(
            DiagnosticCode::TruncatedAtCutoff,
            format!(
                "integral truncated at the ultraviolet cutoff {:.6e}",
                body_hi
            ),
        ));
        return result.scaled(1.0 / (2.0 * PI));
    }

    // Tail segment edges must sit exactly on multiples of π of the
    // round-trip phase (the resonance/antiresonance grid): there the
    // constant part of the loop oscillation and the second-harmonic
    // drift both integrate to zero over each segment, leaving a small,
    // cleanly alternating series. An arbitrary phase offset would leave
    // a same-sign second-harmonic residue that acceleration cannot
    // remove. The body absorbs the partial cell up to the first edge.
    let theta_start = cavity.round_trip_phase(body_hi);
    let k0 = (theta_start / PI).floor() + 1.0;
    let solve_crossing = |k: f64, guess: f64| {
        let target = k * PI;
        let mut w = guess;
        for _ in 0..6 {
            w -= (cavity.round_trip_phase(w) - target) / cavity.phase_rate(w);
        }
        w
    };
    let first_edge = solve_crossing(
        k0,
        body_hi + (k0 * PI - theta_start) / cavity.phase_rate(body_hi),
    );

    let mut markers = cavity.phase_breakpoints(0.0, body_hi, spec.segmentation);
    markers.extend(thermal_markers(thermal, body_hi));
    markers.push(body_hi);
    // tolerances apply to the final (1/2π)-scaled value
    let body_spec = QuadratureSpec {
        abs_tol: spec.abs_tol * 2.0 * PI,
        ..spec.clone()
    };
    let mut result = integrate_adaptive_with_markers(
        &integrand,
        0.0,
        first_edge.max(body_hi),
        &markers,
        &body_spec,
    );

    let mut k = 0u64;
    let mut prev = first_edge;
    let next_edge = move || {
        if k == 0 {
            k = 1;
            return first_edge;
        }
        let guess = prev + PI / cavity.phase_rate(prev);
        let w = solve_crossing(k0 + k as f64, guess);
        k += 1;
        prev = w;
        w
    };
    // the tail value is a sliver of the total; its stopping test must
    // target the overall tolerance, not a fraction of its own value
    let tail_spec = QuadratureSpec {
        abs_tol: (spec.abs_tol * 2.0 * PI)
            .max(0.3 * spec.rel_tol * result.value.abs()),
        ..spec.clone()
    };
    let tail = integrate_oscillatory_tail_with_edges(&integrand, next_edge, &tail_spec);
    result = result.combine(tail);
    result.scaled(1.0 / (2.0 * PI))
}

/// Casimir force F_c = ∫ (dω/2π) w(ω) (1 - g[ω]) with w the flux weight.
pub fn casimir_force(
    cavity: &Cavity,
    thermal: &ThermalState,
    spec: &QuadratureSpec,
) -> IntegralResult {
    let guard = PoleGuard::new(cavity);
    let integrand =
        |w: f64| flux_weight(w, thermal) * guard.eval(w, |c, w| Ok(1.0 - c.airy(w)?));
    let mut result = spectral_integral(cavity, thermal, spec, integrand);
    result.diagnostics.extend(guard.diagnostics());
    result
}

/// Casimir energy in the phase-shift form, E_c = ∫ (dω/2π) w(ω) (-δ[ω])
/// with w the mode-count weight.
pub fn casimir_energy_phase(
    cavity: &Cavity,
    thermal: &ThermalState,
    spec: &QuadratureSpec,
) -> IntegralResult {
    let guard = PoleGuard::new(cavity);
    let integrand =
        |w: f64| count_weight(w, thermal) * guard.eval(w, |c, w| Ok(-c.phase_shift(w)?));
    let mut result = spectral_integral(cavity, thermal, spec, integrand);
    result.diagnostics.extend(guard.diagnostics());
    if !thermal.is_vacuum() {
        let dc_loop = cavity.loop_polar(0.0);
        if dc_loop.one_minus_rho < 1e-6 {
            result.diagnostics.push(Diagnostic::warning(
                DiagnosticCode::ThermalPhaseFormIllConditioned,
                "thermal weight (1 + 2n̄)(-δ) diverges toward ω = 0 for unit DC reflection; \
                 prefer the force or time-delay forms at T > 0"
                    .to_string(),
            ));
        }
    }
    result
}

/// Casimir energy in the time-delay form, E_c = ∫ (dω/2π) w(ω) τ[ω]
/// with w the flux weight.
pub fn casimir_energy_delay(
    cavity: &Cavity,
    thermal: &ThermalState,
    spec: &QuadratureSpec,
) -> IntegralResult {
    let guard = PoleGuard::new(cavity);
    let integrand =
        |w: f64| flux_weight(w, thermal) * guard.eval(w, |c, w| c.time_delay_analytic(w));
    let mut result = spectral_integral(cavity, thermal, spec, integrand);
    result.diagnostics.extend(guard.diagnostics());
    result
}

/// Vacuum Casimir energy by contour rotation onto the imaginary
/// frequency axis; the independent cross-check of the real-axis routes.
/// Requires mirrors with an analytic continuation (point scatterers).
pub fn casimir_energy_wick(
    cavity: &Cavity,
    spec: &QuadratureSpec,
) -> Result<IntegralResult, ObservableError> {
    let (m1, m2) = (&cavity.mirror1, &cavity.mirror2);
    // probe once so unsupported models fail up front
    for m in [m1, m2] {
        m.reflect_imaginary_axis(0.0)
            .map_err(|e| match e {
                MirrorError::NotAnalytic(msg) => ObservableError::UnsupportedModel(msg),
                other => ObservableError::UnsupportedModel(other.to_string()),
            })?;
    }
    let loop_amplitude = |xi: f64| {
        m1.reflect_imaginary_axis(xi).expect("probed analytic")
            * m2.reflect_imaginary_axis(xi).expect("probed analytic")
    };
    Ok(wick_axis_value(loop_amplitude, cavity.q, spec))
}

/// Relative difference |a - b| / max(|a|, |b|).
fn relative_residual(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Pairwise relative differences between the three energy routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouteResiduals {
    pub phase_delay: f64,
    pub phase_force: f64,
    pub delay_force: f64,
}

/// The Casimir energy by all three routes, with their cross-residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub phase_repr: IntegralResult,
    pub delay_repr: IntegralResult,
    /// E(q_ref) by the phase route plus ∫ F_c dq' from q_ref to q. The
    /// reference seed is needed because E(q_ref = 50/min Ω) is still a
    /// few percent of E(q); what the route tests is dE_c = F_c dq.
    pub force_route: IntegralResult,
    pub reference_length: f64,
    pub residuals: RouteResiduals,
}

/// Reference length for the force route: far enough out that the cavity
/// coupling is weak, close enough to keep the force integrable cheaply.
fn force_route_reference(cavity: &Cavity) -> f64 {
    50.0 / cavity
        .mirror1
        .frequency_scale()
        .min(cavity.mirror2.frequency_scale())
}

/// Energy difference ∫_{q_ref}^{q} F_c dq', integrated in log-length.
fn force_energy_difference(
    cavity: &Cavity,
    thermal: &ThermalState,
    spec: &QuadratureSpec,
    q_ref: f64,
) -> IntegralResult {
    let q = cavity.q;
    if q == q_ref {
        return IntegralResult::new(0.0, 0.0, 0);
    }
    let force_spec = spec.clone().with_rel_tol((spec.rel_tol * 0.1).max(1e-12));
    let inner_diags: RefCell<Vec<Diagnostic>> = RefCell::new(Vec::new());
    let integrand = |u: f64| {
        let q_prime = u.exp();
        let shifted = Cavity {
            mirror1: cavity.mirror1.clone(),
            mirror2: cavity.mirror2.clone(),
            q: q_prime,
        };
        let f = casimir_force(&shifted, thermal, &force_spec);
        inner_diags.borrow_mut().extend(f.diagnostics);
        f.value * q_prime
    };
    let (lo, hi, sign) = if q < q_ref {
        (q.ln(), q_ref.ln(), -1.0)
    } else {
        (q_ref.ln(), q.ln(), 1.0)
    };
    let outer_spec = QuadratureSpec {
        rel_tol: (spec.rel_tol * 10.0).min(1e-6),
        max_segments: 200,
        ..spec.clone()
    };
    let mut result = integrate_adaptive(integrand, lo, hi, &outer_spec).scaled(sign);
    let mut seen = Vec::new();
    for d in inner_diags.into_inner() {
        if !seen.contains(&d.code) {
            seen.push(d.code);
            result.diagnostics.push(d);
        }
    }
    result
}

/// Computes the energy by the phase-shift, time-delay and force-
/// integration routes and their pairwise residuals.
pub fn energy_breakdown(
    cavity: &Cavity,
    thermal: &ThermalState,
    spec: &QuadratureSpec,
) -> EnergyBreakdown {
    let phase_repr = casimir_energy_phase(cavity, thermal, spec);
    let delay_repr = casimir_energy_delay(cavity, thermal, spec);

    let q_ref = force_route_reference(cavity);
    let reference_cavity = Cavity {
        mirror1: cavity.mirror1.clone(),
        mirror2: cavity.mirror2.clone(),
        q: q_ref,
    };
    let seed = casimir_energy_phase(&reference_cavity, thermal, spec);
    let delta = force_energy_difference(cavity, thermal, spec, q_ref);
    let force_route = seed.combine(delta);

    let residuals = RouteResiduals {
        phase_delay: relative_residual(phase_repr.value, delay_repr.value),
        phase_force: relative_residual(phase_repr.value, force_route.value),
        delay_force: relative_residual(delay_repr.value, force_route.value),
    };
    EnergyBreakdown {
        phase_repr,
        delay_repr,
        force_route,
        reference_length: q_ref,
        residuals,
    }
}

/// Stiffness κ = -∂F_c/∂q by Richardson-refined central differences of
/// the force, starting from length step `h`.
pub fn stiffness(
    cavity: &Cavity,
    thermal: &ThermalState,
    spec: &QuadratureSpec,
    h: f64,
) -> IntegralResult {
    debug_assert!(h > 0.0 && h < cavity.q);
    let diags: RefCell<Vec<Diagnostic>> = RefCell::new(Vec::new());
    let segs: RefCell<usize> = RefCell::new(0);
    let force_at = |q: f64| {
        let shifted = Cavity {
            mirror1: cavity.mirror1.clone(),
            mirror2: cavity.mirror2.clone(),
            q,
        };
        let f = casimir_force(&shifted, thermal, spec);
        *segs.borrow_mut() += f.segments_used;
        diags.borrow_mut().extend(f.diagnostics);
        f.value
    };
    let quotient = |step: f64| -(force_at(cavity.q + step) - force_at(cavity.q - step)) / (2.0 * step);
    let est = numdiff::refine(quotient, h, 0.0);
    let mut diagnostics = Vec::new();
    if !est.converged {
        diagnostics.push(Diagnostic::warning(
            DiagnosticCode::DerivativeNotConverged,
            format!(
                "stiffness refinement settled at error estimate {:.3e}",
                est.error
            ),
        ));
    }
    let mut seen = Vec::new();
    for d in diags.into_inner() {
        if !seen.contains(&d.code) {
            seen.push(d.code);
            diagnostics.push(d);
        }
    }
    IntegralResult::new(est.value, est.error, segs.into_inner()).with_diagnostics(diagnostics)
}

/// Quasistatic summary of a vacuum cavity: stiffness, inertial mass
/// correction and the stressed-body comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasistaticSummary {
    /// κ = -∂F_c/∂q.
    pub kappa: f64,
    pub kappa_error: f64,
    /// Cavity mass correction μ = -2 F_c q (c = 1).
    pub mu: f64,
    /// Einstein stressed-body mass E_c - F_c q.
    pub einstein_mass: f64,
    /// einstein_mass - mu = E_c + F_c q: the reflection-delay energy
    /// stored on the mirrors, absent from μ; vanishes for perfect
    /// mirrors where E_c = -F_c q.
    pub mirror_stored_energy: f64,
    pub force: IntegralResult,
    pub energy: IntegralResult,
}

/// Computes μ = -2 F_c q, the Einstein mass E_c - F_c q, and the
/// stiffness, all in vacuum.
pub fn mass_correction(cavity: &Cavity, spec: &QuadratureSpec) -> QuasistaticSummary {
    let vacuum = ThermalState::vacuum();
    let force = casimir_force(cavity, &vacuum, spec);
    let energy = casimir_energy_phase(cavity, &vacuum, spec);
    let kappa = stiffness(cavity, &vacuum, spec, 0.05 * cavity.q);
    let mu = -2.0 * force.value * cavity.q;
    let einstein_mass = energy.value - force.value * cavity.q;
    QuasistaticSummary {
        kappa: kappa.value,
        kappa_error: kappa.error_estimate,
        mu,
        einstein_mass,
        mirror_stored_energy: einstein_mass - mu,
        force,
        energy,
    }
}

/// Zeta-regularized perfect-mirror mode sum, -π/(24 q): the analytic
/// anchor for the strong-reflectivity limit.
///
/// `n_terms` sizes an internal Abel-summation consistency check: the
/// regularized sum Σ n e^{-αn} - 1/α², Richardson-extrapolated in α,
/// must reproduce ζ(-1) = -1/12.
pub fn perfect_mirror_oracle(q: f64, n_terms: usize) -> f64 {
    debug_assert!(q > 0.0);
    let n = n_terms.max(64);
    // the slower α/2 sum must still truncate well:
    // tail ≈ (n²/c) e^{-c} with c = αn/2, so keep c ≳ 2 ln n + 10
    let alpha = (4.0 * (n as f64).ln() + 20.0) / n as f64;
    let abel = |a: f64| -> f64 {
        let mut sum = 0.0;
        // summed smallest-first for accuracy
        for k in (1..=n).rev() {
            sum += k as f64 * (-a * k as f64).exp();
        }
        sum - 1.0 / (a * a)
    };
    let s1 = abel(alpha);
    let s2 = abel(0.5 * alpha);
    let extrapolated = (4.0 * s2 - s1) / 3.0;
    let tol = 1e-3 + alpha.powi(4);
    assert!(
        (extrapolated + 1.0 / 12.0).abs() < tol,
        "Abel-summation check failed: {extrapolated} vs -1/12"
    );
    -PI / (24.0 * q)
}
