//! Spectral functions of a two-mirror cavity.
//!
//! With loop amplitude r[ω] = r₁[ω]·r₂[ω] = ρ e^{iφ} and round-trip
//! phase θ = 2ωq + φ (units ħ = c = 1):
//!
//! ```text
//! g[ω] = (1 - |r|²) / |1 - r e^{2iωq}|²          energy enhancement
//! δ[ω] = -arg(1 - r e^{2iωq})                    cavity phase shift
//! τ[ω] = ∂_ω δ = -(1 - g)(q + ½ ∂_ω φ)
//!        + g sin(2ωq + φ) ∂_ω ρ / (1 - ρ²)       Wigner time delay
//! ```
//!
//! g peaks at the optical resonances θ = 2πn; δ stays on the principal
//! branch for ρ < 1 because Re(1 - r e^{2iωq}) > 0 there.
//!
//! Near a resonance with ρ → 1 both numerator and denominator of g are
//! differences of nearly equal quantities, so everything here is built
//! on a polar form that carries 1 - ρ exactly and keeps the round-trip
//! phase reduced modulo the mirrors' DC reflection signs.

use num_complex::Complex64;
use serde::Deserialize;
use std::f64::consts::PI;

use crate::diagnostics::{Diagnostic, DiagnosticCode};
use crate::mirrors::{MirrorError, MirrorModel};
use crate::numdiff;
use crate::quadrature::Segmentation;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum CavityError {
    #[error("mirror separation must be positive, got {0}")]
    InvalidSeparation(f64),
    #[error(transparent)]
    Mirror(#[from] MirrorError),
    #[error("unit loop reflectivity exactly on resonance at omega = {omega}")]
    PoleAtResonance { omega: f64 },
    #[error("numeric time delay did not converge at omega = {omega}: best estimate {estimate} +/- {error}")]
    DelayNotConverged {
        omega: f64,
        estimate: f64,
        error: f64,
    },
}

/// Two mirrors at separation `q`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cavity {
    #[serde(rename = "m1")]
    pub mirror1: MirrorModel,
    #[serde(rename = "m2")]
    pub mirror2: MirrorModel,
    pub q: f64,
}

/// One row of a spectral sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSample {
    pub omega: f64,
    pub g: f64,
    pub delta: f64,
    pub tau: f64,
}

/// Resonance positions plus anything worth knowing about the search.
#[derive(Debug, Clone)]
pub struct ResonanceScan {
    pub frequencies: Vec<f64>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Loop amplitude in polar form, ready for cancellation-free cavity
/// algebra. The round-trip phase is θ = θ_reduced (+ π if `negate`),
/// i.e. r e^{2iωq} = sign · ρ e^{iθ_reduced} with sign = ±1.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LoopPolar {
    pub rho: f64,
    pub one_minus_rho: f64,
    pub theta_reduced: f64,
    pub negate: bool,
    pub dphi: f64,
    pub drho: f64,
}

impl LoopPolar {
    fn sin_theta(&self) -> f64 {
        let s = self.theta_reduced.sin();
        if self.negate {
            -s
        } else {
            s
        }
    }

    /// 1 - ρ cos θ without cancellation.
    fn one_minus_rho_cos_theta(&self) -> f64 {
        let half = 0.5 * self.theta_reduced;
        if self.negate {
            self.one_minus_rho + 2.0 * self.rho * half.cos().powi(2)
        } else {
            self.one_minus_rho + 2.0 * self.rho * half.sin().powi(2)
        }
    }

    /// |1 - ρ e^{iθ}|² = (1-ρ)² + 2ρ(1 - cos θ) without cancellation.
    fn denominator(&self) -> f64 {
        let half = 0.5 * self.theta_reduced;
        let one_minus_cos = if self.negate {
            2.0 * half.cos().powi(2)
        } else {
            2.0 * half.sin().powi(2)
        };
        self.one_minus_rho * self.one_minus_rho + 2.0 * self.rho * one_minus_cos
    }

    /// 1 - ρ² without cancellation.
    fn one_minus_rho_sq(&self) -> f64 {
        self.one_minus_rho * (1.0 + self.rho)
    }
}

impl Cavity {
    pub fn new(mirror1: MirrorModel, mirror2: MirrorModel, q: f64) -> Result<Self, CavityError> {
        let cavity = Cavity { mirror1, mirror2, q };
        cavity.validate()?;
        Ok(cavity)
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        if !(self.q.is_finite() && self.q > 0.0) {
            return Err(CavityError::InvalidSeparation(self.q));
        }
        self.mirror1.validate()?;
        self.mirror2.validate()?;
        Ok(())
    }

    /// Symmetric point-scatterer cavity, the workhorse configuration.
    pub fn symmetric_point(omega_c: f64, q: f64) -> Result<Self, CavityError> {
        let m = MirrorModel::point(omega_c)?;
        Cavity::new(m.clone(), m, q)
    }

    /// r[ω] = r₁[ω]·r₂[ω].
    pub fn loop_amplitude(&self, omega: f64) -> Result<Complex64, CavityError> {
        Ok(self.mirror1.reflect(omega)? * self.mirror2.reflect(omega)?)
    }

    pub(crate) fn loop_polar(&self, omega: f64) -> LoopPolar {
        let p1 = self.mirror1.polar_with_derivatives(omega);
        let p2 = self.mirror2.polar_with_derivatives(omega);
        let rho = p1.rho * p2.rho;
        let one_minus_rho = if rho == 0.0 {
            1.0 // exact transparency, g ≡ 1 to the last bit
        } else {
            p1.one_minus_rho + p1.rho * p2.one_minus_rho
        };
        LoopPolar {
            rho,
            one_minus_rho,
            theta_reduced: 2.0 * omega * self.q + p1.phi_reduced + p2.phi_reduced,
            negate: p1.pi_offset ^ p2.pi_offset,
            dphi: p1.dphi + p2.dphi,
            drho: p1.drho * p2.rho + p1.rho * p2.drho,
        }
    }

    /// Continuous round-trip phase θ = 2ωq + φ (continuous for closed-form
    /// mirror models; tabulated models are continuous in their
    /// constant-phase extrapolation zone, which is where tails live).
    pub(crate) fn round_trip_phase(&self, omega: f64) -> f64 {
        let p = self.loop_polar(omega);
        p.theta_reduced + if p.negate { PI } else { 0.0 }
    }

    /// dθ/dω = 2q + ∂_ω φ.
    pub(crate) fn phase_rate(&self, omega: f64) -> f64 {
        2.0 * self.q + self.loop_polar(omega).dphi
    }

    /// Smallest frequency scale in the problem; the ω → 0 special case
    /// kicks in at 1e-8 of this.
    fn smallest_scale(&self) -> f64 {
        self.mirror1
            .frequency_scale()
            .min(self.mirror2.frequency_scale())
            .min(1.0 / self.q)
    }

    /// Frequency above which the resonant region gives way to the
    /// oscillatory tail (both mirrors essentially transparent).
    pub fn crossover_frequency(&self) -> f64 {
        20.0 * self
            .mirror1
            .frequency_scale()
            .max(self.mirror2.frequency_scale())
            .max(PI / self.q)
    }

    fn both_point(&self) -> Option<(f64, f64)> {
        match (&self.mirror1, &self.mirror2) {
            (MirrorModel::Point { omega_c: o1 }, MirrorModel::Point { omega_c: o2 }) => {
                Some((*o1, *o2))
            }
            _ => None,
        }
    }

    /// Series coefficients of 1 - r e^{2iωq} = -iωA + ω²(B + A²/2) + O(ω³)
    /// for the double point-scatterer cavity, whose loop amplitude
    /// reaches +1 at ω = 0.
    fn dc_series(&self, o1: f64, o2: f64) -> (f64, f64) {
        let a = 1.0 / o1 + 1.0 / o2 + 2.0 * self.q;
        let b = 0.5 * (1.0 / (o1 * o1) + 1.0 / (o2 * o2));
        (a, b)
    }

    /// Spectral enhancement factor g[ω].
    pub fn airy(&self, omega: f64) -> Result<f64, CavityError> {
        if omega < 0.0 || !omega.is_finite() {
            return Err(MirrorError::NegativeFrequency(omega).into());
        }
        if omega < 1e-8 * self.smallest_scale() {
            if let Some((o1, o2)) = self.both_point() {
                // removable 0/0 at DC: g → (1/Ω₁² + 1/Ω₂²)/A²
                let (a, b) = self.dc_series(o1, o2);
                return Ok(2.0 * b / (a * a));
            }
        }
        let p = self.loop_polar(omega);
        let num = p.one_minus_rho_sq();
        let denom = p.denominator();
        if denom == 0.0 || (num == 0.0 && denom < 1e-280) {
            return Err(CavityError::PoleAtResonance { omega });
        }
        Ok(num / denom)
    }

    /// Cavity phase shift δ[ω] = -arg(1 - r e^{2iωq}), principal branch
    /// (safe for ρ < 1).
    pub fn phase_shift(&self, omega: f64) -> Result<f64, CavityError> {
        if omega < 0.0 || !omega.is_finite() {
            return Err(MirrorError::NegativeFrequency(omega).into());
        }
        if omega < 1e-8 * self.smallest_scale() {
            if let Some((o1, o2)) = self.both_point() {
                let (a, b) = self.dc_series(o1, o2);
                return Ok(PI / 2.0 - omega * (b + 0.5 * a * a) / a);
            }
        }
        let p = self.loop_polar(omega);
        let re = p.one_minus_rho_cos_theta();
        let im = -p.rho * p.sin_theta();
        if re == 0.0 && im == 0.0 {
            return Err(CavityError::PoleAtResonance { omega });
        }
        Ok(-im.atan2(re))
    }

    /// Wigner time delay from the closed-form decomposition.
    pub fn time_delay_analytic(&self, omega: f64) -> Result<f64, CavityError> {
        if omega < 0.0 || !omega.is_finite() {
            return Err(MirrorError::NegativeFrequency(omega).into());
        }
        if omega < 1e-8 * self.smallest_scale() {
            if let Some((o1, o2)) = self.both_point() {
                let (a, b) = self.dc_series(o1, o2);
                return Ok(-(b + 0.5 * a * a) / a);
            }
        }
        let g = self.airy(omega)?;
        let p = self.loop_polar(omega);
        let one_minus_rho_sq = p.one_minus_rho_sq();
        if one_minus_rho_sq == 0.0 {
            return Err(CavityError::PoleAtResonance { omega });
        }
        Ok(-(1.0 - g) * (self.q + 0.5 * p.dphi) + g * p.sin_theta() * p.drho / one_minus_rho_sq)
    }

    /// Wigner time delay as a Richardson-refined central difference of
    /// the phase shift, starting from step `h`.
    pub fn time_delay_numeric(&self, omega: f64, h: f64) -> Result<f64, CavityError> {
        debug_assert!(omega > 0.0 && h > 0.0 && h < omega);
        let quotient = |step: f64| {
            let d_plus = self.phase_shift(omega + step).unwrap_or(f64::NAN);
            let d_minus = self.phase_shift(omega - step).unwrap_or(f64::NAN);
            (d_plus - d_minus) / (2.0 * step)
        };
        let est = numdiff::refine(quotient, h, 0.0);
        let tol = 1e-6 * est.value.abs().max(1.0);
        if !est.value.is_finite() || est.error > tol {
            return Err(CavityError::DelayNotConverged {
                omega,
                estimate: est.value,
                error: est.error,
            });
        }
        Ok(est.value)
    }

    /// Step size from which the numeric delay refinement should start:
    /// a small fraction of the local resonance width so the first
    /// quotient already sits in the convergent regime.
    pub fn delay_step_hint(&self, omega: f64) -> f64 {
        let p = self.loop_polar(omega);
        let theta_rate = (2.0 * self.q + p.dphi).abs().max(1e-3 / omega.max(1e-300));
        let width = p.one_minus_rho.max(1e-9) / theta_rate;
        (0.05 * width).min(0.25 * omega)
    }

    /// g, δ and τ at one frequency.
    pub fn sample(&self, omega: f64) -> Result<SpectralSample, CavityError> {
        Ok(SpectralSample {
            omega,
            g: self.airy(omega)?,
            delta: self.phase_shift(omega)?,
            tau: self.time_delay_analytic(omega)?,
        })
    }

    /// True when the loop amplitude is negligible across a probe grid
    /// (transparent mirrors: g ≡ 1).
    fn effectively_transparent(&self, lo: f64, hi: f64) -> bool {
        (0..=32).all(|k| {
            let w = lo + (hi - lo) * k as f64 / 32.0;
            self.loop_polar(w.max(0.0)).rho < 1e-14
        })
    }

    /// Local ω step that advances the round-trip phase by about π/8.
    fn phase_step(&self, omega: f64) -> f64 {
        let rate = (2.0 * self.q + self.loop_polar(omega).dphi.abs()).max(0.1 * self.q);
        (PI / 8.0) / rate
    }

    /// Walks [lo, hi] and reports each crossing of θ through a multiple
    /// of `spacing` (π for half-FSR boundaries, 2π for resonances) as
    /// (ω at crossing, level index, local dθ/dω, loop ρ there). Stops
    /// early once `visit` returns false.
    fn walk_phase_crossings(
        &self,
        lo: f64,
        hi: f64,
        spacing: f64,
        mut visit: impl FnMut(f64, i64, f64, f64) -> bool,
    ) {
        let mut w_prev = lo.max(0.0);
        let mut p_prev = self.loop_polar(w_prev);
        let mut t_prev = p_prev.theta_reduced + if p_prev.negate { PI } else { 0.0 };
        loop {
            let w = (w_prev + self.phase_step(w_prev)).min(hi);
            let p = self.loop_polar(w);
            let t = p.theta_reduced + if p.negate { PI } else { 0.0 };
            if t != t_prev {
                let k_prev = (t_prev / spacing).floor() as i64;
                let k = (t / spacing).floor() as i64;
                if k != k_prev {
                    let (k_lo, k_hi) = if k > k_prev { (k_prev, k) } else { (k, k_prev) };
                    let rate = (t - t_prev) / (w - w_prev);
                    for level in (k_lo + 1)..=k_hi {
                        let target = level as f64 * spacing;
                        let w_cross = w_prev + (target - t_prev) / rate;
                        if w_cross > lo && w_cross < hi && !visit(w_cross, level, rate, p.rho) {
                            return;
                        }
                    }
                }
            }
            if w >= hi {
                return;
            }
            w_prev = w;
            p_prev = p;
            t_prev = p_prev.theta_reduced + if p_prev.negate { PI } else { 0.0 };
        }
    }

    /// Breakpoints for spectral quadrature on [lo, hi]: boundaries on the
    /// half-FSR phase grid (θ = kπ), plus brackets hugging each resonance
    /// peak under the resonance-aware policy.
    pub(crate) fn phase_breakpoints(&self, lo: f64, hi: f64, policy: Segmentation) -> Vec<f64> {
        if self.effectively_transparent(lo, hi) {
            return Vec::new();
        }
        let mut breaks = Vec::new();
        self.walk_phase_crossings(lo, hi, PI, |w, level, rate, rho| {
            breaks.push(w);
            if policy == Segmentation::ResonanceAware && level % 2 == 0 && rho > 0.9 {
                // resonance peak: half-width (1-ρ) in phase
                let width = (1.0 - rho).max(1e-12) / rate.abs();
                for s in [1.0, 3.0, 10.0, 30.0] {
                    breaks.push(w - s * width);
                    breaks.push(w + s * width);
                }
            }
            breaks.len() < 4_000_000
        });
        breaks.retain(|w| w.is_finite() && *w > lo && *w < hi);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        breaks
    }

    /// Locates the first `n_max` local maxima of g[ω] above ω = 0 by
    /// bracketing resonance phase crossings (θ through multiples of 2π)
    /// and refining each with a golden-section search.
    pub fn resonances(&self, n_max: usize) -> ResonanceScan {
        debug_assert!(n_max >= 1);
        let lo = 1e-12 * self.smallest_scale();
        let hi = self.crossover_frequency();
        let mut frequencies = Vec::new();
        let mut diagnostics = Vec::new();

        if self.effectively_transparent(lo, hi) {
            diagnostics.push(Diagnostic::warning(
                DiagnosticCode::FewerThanRequested,
                "transparent mirrors: g is identically 1, no resonances".to_string(),
            ));
            return ResonanceScan {
                frequencies,
                diagnostics,
            };
        }

        let g_of = |w: f64| self.airy(w).unwrap_or(f64::NEG_INFINITY);
        self.walk_phase_crossings(lo, hi, 2.0 * PI, |w_cross, _level, rate, _rho| {
            // bracket one quarter FSR around the crossing and refine
            let half_span = (PI / 2.0) / rate.abs();
            let (mut a, mut b) = ((w_cross - half_span).max(lo), w_cross + half_span);
            const INVPHI: f64 = 0.618_033_988_749_894_8;
            let mut x1 = b - INVPHI * (b - a);
            let mut x2 = a + INVPHI * (b - a);
            let (mut f1, mut f2) = (g_of(x1), g_of(x2));
            for _ in 0..80 {
                if f1 < f2 {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + INVPHI * (b - a);
                    f2 = g_of(x2);
                } else {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - INVPHI * (b - a);
                    f1 = g_of(x1);
                }
            }
            let peak = 0.5 * (a + b);
            // genuine enhancement only; plateaus of g ≈ 1 do not count
            if g_of(peak) > 1.0 + 1e-12 && peak > 0.0 {
                frequencies.push(peak);
            }
            frequencies.len() < n_max
        });

        if frequencies.len() < n_max {
            diagnostics.push(Diagnostic::warning(
                DiagnosticCode::FewerThanRequested,
                format!(
                    "found {} of {} requested maxima below the working cutoff {:.3e}",
                    frequencies.len(),
                    n_max,
                    hi
                ),
            ));
        }
        ResonanceScan {
            frequencies,
            diagnostics,
        }
    }
}
