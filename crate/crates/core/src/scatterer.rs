//! Mass statistics of a pointlike scatterer in vacuum (ħ = c = 1).
//!
//! The scatterer's mass carries a field contribution m = m_b + Ωφ(q)²
//! whose vacuum mean is the energy stored through the Lorentzian
//! reflection delay τ[ω] = Ω/(Ω² + ω²):
//!
//! ```text
//! ⟨Ωφ(q)²⟩ = ∫_0^Λ (dω/2π) ω τ[ω] = (Ω/4π) ln(1 + Λ²/Ω²)
//! ```
//!
//! The bare integral diverges logarithmically — the no-recoil scattering
//! matrix cannot hold at frequencies comparable with the scatterer mass —
//! so a finite ultraviolet cutoff Λ is mandatory here and always
//! reported. Mass fluctuations have the positive-frequency noise
//! spectrum
//!
//! ```text
//! C_mm[ω] = 2 θ(ω) ∫_0^ω (dω'/2π) ω'τ[ω'] (ω-ω')τ[ω-ω']
//! ```
//!
//! growing as ω³/(6πΩ²) below the reflection cutoff, and the same sharp
//! cutoff applied to each spectral factor makes the t = 0 variance equal
//! 2⟨Ωφ(q)²⟩² exactly at finite Λ.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate_adaptive, integrate_adaptive_with_markers, IntegralResult, QuadratureSpec};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ScattererError {
    #[error("invalid scatterer: {0}")]
    InvalidSpec(String),
    #[error(
        "the stored energy diverges as the cutoff is removed; a finite uv_cutoff is required \
         (scatterer recoil, neglected in this model, would regularize it)"
    )]
    DivergentStoredEnergy,
}

/// Pointlike scatterer: bare mass, reflection frequency Ω and the
/// mandatory ultraviolet cutoff regularizing stored-energy integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointScattererSpec {
    #[serde(default)]
    pub m_b: f64,
    pub omega_c: f64,
    pub uv_cutoff: f64,
}

impl PointScattererSpec {
    pub fn new(m_b: f64, omega_c: f64, uv_cutoff: f64) -> Result<Self, ScattererError> {
        let s = PointScattererSpec {
            m_b,
            omega_c,
            uv_cutoff,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ScattererError> {
        if !(self.m_b.is_finite() && self.m_b >= 0.0) {
            return Err(ScattererError::InvalidSpec(format!(
                "bare mass must be >= 0, got {}",
                self.m_b
            )));
        }
        if !(self.omega_c.is_finite() && self.omega_c > 0.0) {
            return Err(ScattererError::InvalidSpec(format!(
                "omega_c must be > 0, got {}",
                self.omega_c
            )));
        }
        if self.uv_cutoff.is_infinite() {
            return Err(ScattererError::DivergentStoredEnergy);
        }
        if !(self.uv_cutoff > 0.0) {
            return Err(ScattererError::InvalidSpec(format!(
                "uv_cutoff must be > 0, got {}",
                self.uv_cutoff
            )));
        }
        Ok(())
    }

    /// Lorentzian reflection delay τ[ω] = Ω/(Ω² + ω²).
    pub fn reflection_delay(&self, omega: f64) -> f64 {
        self.omega_c / (self.omega_c * self.omega_c + omega * omega)
    }

    /// Spectral factor ω τ[ω] with the sharp cutoff applied.
    fn cut_factor(&self, omega: f64) -> f64 {
        if omega > self.uv_cutoff {
            0.0
        } else {
            omega * self.reflection_delay(omega)
        }
    }
}

/// Mean stored mass under the cutoff, by closed form and by quadrature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanMassCorrection {
    /// (Ω/4π) ln(1 + Λ²/Ω²); the value of record.
    pub value: f64,
    pub quadrature: IntegralResult,
    /// Relative closed-form vs quadrature residual.
    pub residual: f64,
    pub cutoff: f64,
}

/// ⟨Ωφ(q)²⟩ under the cutoff: (1/2π)∫_0^Λ ω·Ω/(Ω²+ω²) dω, evaluated
/// both analytically and numerically with the residual reported.
pub fn mean_mass_correction(
    spec: &PointScattererSpec,
    quad: &QuadratureSpec,
) -> Result<MeanMassCorrection, ScattererError> {
    spec.validate()?;
    let omega_c = spec.omega_c;
    let lambda = spec.uv_cutoff;
    let ratio = lambda / omega_c;
    let closed = omega_c / (4.0 * PI) * (ratio * ratio).ln_1p();
    let quadrature = integrate_adaptive(
        |w| w * spec.reflection_delay(w),
        0.0,
        lambda,
        quad,
    )
    .scaled(1.0 / (2.0 * PI));
    let residual = (closed - quadrature.value).abs() / closed.abs().max(f64::MIN_POSITIVE);
    Ok(MeanMassCorrection {
        value: closed,
        quadrature,
        residual,
        cutoff: lambda,
    })
}

/// Mass noise spectrum C_mm[ω] in vacuum, without ultraviolet cutoff
/// (the convolution is bounded for fixed ω). Zero for ω ≤ 0.
pub fn mass_noise_spectrum(spec: &PointScattererSpec, omega: f64, quad: &QuadratureSpec) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    // the integrand is symmetric under ω' ↔ ω - ω': evaluate half, double
    let half = integrate_adaptive(
        |w| w * spec.reflection_delay(w) * (omega - w) * spec.reflection_delay(omega - w),
        0.0,
        0.5 * omega,
        quad,
    );
    2.0 * 2.0 * half.value / (2.0 * PI)
}

/// As [`mass_noise_spectrum`] but with the sharp cutoff Λ applied to
/// each spectral factor; support shrinks to [0, 2Λ].
fn mass_noise_spectrum_cut(spec: &PointScattererSpec, omega: f64, quad: &QuadratureSpec) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    let lo = (omega - spec.uv_cutoff).max(0.0);
    let hi = 0.5 * omega;
    if lo >= hi {
        // for ω > 2Λ both factors cannot stay under the cutoff
        return if omega > 2.0 * spec.uv_cutoff {
            0.0
        } else {
            // razor-thin remaining window around ω/2
            0.0
        };
    }
    let half = integrate_adaptive(
        |w| spec.cut_factor(w) * spec.cut_factor(omega - w),
        lo,
        hi,
        quad,
    );
    2.0 * 2.0 * half.value / (2.0 * PI)
}

/// Low-frequency law C_mm[ω] ≈ ω³/(6πΩ²) for 0 < ω ≪ Ω.
pub fn low_freq_asymptote(spec: &PointScattererSpec, omega: f64) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    omega.powi(3) / (6.0 * PI * spec.omega_c * spec.omega_c)
}

/// Both sides of the t = 0 variance identity at finite cutoff.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceT0 {
    /// ∫_0^∞ (dω/2π) C_mm[ω] under the cutoff; the value of record.
    pub value: f64,
    pub spectral_integral: IntegralResult,
    /// 2⟨Ωφ(q)²⟩², the convolution identity's right-hand side.
    pub twice_mean_squared: f64,
    pub residual: f64,
    pub cutoff: f64,
}

/// C_mm(t=0) = ⟨m²⟩ - ⟨m⟩² under the cutoff, computed as the spectral
/// integral of the cut convolution and compared against 2⟨Ωφ(q)²⟩².
/// The bare mass is non-fluctuating and drops out.
pub fn mass_variance_t0(
    spec: &PointScattererSpec,
    quad: &QuadratureSpec,
) -> Result<VarianceT0, ScattererError> {
    spec.validate()?;
    let mean = mean_mass_correction(spec, quad)?;
    let lambda = spec.uv_cutoff;
    let inner = QuadratureSpec {
        rel_tol: (quad.rel_tol * 0.1).max(1e-12),
        max_segments: quad.max_segments,
        ..quad.clone()
    };
    // the cut convolution has kinks where a factor hits the cutoff
    let markers = [0.5 * lambda, lambda, 1.5 * lambda];
    let spectral_integral = integrate_adaptive_with_markers(
        |w| mass_noise_spectrum_cut(spec, w, &inner),
        0.0,
        2.0 * lambda,
        &markers,
        quad,
    )
    .scaled(1.0 / (2.0 * PI));
    let twice_mean_squared = 2.0 * mean.value * mean.value;
    let residual = (spectral_integral.value - twice_mean_squared).abs()
        / twice_mean_squared.abs().max(f64::MIN_POSITIVE);
    Ok(VarianceT0 {
        value: spectral_integral.value,
        spectral_integral,
        twice_mean_squared,
        residual,
        cutoff: lambda,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoilStatus {
    Ok,
    Warn,
}

/// Outcome of the no-recoil validity comparison ħω_max vs the total mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoilValidity {
    pub omega_max: f64,
    /// m_b + ⟨Ωφ(q)²⟩ at the configured cutoff.
    pub total_mass: f64,
    pub ratio: f64,
    pub status: RecoilStatus,
}

/// Frequencies approaching the scatterer's mass shake the no-recoil
/// approximation behind the 2x2 scattering matrix. Warns (never blocks)
/// once ω_max reaches a tenth of the total mass.
pub fn recoil_validity(
    spec: &PointScattererSpec,
    omega_max: f64,
    quad: &QuadratureSpec,
) -> Result<RecoilValidity, ScattererError> {
    let mean = mean_mass_correction(spec, quad)?;
    let total_mass = spec.m_b + mean.value;
    let ratio = omega_max / total_mass;
    let status = if ratio < 0.1 {
        RecoilStatus::Ok
    } else {
        RecoilStatus::Warn
    };
    Ok(RecoilValidity {
        omega_max,
        total_mass,
        ratio,
        status,
    })
}

/// One spectrum row: C_mm, its low-frequency law and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumSample {
    pub omega: f64,
    pub c_mm: f64,
    pub asymptote: f64,
    pub ratio: f64,
}

/// Everything the `mass` front end reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassStatistics {
    pub mean_correction: MeanMassCorrection,
    pub spectrum: Vec<SpectrumSample>,
    pub variance_t0: VarianceT0,
    pub validity: RecoilValidity,
}

/// Default spectrum grid: 200 logarithmic points over [1e-3 Ω, 10 Ω].
pub fn default_spectrum_grid(spec: &PointScattererSpec, points: usize) -> Vec<f64> {
    let n = points.max(2);
    let (lo, hi) = (1e-3 * spec.omega_c, 10.0 * spec.omega_c);
    let log_step = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|k| lo * (k as f64 * log_step).exp()).collect()
}

/// Mean mass, noise spectrum on a grid, t = 0 variance and the recoil
/// validity flag, in one pass.
pub fn scatterer_statistics(
    spec: &PointScattererSpec,
    grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<MassStatistics, ScattererError> {
    let mean_correction = mean_mass_correction(spec, quad)?;
    let spectrum = grid
        .iter()
        .map(|&w| {
            let c_mm = mass_noise_spectrum(spec, w, quad);
            let asymptote = low_freq_asymptote(spec, w);
            SpectrumSample {
                omega: w,
                c_mm,
                asymptote,
                ratio: if asymptote > 0.0 { c_mm / asymptote } else { 0.0 },
            }
        })
        .collect();
    let variance_t0 = mass_variance_t0(spec, quad)?;
    let validity = recoil_validity(spec, spec.uv_cutoff, quad)?;
    Ok(MassStatistics {
        mean_correction,
        spectrum,
        variance_t0,
        validity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn scatterer(omega_c: f64, lambda: f64) -> PointScattererSpec {
        PointScattererSpec::new(0.0, omega_c, lambda).unwrap()
    }

    #[test]
    fn mean_mass_closed_form() {
        // Ω = 1, Λ = 10: (1/4π) ln(101)
        let m = mean_mass_correction(&scatterer(1.0, 10.0), &quad()).unwrap();
        assert_relative_eq!(m.value, 0.3672596216100546, epsilon = 1e-14);
        // closed form and quadrature agree
        assert!(m.residual < 1e-8, "residual {}", m.residual);
    }

    #[test]
    fn mean_mass_vanishes_quadratically_at_small_cutoff() {
        let omega_c = 1.0;
        let lambda = 1e-3 * omega_c;
        let m = mean_mass_correction(&scatterer(omega_c, lambda), &quad()).unwrap();
        let leading = omega_c / (4.0 * PI) * (lambda / omega_c).powi(2);
        assert_relative_eq!(m.value, leading, max_relative = 1e-6);
    }

    #[test]
    fn infinite_cutoff_is_a_divergence_error() {
        assert!(matches!(
            PointScattererSpec::new(0.0, 1.0, f64::INFINITY),
            Err(ScattererError::DivergentStoredEnergy)
        ));
    }

    #[test]
    fn spectrum_vanishes_at_non_positive_frequency() {
        let s = scatterer(1.0, 10.0);
        assert_eq!(mass_noise_spectrum(&s, 0.0, &quad()), 0.0);
        assert_eq!(mass_noise_spectrum(&s, -2.0, &quad()), 0.0);
        assert_eq!(low_freq_asymptote(&s, -1.0), 0.0);
    }

    #[test]
    fn cubic_law_at_low_frequency() {
        let s = scatterer(1.0, 10.0);
        // ω = 0.1: C ≈ ω³/(6π) = 5.305e-5 within 3%
        let c = mass_noise_spectrum(&s, 0.1, &quad());
        assert_relative_eq!(c, 5.3052e-5, max_relative = 0.03);
        // asymptote values and 1/Ω² scaling
        assert_relative_eq!(
            low_freq_asymptote(&s, 0.1),
            5.305164769729845e-5,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            low_freq_asymptote(&scatterer(2.0, 10.0), 0.1),
            5.305164769729845e-5 / 4.0,
            epsilon = 1e-12
        );
        // ratio → 1 well below Ω
        let w = 1e-2;
        let ratio = mass_noise_spectrum(&s, w, &quad()) / low_freq_asymptote(&s, w);
        assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn half_interval_symmetry_is_exact() {
        // the convolution integrand is symmetric about ω/2, so the
        // doubled half-interval equals the full-interval evaluation
        let s = scatterer(1.0, 10.0);
        let omega = 0.7;
        let full = integrate_adaptive(
            |w| w * s.reflection_delay(w) * (omega - w) * s.reflection_delay(omega - w),
            0.0,
            omega,
            &quad(),
        );
        let c = mass_noise_spectrum(&s, omega, &quad());
        assert_relative_eq!(c, 2.0 * full.value / (2.0 * PI), max_relative = 1e-10);
    }

    #[test]
    fn variance_identity_at_finite_cutoff() {
        for lambda in [3.0, 10.0] {
            let s = scatterer(1.0, lambda);
            let v = mass_variance_t0(&s, &quad()).unwrap();
            assert!(
                v.residual < 1e-4,
                "Λ = {lambda}: residual {} ({} vs {})",
                v.residual,
                v.value,
                v.twice_mean_squared
            );
        }
        // reference number at Λ = 10: 2 (0.36726)² ≈ 0.26976
        let v = mass_variance_t0(&scatterer(1.0, 10.0), &quad()).unwrap();
        assert_relative_eq!(v.value, 0.269759259330321, max_relative = 1e-4);
    }

    #[test]
    fn bare_mass_leaves_variance_unchanged() {
        let quad = quad();
        let v0 = mass_variance_t0(&scatterer(1.0, 5.0), &quad).unwrap();
        let with_bare =
            mass_variance_t0(&PointScattererSpec::new(7.0, 1.0, 5.0).unwrap(), &quad).unwrap();
        assert_eq!(v0.value.to_bits(), with_bare.value.to_bits());
    }

    #[test]
    fn variance_vanishes_with_the_cutoff() {
        let v = mass_variance_t0(&scatterer(1.0, 1e-6), &quad()).unwrap();
        assert!(v.value.abs() < 1e-20);
    }

    #[test]
    fn recoil_flags() {
        let quad = quad();
        let s = scatterer(1.0, 10.0); // ⟨Δm⟩ ≈ 0.3673
        let mass = 0.3672596216100546;
        let ok = recoil_validity(&s, 1e-3 * mass, &quad).unwrap();
        assert_eq!(ok.status, RecoilStatus::Ok);
        let threshold = recoil_validity(&s, mass, &quad).unwrap();
        assert_eq!(threshold.status, RecoilStatus::Warn);
        assert_relative_eq!(threshold.ratio, 1.0, epsilon = 1e-12);
        let deep = recoil_validity(&s, 10.0, &quad).unwrap();
        assert_eq!(deep.status, RecoilStatus::Warn);
        assert_relative_eq!(deep.ratio, 10.0 / mass, epsilon = 1e-12);
    }

    #[test]
    fn spectrum_is_nonnegative_with_positive_support() {
        let s = scatterer(1.0, 10.0);
        let stats = scatterer_statistics(&s, &default_spectrum_grid(&s, 50), &quad()).unwrap();
        assert_eq!(stats.spectrum.len(), 50);
        for row in &stats.spectrum {
            assert!(row.c_mm >= 0.0, "C_mm({}) = {}", row.omega, row.c_mm);
        }
    }
}
