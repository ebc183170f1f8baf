//! Frequency-dependent mirror reflection models.
//!
//! A mirror is described by its reflection amplitude r[ω] on ω ≥ 0. All
//! models are passive (|r| ≤ 1) and transparent at high frequency
//! (|r| → 0 as ω → ∞), which is what makes the spectral integrals built
//! on top of them convergent.
//!
//! The pointlike scatterer has the closed form
//!
//! ```text
//! r[ω] = -Ω / (Ω - iω),    s[ω] = 1 + r[ω]
//! ```
//!
//! with a Lorentzian reflection delay τ[ω] = Ω/(Ω² + ω²).

use num_complex::Complex64;
use serde::Deserialize;
use std::f64::consts::PI;

use crate::numdiff;

/// Relative step for numerical phase derivatives of non-closed-form models.
const PHASE_DERIV_STEP: f64 = 1e-5;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum MirrorError {
    #[error("frequency must be non-negative, got {0}")]
    NegativeFrequency(f64),
    #[error("invalid mirror model: {0}")]
    InvalidModel(String),
    #[error("model has no analytic continuation to the imaginary frequency axis: {0}")]
    NotAnalytic(String),
}

/// A mirror reflection model.
///
/// Models deserialize from tagged records, e.g. `{"type":"point","omega_c":1.0}`.
/// Use [`MirrorModel::validate`] after deserializing untrusted input.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MirrorModel {
    /// Pointlike scatterer with r[ω] = -Ω/(Ω - iω). Ω is the inverse of
    /// the proper time characterising field scattering.
    Point { omega_c: f64 },
    /// Constant amplitude ρ e^{iφ} rolled off smoothly above `cutoff` by
    /// a factor 1/(1 + (ω/cutoff)²) so that integrals stay convergent.
    ConstantLossy { rho: f64, phi: f64, cutoff: f64 },
    /// Samples of (frequency, amplitude), interpolated linearly in
    /// (Re r, Im r). Beyond the last sample the amplitude decays as
    /// (ω_last/ω)² to preserve high-frequency transparency; below the
    /// first sample it is held constant.
    Tabulated { samples: Vec<(f64, Complex64)> },
}

impl MirrorModel {
    pub fn point(omega_c: f64) -> Result<Self, MirrorError> {
        let m = MirrorModel::Point { omega_c };
        m.validate()?;
        Ok(m)
    }

    pub fn constant_lossy(rho: f64, phi: f64, cutoff: f64) -> Result<Self, MirrorError> {
        let m = MirrorModel::ConstantLossy { rho, phi, cutoff };
        m.validate()?;
        Ok(m)
    }

    pub fn tabulated(samples: Vec<(f64, Complex64)>) -> Result<Self, MirrorError> {
        let m = MirrorModel::Tabulated { samples };
        m.validate()?;
        Ok(m)
    }

    /// Checks the model invariants: passivity, parameter ranges, sample
    /// ordering.
    pub fn validate(&self) -> Result<(), MirrorError> {
        match self {
            MirrorModel::Point { omega_c } => {
                if !(omega_c.is_finite() && *omega_c > 0.0) {
                    return Err(MirrorError::InvalidModel(format!(
                        "point scatterer requires omega_c > 0, got {omega_c}"
                    )));
                }
            }
            MirrorModel::ConstantLossy { rho, phi, cutoff } => {
                if !(rho.is_finite() && (0.0..1.0).contains(rho)) {
                    return Err(MirrorError::InvalidModel(format!(
                        "constant-lossy amplitude must lie in [0, 1), got {rho}"
                    )));
                }
                if !phi.is_finite() {
                    return Err(MirrorError::InvalidModel("phase must be finite".into()));
                }
                if !(cutoff.is_finite() && *cutoff > 0.0) {
                    return Err(MirrorError::InvalidModel(format!(
                        "roll-off cutoff must be positive, got {cutoff}"
                    )));
                }
            }
            MirrorModel::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(MirrorError::InvalidModel(
                        "tabulated model needs at least two samples".into(),
                    ));
                }
                let mut prev = -1.0;
                for &(w, r) in samples {
                    if !(w.is_finite() && w >= 0.0 && w > prev) {
                        return Err(MirrorError::InvalidModel(format!(
                            "sample frequencies must be non-negative and strictly increasing (at {w})"
                        )));
                    }
                    if !(r.re.is_finite() && r.im.is_finite()) || r.norm() > 1.0 + 1e-12 {
                        return Err(MirrorError::InvalidModel(format!(
                            "sample amplitude |r| must not exceed 1 (at omega {w}: |r| = {})",
                            r.norm()
                        )));
                    }
                    prev = w;
                }
            }
        }
        Ok(())
    }

    /// Reflection amplitude r[ω].
    pub fn reflect(&self, omega: f64) -> Result<Complex64, MirrorError> {
        if omega < 0.0 || !omega.is_finite() {
            return Err(MirrorError::NegativeFrequency(omega));
        }
        Ok(self.reflect_nonneg(omega))
    }

    /// Same as [`reflect`](Self::reflect) but trusts ω ≥ 0. Quadrature
    /// nodes satisfy this by construction.
    pub(crate) fn reflect_nonneg(&self, omega: f64) -> Complex64 {
        debug_assert!(omega >= 0.0);
        match self {
            MirrorModel::Point { omega_c } => {
                // -Ω/(Ω - iω) = -Ω(Ω + iω)/(Ω² + ω²)
                let d = omega_c * omega_c + omega * omega;
                Complex64::new(-omega_c * omega_c / d, -omega_c * omega / d)
            }
            MirrorModel::ConstantLossy { rho, phi, cutoff } => {
                let roll = 1.0 / (1.0 + (omega / cutoff).powi(2));
                Complex64::from_polar(rho * roll, *phi)
            }
            MirrorModel::Tabulated { samples } => {
                let (w0, _) = samples[0];
                let &(wn, rn) = samples.last().expect("validated: non-empty");
                if omega <= w0 {
                    samples[0].1
                } else if omega >= wn {
                    rn * (wn / omega).powi(2)
                } else {
                    let k = samples.partition_point(|&(w, _)| w <= omega) - 1;
                    let (wa, ra) = samples[k];
                    let (wb, rb) = samples[k + 1];
                    let t = (omega - wa) / (wb - wa);
                    ra + (rb - ra) * t
                }
            }
        }
    }

    /// Diagonal and off-diagonal scattering amplitudes (s, r) with
    /// s = 1 + r. The eigenvalues of the symmetric 2x2 scattering matrix
    /// are s ± r, so det S = (s - r)(s + r) = s² - r².
    pub fn scattering_pair(&self, omega: f64) -> Result<(Complex64, Complex64), MirrorError> {
        let r = self.reflect(omega)?;
        Ok((Complex64::new(1.0, 0.0) + r, r))
    }

    /// Energy-balance factor |s + r|² of the scattering matrix. Equals 1
    /// for lossless models (the point scatterer); below 1 for lossy ones.
    /// Since s - r = 1 identically, |det S| = |s + r|.
    pub fn scattering_unitarity(&self, omega: f64) -> Result<f64, MirrorError> {
        let (s, r) = self.scattering_pair(omega)?;
        Ok((s + r).norm_sqr())
    }

    /// Reflection time delay of the isolated mirror, ½ ∂_ω arg det S.
    ///
    /// For the point scatterer this is the Lorentzian Ω/(Ω² + ω²) in
    /// closed form; other models fall back to a stabilized central
    /// difference of ½ arg(1 + 2r[ω]) (det S = 1 + 2r since s = 1 + r).
    pub fn mirror_delay(&self, omega: f64) -> Result<f64, MirrorError> {
        if omega < 0.0 || !omega.is_finite() {
            return Err(MirrorError::NegativeFrequency(omega));
        }
        match self {
            MirrorModel::Point { omega_c } => Ok(omega_c / (omega_c * omega_c + omega * omega)),
            _ => {
                let scale = self.frequency_scale().max(omega);
                let h0 = PHASE_DERIV_STEP * scale;
                // arg increments via the principal argument of the
                // quotient: branch-safe for small steps.
                let half_arg_diff = |w1: f64, w2: f64| {
                    let d1 = Complex64::new(1.0, 0.0) + self.reflect_nonneg(w1) * 2.0;
                    let d2 = Complex64::new(1.0, 0.0) + self.reflect_nonneg(w2) * 2.0;
                    0.5 * (d2 / d1).arg()
                };
                let (value, _err) = numdiff::central_derivative(
                    |h| {
                        let lo = (omega - h).max(0.0);
                        half_arg_diff(lo, omega + h) / (omega + h - lo)
                    },
                    h0,
                );
                Ok(value)
            }
        }
    }

    /// Reflection amplitude continued to the imaginary frequency axis,
    /// r(iξ). Only the point scatterer is analytic in the upper half
    /// plane (the constant-lossy roll-off has poles at ω = ±i·cutoff),
    /// so the continuation is defined for it alone:
    /// r(iξ) = -Ω/(Ω + ξ), which is real.
    pub fn reflect_imaginary_axis(&self, xi: f64) -> Result<f64, MirrorError> {
        if xi < 0.0 || !xi.is_finite() {
            return Err(MirrorError::NegativeFrequency(xi));
        }
        match self {
            MirrorModel::Point { omega_c } => Ok(-omega_c / (omega_c + xi)),
            MirrorModel::ConstantLossy { .. } => Err(MirrorError::NotAnalytic(
                "constant-lossy roll-off 1/(1 + (omega/cutoff)^2) has poles on the imaginary axis"
                    .into(),
            )),
            MirrorModel::Tabulated { .. } => Err(MirrorError::NotAnalytic(
                "tabulated samples do not determine an analytic continuation".into(),
            )),
        }
    }

    /// Characteristic frequency above which the mirror turns transparent.
    pub fn frequency_scale(&self) -> f64 {
        match self {
            MirrorModel::Point { omega_c } => *omega_c,
            MirrorModel::ConstantLossy { cutoff, .. } => *cutoff,
            MirrorModel::Tabulated { samples } => samples.last().map(|&(w, _)| w).unwrap_or(1.0),
        }
    }

    /// Modulus and continuous phase of r[ω] together with their frequency
    /// derivatives. Closed forms for the point scatterer and the
    /// constant-lossy model; stabilized central differences for tabulated
    /// samples.
    ///
    /// The decomposition carries `1 - ρ` separately (exact even when
    /// ρ → 1) and splits a DC reflection sign into `pi_offset` so that
    /// near-resonance trigonometry downstream never cancels.
    pub(crate) fn polar_with_derivatives(&self, omega: f64) -> PolarAmplitude {
        match self {
            MirrorModel::Point { omega_c } => {
                let s = omega_c.hypot(omega);
                let d = omega_c * omega_c + omega * omega;
                PolarAmplitude {
                    rho: omega_c / s,
                    one_minus_rho: omega * omega / (s * (s + omega_c)),
                    phi_reduced: (omega / omega_c).atan(),
                    pi_offset: true,
                    drho: -omega_c * omega / (d * s),
                    dphi: omega_c / d,
                }
            }
            MirrorModel::ConstantLossy { rho, phi, cutoff } => {
                let u = omega / cutoff;
                let denom = 1.0 + u * u;
                let roll = 1.0 / denom;
                // single division keeps ρ + (1-ρ) consistent to the last
                // ulp; in particular ρ = 0 gives exactly 1 - ρ = 1
                PolarAmplitude {
                    rho: rho / denom,
                    one_minus_rho: ((1.0 - rho) + u * u) / denom,
                    phi_reduced: *phi,
                    pi_offset: false,
                    drho: -rho * 2.0 * u / cutoff * roll * roll,
                    dphi: 0.0,
                }
            }
            MirrorModel::Tabulated { .. } => {
                let r = self.reflect_nonneg(omega);
                let rho = r.norm();
                let scale = self.frequency_scale().max(omega);
                let h = PHASE_DERIV_STEP * scale;
                let lo = (omega - h).max(0.0);
                let ra = self.reflect_nonneg(lo);
                let rb = self.reflect_nonneg(omega + h);
                let inv_span = 1.0 / (omega + h - lo);
                let drho = (rb.norm() - ra.norm()) * inv_span;
                // phase increment across the stencil, branch-safe for
                // small steps; at a zero of r the phase is held.
                let dphi = if ra.norm() == 0.0 || rb.norm() == 0.0 {
                    0.0
                } else {
                    (rb / ra).arg() * inv_span
                };
                PolarAmplitude {
                    rho,
                    one_minus_rho: 1.0 - rho,
                    phi_reduced: r.arg(),
                    pi_offset: false,
                    drho,
                    dphi,
                }
            }
        }
    }
}

/// Polar decomposition r = ρ e^{iφ} with frequency derivatives.
/// φ = `phi_reduced` + π when `pi_offset` is set.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PolarAmplitude {
    pub rho: f64,
    /// 1 - ρ, computed without cancellation.
    pub one_minus_rho: f64,
    pub phi_reduced: f64,
    pub pi_offset: bool,
    pub drho: f64,
    pub dphi: f64,
}


/// Modulus and principal-value argument of a reflection amplitude.
///
/// For derivative work along a frequency sweep use [`PhaseSweep`], which
/// keeps the phase continuous across branch cuts.
pub fn amplitude_phase(r: Complex64) -> (f64, f64) {
    (r.norm(), r.arg())
}

/// Unwraps phases continuously along a monotone frequency sweep.
///
/// The returned phase never recomputes an isolated principal value: each
/// sample is shifted by the multiple of 2π that keeps it within π of the
/// previous one, so numerical ∂_ω φ along the sweep is meaningful. A zero
/// amplitude returns (0, previous phase), carrying the phase through.
#[derive(Debug, Clone, Default)]
pub struct PhaseSweep {
    prev: Option<f64>,
}

impl PhaseSweep {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts the sweep at a given phase offset (e.g. a known DC value).
    pub fn starting_at(phi: f64) -> Self {
        PhaseSweep { prev: Some(phi) }
    }

    pub fn amplitude_phase(&mut self, r: Complex64) -> (f64, f64) {
        let rho = r.norm();
        if rho == 0.0 {
            return (0.0, self.prev.unwrap_or(0.0));
        }
        let phi = match self.prev {
            None => r.arg(),
            Some(prev) => {
                let raw = r.arg();
                let mut phi = raw + 2.0 * PI * ((prev - raw) / (2.0 * PI)).round();
                // round() can land one turn off right at the boundary
                while phi - prev > PI {
                    phi -= 2.0 * PI;
                }
                while phi - prev < -PI {
                    phi += 2.0 * PI;
                }
                phi
            }
        };
        self.prev = Some(phi);
        (rho, phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn point_scatterer_reflection() {
        let m = MirrorModel::point(1.0).unwrap();
        // zero-frequency limit of -Ω/(Ω - iω)
        let r0 = m.reflect(0.0).unwrap();
        assert_abs_diff_eq!(r0.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r0.im, 0.0, epsilon = 1e-15);
        // -1/(1 - i) = -0.5 - 0.5i
        let r1 = m.reflect(1.0).unwrap();
        assert_abs_diff_eq!(r1.re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r1.im, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn transparent_mirror_reflects_nothing() {
        let m = MirrorModel::constant_lossy(0.0, 0.0, 1.0).unwrap();
        for w in [0.0, 0.3, 7.0] {
            assert_eq!(m.reflect(w).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn negative_frequency_is_a_domain_error() {
        let m = MirrorModel::point(1.0).unwrap();
        assert!(matches!(
            m.reflect(-0.5),
            Err(MirrorError::NegativeFrequency(_))
        ));
    }

    #[test]
    fn scattering_pair_point_scatterer() {
        let m = MirrorModel::point(1.0).unwrap();
        // perfect reflection at DC
        let (s0, r0) = m.scattering_pair(0.0).unwrap();
        assert_abs_diff_eq!(s0.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((r0 + Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        // transparency at high frequency
        let (s_inf, r_inf) = m.scattering_pair(1e9).unwrap();
        assert_abs_diff_eq!(s_inf.re, 1.0, epsilon = 1e-8);
        assert!(r_inf.norm() < 1e-8);
        // ω = 1: s = 0.5 - 0.5i, r = -0.5 - 0.5i, |det S| = |s² - r²| = 1
        let (s, r) = m.scattering_pair(1.0).unwrap();
        assert_abs_diff_eq!(s.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.im, -0.5, epsilon = 1e-15);
        assert_relative_eq!((s * s - r * r).norm(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(m.scattering_unitarity(1.0).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn lorentzian_mirror_delay() {
        let m = MirrorModel::point(1.0).unwrap();
        assert_relative_eq!(m.mirror_delay(0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(m.mirror_delay(1.0).unwrap(), 0.5, epsilon = 1e-15);
        let m2 = MirrorModel::point(2.0).unwrap();
        assert_relative_eq!(m2.mirror_delay(0.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn numeric_delay_matches_closed_form() {
        // The generic ½ ∂_ω arg det S path, checked against the
        // Lorentzian closed form on a tabulated copy of the point
        // scatterer.
        let point = MirrorModel::point(1.0).unwrap();
        let samples: Vec<(f64, Complex64)> = (0..4000)
            .map(|k| {
                let w = k as f64 * 5e-3;
                (w, point.reflect(w).unwrap())
            })
            .collect();
        let tab = MirrorModel::tabulated(samples).unwrap();
        for w in [0.5, 1.0, 3.0] {
            let exact = 1.0 / (1.0 + w * w);
            let numeric = tab.mirror_delay(w).unwrap();
            assert_relative_eq!(numeric, exact, max_relative = 1e-3);
        }
    }

    #[test]
    fn closed_form_delay_matches_numeric_phase_derivative() {
        // ½ arg((Ω+iω)/(Ω-iω)) = atan(ω/Ω); its derivative is the
        // Lorentzian delay. Checked at 1e-8 relative across four decades.
        let omega_c = 1.0;
        let m = MirrorModel::point(omega_c).unwrap();
        let half_arg = |w: f64| {
            0.5 * (Complex64::new(omega_c, w) / Complex64::new(omega_c, -w)).arg()
        };
        let mut w: f64 = 1e-2;
        while w <= 1e2 {
            let (num, _) = numdiff::central_derivative(
                |h| (half_arg(w + h) - half_arg(w - h)) / (2.0 * h),
                1e-3 * w.max(1.0),
            );
            let exact = m.mirror_delay(w).unwrap();
            assert_relative_eq!(num, exact, max_relative = 1e-8);
            w *= 3.1623;
        }
    }

    #[test]
    fn amplitude_phase_values() {
        let (rho, phi) = amplitude_phase(Complex64::new(-1.0, 0.0));
        assert_abs_diff_eq!(rho, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phi, PI, epsilon = 1e-15);

        let (rho, phi) = amplitude_phase(Complex64::new(-0.5, -0.5));
        assert_relative_eq!(rho, 0.5_f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(phi, -3.0 * PI / 4.0, epsilon = 1e-15);

        let (rho, phi) = amplitude_phase(Complex64::new(0.3, 0.0));
        assert_abs_diff_eq!(rho, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(phi, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn phase_sweep_is_continuous_and_holds_through_zeros() {
        let mut sweep = PhaseSweep::new();
        // spiral crossing the -π/+π cut several times
        let mut prev = None;
        for k in 0..200 {
            let theta = -2.9 + 0.1 * k as f64;
            let (_, phi) = sweep.amplitude_phase(Complex64::from_polar(0.8, theta));
            if let Some(p) = prev {
                let jump: f64 = phi - p;
                assert!(jump.abs() < PI, "phase jump {jump} at step {k}");
            }
            prev = Some(phi);
        }
        // zero amplitude carries the previous phase
        let before = prev.unwrap();
        let (rho, phi) = sweep.amplitude_phase(Complex64::new(0.0, 0.0));
        assert_eq!(rho, 0.0);
        assert_eq!(phi, before);
    }

    #[test]
    fn point_scatterer_transparency_bound() {
        let m = MirrorModel::point(1.0).unwrap();
        assert!(m.reflect(1e3).unwrap().norm() < 1.01e-3);
    }

    #[test]
    fn tabulated_interpolation_and_extrapolation() {
        let m = MirrorModel::tabulated(vec![
            (0.0, Complex64::new(0.8, 0.0)),
            (1.0, Complex64::new(0.4, 0.2)),
            (2.0, Complex64::new(0.1, 0.1)),
        ])
        .unwrap();
        let mid = m.reflect(0.5).unwrap();
        assert_abs_diff_eq!(mid.re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(mid.im, 0.1, epsilon = 1e-15);
        // amplitude decays as (ω_last/ω)² beyond the table
        let far = m.reflect(20.0).unwrap();
        assert_relative_eq!(far.norm(), 0.1_f64.hypot(0.1) * 0.01, epsilon = 1e-12);
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(MirrorModel::point(0.0).is_err());
        assert!(MirrorModel::constant_lossy(1.0, 0.0, 1.0).is_err());
        assert!(MirrorModel::constant_lossy(-0.1, 0.0, 1.0).is_err());
        assert!(MirrorModel::tabulated(vec![(0.0, Complex64::new(0.5, 0.0))]).is_err());
        assert!(MirrorModel::tabulated(vec![
            (1.0, Complex64::new(0.5, 0.0)),
            (0.5, Complex64::new(0.5, 0.0)),
        ])
        .is_err());
    }

    #[test]
    fn wick_continuation_point_only() {
        let m = MirrorModel::point(2.0).unwrap();
        assert_relative_eq!(m.reflect_imaginary_axis(0.0).unwrap(), -1.0);
        assert_relative_eq!(m.reflect_imaginary_axis(2.0).unwrap(), -0.5);
        let lossy = MirrorModel::constant_lossy(0.5, 0.0, 10.0).unwrap();
        assert!(matches!(
            lossy.reflect_imaginary_axis(1.0),
            Err(MirrorError::NotAnalytic(_))
        ));
    }
}
