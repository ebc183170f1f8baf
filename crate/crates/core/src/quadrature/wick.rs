//! Imaginary-frequency route to the vacuum cavity energy.
//!
//! Rotating the phase-shift integral onto the imaginary axis ω = iξ
//! trades an oscillatory real-axis integrand for a smooth, exponentially
//! damped one:
//!
//! ```text
//! E_c = (1/2π) ∫_0^∞ ln(1 - r₁(iξ) r₂(iξ) e^{-2ξq}) dξ
//! ```
//!
//! It is valid for mirror models that are analytic in the upper half
//! plane (the point scatterer, with r(iξ) = -Ω/(Ω + ξ)), and serves as an
//! independent cross-check of the real-axis machinery.

use std::f64::consts::PI;

use super::{integrate_adaptive_with_markers, IntegralResult, QuadratureSpec};

/// Vacuum cavity energy from a loop amplitude evaluated on the imaginary
/// frequency axis. `loop_amplitude(ξ)` must return r₁(iξ)·r₂(iξ), which
/// is real for analytic passive mirrors.
pub fn wick_axis_value<F>(loop_amplitude: F, q: f64, spec: &QuadratureSpec) -> IntegralResult
where
    F: Fn(f64) -> f64,
{
    debug_assert!(q > 0.0);

    // Beyond ξ_max the integrand is below ~e^{-50}; the remainder is
    // far under any practical tolerance.
    let xi_max = 25.0 / q;

    let integrand = move |xi: f64| {
        let amp = loop_amplitude(xi);
        if amp > 0.0 {
            // 1 - amp·e^{-2ξq} loses all precision near ξ = 0 where the
            // product approaches 1; writing it as -expm1(-u) with
            // u = 2ξq - ln(amp) keeps the log singularity exact.
            let u = 2.0 * xi * q - amp.ln();
            (-f64::exp_m1(-u)).ln()
        } else {
            (1.0 - amp * (-2.0 * xi * q).exp()).ln()
        }
    };

    // markers help the adaptive engine dig into the ξ → 0 log region
    let markers = [
        1e-6 / q,
        1e-4 / q,
        1e-2 / q,
        0.1 / q,
        0.5 / q,
        1.0 / q,
        3.0 / q,
        10.0 / q,
    ];
    integrate_adaptive_with_markers(integrand, 0.0, xi_max, &markers, spec)
        .scaled(1.0 / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn transparent_mirrors_store_nothing() {
        let r = wick_axis_value(|_| 0.0, 1.0, &QuadratureSpec::default());
        assert_relative_eq!(r.value, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn symmetric_point_scatterer_reference_value() {
        // Ω₁ = Ω₂ = 1, q = 1; reference from an independent
        // high-precision evaluation of the same contour integral
        let r = wick_axis_value(
            |xi| (1.0 / (1.0 + xi)) * (1.0 / (1.0 + xi)),
            1.0,
            &QuadratureSpec::default().with_rel_tol(1e-10),
        );
        assert_relative_eq!(r.value, -0.0707542094, max_relative = 1e-7);
    }

    #[test]
    fn perfect_mirror_limit_recovers_mode_sum() {
        // unit loop amplitude: (1/2π)∫ ln(1-e^{-2ξq}) dξ = -π/(24 q)
        for q in [0.5, 1.0, 2.0] {
            let r = wick_axis_value(|_| 1.0, q, &QuadratureSpec::default().with_rel_tol(1e-10));
            assert_relative_eq!(r.value, -PI / (24.0 * q), max_relative = 1e-8);
        }
    }
}
