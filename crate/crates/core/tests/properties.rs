//! Property tests for the structural invariants: passivity, spectral
//! positivity, phase continuity and thermal monotonicity.

use casimir_core::{
    mass_noise_spectrum, planck_occupation, Cavity, MirrorModel, PhaseSweep, PointScattererSpec,
    QuadratureSpec, ThermalState,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn arb_mirror() -> impl Strategy<Value = MirrorModel> {
    prop_oneof![
        (1e-3..1e3f64).prop_map(|o| MirrorModel::point(o).unwrap()),
        (0.0..0.999f64, -3.0..3.0f64, 1e-2..1e3f64)
            .prop_map(|(rho, phi, cutoff)| MirrorModel::constant_lossy(rho, phi, cutoff).unwrap()),
        proptest::collection::vec((0.0..0.95f64, -3.1..3.1f64), 2..12).prop_map(|polar| {
            let samples = polar
                .into_iter()
                .enumerate()
                .map(|(k, (rho, phi))| (k as f64 * 0.5, Complex64::from_polar(rho, phi)))
                .collect();
            MirrorModel::tabulated(samples).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reflection_is_passive(mirror in arb_mirror(), omega in 0.0..1e4f64) {
        let r = mirror.reflect(omega).unwrap();
        prop_assert!(r.norm() <= 1.0 + 1e-12, "|r({omega})| = {}", r.norm());
    }

    #[test]
    fn airy_factor_is_nonnegative_and_finite(
        m1 in arb_mirror(),
        m2 in arb_mirror(),
        q in 1e-2..1e2f64,
        omega in 0.0..1e3f64,
    ) {
        let cavity = Cavity::new(m1, m2, q).unwrap();
        if let Ok(g) = cavity.airy(omega) {
            prop_assert!(g.is_finite());
            prop_assert!(g >= 0.0, "g({omega}) = {g}");
        }
    }

    #[test]
    fn transparent_partner_flattens_the_spectrum(
        m1 in arb_mirror(),
        q in 1e-2..1e2f64,
        omega in 0.0..1e3f64,
    ) {
        let transparent = MirrorModel::constant_lossy(0.0, 0.0, 1.0).unwrap();
        let cavity = Cavity::new(m1, transparent, q).unwrap();
        prop_assert_eq!(cavity.airy(omega).unwrap(), 1.0);
    }

    #[test]
    fn phase_sweep_never_jumps_by_more_than_pi(
        start in -3.1..3.1f64,
        steps in proptest::collection::vec(-1.5..1.5f64, 1..60),
    ) {
        let mut sweep = PhaseSweep::new();
        let mut angle = start;
        let mut prev: Option<f64> = None;
        for d in steps {
            angle += d;
            let (_, phi) = sweep.amplitude_phase(Complex64::from_polar(0.7, angle));
            if let Some(p) = prev {
                prop_assert!((phi - p).abs() <= std::f64::consts::PI + 1e-12);
            }
            prev = Some(phi);
        }
    }

    #[test]
    fn planck_occupation_decreases_with_frequency(
        t in 1e-3..1e2f64,
        omega in 1e-3..1e2f64,
        factor in 1.01..10.0f64,
    ) {
        let thermal = ThermalState::new(t).unwrap();
        let lo = planck_occupation(omega, &thermal).unwrap();
        let hi = planck_occupation(omega * factor, &thermal).unwrap();
        prop_assert!(hi <= lo);
        prop_assert!(hi >= 0.0);
    }
}

proptest! {
    // the noise spectrum runs a quadrature per case; keep the case count low
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mass_noise_spectrum_positive_frequency_support(
        omega_c in 0.1..10.0f64,
        omega in -5.0..5.0f64,
    ) {
        let spec = PointScattererSpec::new(0.0, omega_c, 10.0 * omega_c).unwrap();
        let c = mass_noise_spectrum(&spec, omega, &QuadratureSpec::default());
        if omega <= 0.0 {
            prop_assert_eq!(c, 0.0);
        } else {
            prop_assert!(c >= 0.0, "C_mm({omega}) = {c}");
        }
    }
}
