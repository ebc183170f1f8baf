use casimir_core::*;
use std::time::Instant;

fn main() {
    let spec = QuadratureSpec { max_segments: 200_000, ..QuadratureSpec::default() };
    let v = ThermalState::vacuum();
    for omega_c in [1.0, 10.0, 100.0, 1000.0] {
        let c = Cavity::symmetric_point(omega_c, 1.0).unwrap();
        let t0 = Instant::now();
        let e = casimir_energy_phase(&c, &v, &spec);
        let t1 = Instant::now();
        let d = casimir_energy_delay(&c, &v, &spec);
        let t2 = Instant::now();
        println!(
            "Omega={omega_c:6}: E_phase={:+.9} ({} segs, {:?}, diags {}) E_delay={:+.9} ({} segs, {:?}) ratio24={:.6}",
            e.value, e.segments_used, t1 - t0, e.diagnostics.len(),
            d.value, d.segments_used, t2 - t1, e.value * 24.0 / std::f64::consts::PI
        );
    }
    for omega_c in [1.0, 10.0, 100.0] {
        let c = Cavity::symmetric_point(omega_c, 1.0).unwrap();
        let t0 = Instant::now();
        let b = energy_breakdown(&c, &v, &spec);
        println!(
            "breakdown Omega={omega_c:6}: phase={:+.9} delay={:+.9} force={:+.9} residuals=({:.2e},{:.2e},{:.2e}) q_ref={} in {:?}",
            b.phase_repr.value, b.delay_repr.value, b.force_route.value,
            b.residuals.phase_delay, b.residuals.phase_force, b.residuals.delay_force,
            b.reference_length, t0.elapsed()
        );
    }
    let t0 = Instant::now();
    let c = Cavity::symmetric_point(1.0, 1.0).unwrap();
    let w = casimir_energy_wick(&c, &spec).unwrap();
    println!("wick Omega=1 q=1: {:+.10} ({:?})", w.value, t0.elapsed());
}
