use casimir_core::*;
fn main() {
    let spec = QuadratureSpec { max_segments: 200_000, ..QuadratureSpec::default() };
    let v = ThermalState::vacuum();
    for omega_c in [100.0, 1000.0] {
        let c = Cavity::symmetric_point(omega_c, 1.0).unwrap();
        let e = casimir_energy_phase(&c, &v, &spec);
        println!("Omega={omega_c}: {:+.10} err={:.2e}", e.value, e.error_estimate);
        for d in &e.diagnostics { println!("  diag: {}", d.message); }
        let d = casimir_energy_delay(&c, &v, &spec);
        println!("delay: {:+.10} err={:.2e} segs={}", d.value, d.error_estimate, d.segments_used);
        for g in &d.diagnostics { println!("  diag: {}", g.message); }
    }
}
