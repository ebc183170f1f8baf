use casimir_core::*;
use std::f64::consts::PI;

fn main() {
    // 1) tau analytic vs numeric around a resonance at Omega=100
    let c = Cavity::symmetric_point(100.0, 1.0).unwrap();
    let mut worst: (f64, f64) = (0.0, 0.0);
    for k in 0..2000 {
        let w = 0.01 * (1.0 + k as f64 * 2.0);  // 0.01..~40
        let a = c.time_delay_analytic(w).unwrap();
        match c.time_delay_numeric(w, c.delay_step_hint(w)) {
            Ok(n) => {
                let rel = (a - n).abs() / a.abs().max(1.0);
                if rel > worst.1 { worst = (w, rel); }
            }
            Err(e) => { println!("numeric failed at {w}: {e}"); }
        }
    }
    println!("worst tau mismatch: omega={} rel={:.3e}", worst.0, worst.1);

    // 2) E_delay adaptive body only, with cutoff to kill the tail, vs E_phase same cutoff
    let v = ThermalState::vacuum();
    for lambda in [2000.0, 4000.0] {
        let spec = QuadratureSpec { max_segments: 400_000, uv_cutoff: lambda, rel_tol: 1e-10, ..QuadratureSpec::default() };
        let ep = casimir_energy_phase(&c, &v, &spec);
        let ed = casimir_energy_delay(&c, &v, &spec);
        println!("lambda={lambda}: E_phase_trunc={:+.10} ({}) E_delay_trunc={:+.10} ({}) diff={:+.3e}",
            ep.value, ep.segments_used, ed.value, ed.segments_used, ed.value - ep.value);
    }
    // integration by parts with boundary term: int_0^L w tau = [w delta]_0^L - int_0^L delta
    // => E_delay_trunc - E_phase_trunc should equal L*delta(L)/2pi
    for lambda in [2000.0f64, 4000.0] {
        let d = c.phase_shift(lambda).unwrap();
        println!("boundary term at {lambda}: {:+.3e}", lambda * d / (2.0 * PI));
    }
}
