use casimir_core::*;

fn main() {
    let c = Cavity::symmetric_point(100.0, 1.0).unwrap();
    // Plain adaptive over ONE modest window high up: [2000, 2100]
    let spec = QuadratureSpec { rel_tol: 1e-12, max_segments: 100_000, ..QuadratureSpec::default() };
    let f = |w: f64| w * c.time_delay_analytic(w).unwrap();
    let r = integrate_adaptive(&f, 2000.0, 2100.0, &spec);
    println!("adaptive [2000,2100]: {:+.12e} err {:.2e} segs {} diags {:?}", r.value, r.error_estimate, r.segments_used, r.diagnostics.len());
    // Riemann oracle, 4e6 midpoints
    let n = 4_000_000usize;
    let h = 100.0 / n as f64;
    let s: f64 = (0..n).map(|k| f(2000.0 + (k as f64 + 0.5) * h) * h).sum();
    println!("riemann  [2000,2100]: {:+.12e}", s);

    // tail accelerator from 2000 vs from 2100 (difference should equal the window)
    let rate = 2.0; // dphi negligible here
    let hp = std::f64::consts::PI / rate;
    let t0 = integrate_oscillatory_tail(&f, 2000.0, hp, &spec);
    let t1 = integrate_oscillatory_tail(&f, 2100.0, hp, &spec);
    println!("tail(2000) {:+.10e} err {:.2e} n={} diags {}", t0.value, t0.error_estimate, t0.segments_used, t0.diagnostics.len());
    println!("tail(2100) {:+.10e} err {:.2e} n={}", t1.value, t1.error_estimate, t1.segments_used);
    println!("tail diff  {:+.10e}  vs window {:+.10e}", t0.value - t1.value, r.value);
    for d in &t0.diagnostics { println!("tail diag: {:?}", d); }
}
