use casimir_core::*;
fn main() {
    let f = |x: f64| (-x).exp();
    let spec = QuadratureSpec { rel_tol: 1e-10, uv_cutoff: 40.0, ..Default::default() };
    let r = integrate_oscillatory_tail(f, 0.0, 1.0, &spec);
    println!("value={} err={:.3e} segs={} ndiags={}", r.value, r.error_estimate, r.segments_used, r.diagnostics.len());
    for d in &r.diagnostics { println!("  {}", d.message); }
}
