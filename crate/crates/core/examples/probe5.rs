use casimir_core::*;
use std::f64::consts::PI;

fn main() {
    let c = Cavity::symmetric_point(100.0, 1.0).unwrap();
    let f = |w: f64| w * c.time_delay_analytic(w).unwrap();
    let body_hi = 2000.0;
    let theta0 = {
        let t = |w: f64| 2.0 * w + 2.0 * (w / 100.0f64).atan();
        t(body_hi)
    };
    for rel in [1e-8, 1e-10, 1e-12] {
        let spec = QuadratureSpec { rel_tol: rel, ..Default::default() };
        let mut k = 0usize;
        let edges = move || {
            if k == 0 { k = 1; return body_hi; }
            let target = theta0 + k as f64 * PI;
            k += 1;
            let mut w = body_hi + (target - theta0) / 2.0;
            for _ in 0..4 {
                let rate = 2.0 + 2.0 * 100.0 / (100.0f64 * 100.0 + w * w);
                let t = 2.0 * w + 2.0 * (w / 100.0f64).atan();
                w -= (t - target) / rate;
            }
            w
        };
        let r = integrate_oscillatory_tail_with_edges(&f, edges, &spec);
        println!("rel={rel:.0e}: tail={:+.12e} err={:.3e} n={} diags={}",
                 r.value, r.error_estimate, r.segments_used, r.diagnostics.len());
        for d in &r.diagnostics { println!("   {:?}", d.message); }
    }
}
