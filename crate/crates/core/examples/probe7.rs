use casimir_core::*;
use std::f64::consts::PI;

fn main() {
    let c = Cavity::symmetric_point(100.0, 1.0).unwrap();
    let f = |w: f64| w * c.time_delay_analytic(w).unwrap();
    let body_hi = 2000.0;
    let theta = |w: f64| 2.0 * w + 2.0 * (w / 100.0f64).atan();
    let theta0 = theta(body_hi);
    let spec = QuadratureSpec { rel_tol: 1e-13, ..Default::default() };
    let mut prev = body_hi;
    for k in 1..=400usize {
        let target = theta0 + k as f64 * PI;
        let mut w = body_hi + (target - theta0) / 2.0;
        for _ in 0..6 {
            let rate = 2.0 + 2.0 * 100.0 / (100.0f64 * 100.0 + w * w);
            w -= (theta(w) - target) / rate;
        }
        let r = integrate_adaptive(&f, prev, w, &spec);
        println!("{:.17e}", r.value);
        prev = w;
    }
}
