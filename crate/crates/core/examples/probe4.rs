use casimir_core::*;
use std::f64::consts::PI;

fn main() {
    let c = Cavity::symmetric_point(100.0, 1.0).unwrap();
    let f = |w: f64| w * c.time_delay_analytic(w).unwrap();
    // replicate the aligned-edge generator and print raw terms
    let body_hi = 2000.0;
    let theta = |w: f64| 2.0 * w + 2.0 * (w / 100.0).atan();
    let theta0 = theta(body_hi);
    let mut edges = vec![body_hi];
    for k in 1..=40usize {
        let target = theta0 + k as f64 * PI;
        let mut w = body_hi + (target - theta0) / 2.0;
        for _ in 0..4 {
            let rate = 2.0 + 2.0 * 100.0 / (100.0f64 * 100.0 + w * w);
            w -= (theta(w) - target) / rate;
        }
        edges.push(w);
    }
    let spec = QuadratureSpec { rel_tol: 1e-12, ..Default::default() };
    let mut terms = vec![];
    for e in edges.windows(2) {
        let r = integrate_adaptive(&f, e[0], e[1], &spec);
        terms.push(r.value);
    }
    for (k, t) in terms.iter().enumerate().take(12) {
        println!("t[{k}] = {t:+.10e}");
    }
    let flips = terms.windows(2).filter(|p| p[0] * p[1] < 0.0).count();
    println!("sign flips: {flips} of {}", terms.len() - 1);
}
