use casimir_core::*;
use std::f64::consts::PI;

// E_delay with adjustable body/tail split, bypassing crossover_frequency
fn e_delay_split(c: &Cavity, split: f64, rel: f64) -> (f64, f64, f64) {
    let spec = QuadratureSpec { rel_tol: rel, max_segments: 400_000, ..Default::default() };
    let f = |w: f64| w * c.time_delay_analytic(w).unwrap();
    let markers = {
        // same phase breakpoints the real path uses
        let c2 = c.clone();
        let mut v = vec![];
        let mut w = 1e-6;
        while w < split {
            v.push(w);
            w += 0.05;
        }
        drop(c2);
        v
    };
    let body = integrate_adaptive_with_markers(&f, 0.0, split, &markers, &spec);
    let theta = |w: f64| 2.0 * w + 2.0 * (w / 100.0f64).atan();
    let theta0 = theta(split);
    let mut k = 0usize;
    let edges = move || {
        if k == 0 { k = 1; return split; }
        let target = theta0 + k as f64 * PI;
        k += 1;
        let mut w = split + (target - theta0) / 2.0;
        for _ in 0..4 {
            let rate = 2.0 + 2.0 * 100.0 / (100.0f64 * 100.0 + w * w);
            w -= (theta(w) - target) / rate;
        }
        w
    };
    let tail = integrate_oscillatory_tail_with_edges(&f, edges, &spec);
    ((body.value + tail.value) / (2.0 * PI), body.value, tail.value)
}

fn main() {
    let c = Cavity::symmetric_point(100.0, 1.0).unwrap();
    for split in [2000.0, 3000.0, 5000.0] {
        let (e, b, t) = e_delay_split(&c, split, 1e-10);
        println!("split={split}: E_delay={e:+.10} body={b:+.8} tail={t:+.8}");
    }
    // boundary-identity reference for the tail at split=2000:
    // tail = -2000 δ(2000) - ∫_2000^∞ δ dω
    let d2000 = c.phase_shift(2000.0).unwrap();
    let spec = QuadratureSpec { rel_tol: 1e-12, ..Default::default() };
    let fdelta = |w: f64| c.phase_shift(w).unwrap();
    let theta = |w: f64| 2.0 * w + 2.0 * (w / 100.0f64).atan();
    let theta0 = theta(2000.0);
    let mut k = 0usize;
    let edges = move || {
        if k == 0 { k = 1; return 2000.0; }
        let target = theta0 + k as f64 * PI;
        k += 1;
        let mut w = 2000.0 + (target - theta0) / 2.0;
        for _ in 0..4 {
            let rate = 2.0 + 2.0 * 100.0 / (100.0f64 * 100.0 + w * w);
            w -= (theta(w) - target) / rate;
        }
        w
    };
    let int_delta = integrate_oscillatory_tail_with_edges(&fdelta, edges, &spec);
    println!("tail identity: {:+.10e}  (δ(2000) = {:+.6e}, ∫δ = {:+.6e})",
             -2000.0 * d2000 - int_delta.value, d2000, int_delta.value);
}
