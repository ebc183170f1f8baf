//! Semi-infinite oscillatory tails by alternating-segment summation.
//!
//! Above its resonant region a cavity integrand decays only through
//! oscillation (an alternating 1/ω envelope for Lorentzian mirrors), so
//! plain truncation converges hopelessly slowly. Splitting the tail at
//! consecutive sign flips of the oscillation turns it into an
//! alternating series whose partial sums respond extremely well to
//! iterated averaging (Euler-style acceleration): each averaging pass
//! gains roughly one power of 1/k.
//!
//! Segment boundaries come from an edge generator so callers that know
//! the oscillation phase exactly (the cavity round-trip phase) can keep
//! segments aligned with the sign flips even when the phase drifts;
//! [`integrate_oscillatory_tail`] is the fixed-spacing front end.

use super::gauss_kronrod::qk21;
use super::{IntegralResult, QuadratureSpec};
use crate::diagnostics::{Diagnostic, DiagnosticCode};

const MAX_CYCLES: usize = 1024;
/// Averaging operates on this many trailing partial sums at most.
const TABLE_WIDTH: usize = 40;

/// Integrates `f` from `a` to infinity, where `f` eventually oscillates
/// with the given half-period (e.g. π/(2q) in frequency for a cavity of
/// length q).
///
/// Consecutive half-period segment integrals are summed and the
/// alternating series is accelerated by iterated averaging until the
/// requested tolerance is met. If the tail turns out not to alternate,
/// the routine falls back to plain truncation — at the cutoff Λ from
/// `spec` if one is set, otherwise at the last computed segment — and
/// says so in the diagnostics.
pub fn integrate_oscillatory_tail<F>(
    f: F,
    a: f64,
    half_period: f64,
    spec: &QuadratureSpec,
) -> IntegralResult
where
    F: Fn(f64) -> f64,
{
    debug_assert!(half_period > 0.0, "half-period must be positive");
    let mut k: usize = 0;
    integrate_oscillatory_tail_with_edges(
        f,
        move || {
            let edge = a + k as f64 * half_period;
            k += 1;
            edge
        },
        spec,
    )
}

/// As [`integrate_oscillatory_tail`], with segment boundaries supplied
/// by `next_edge` (first call returns the lower limit; the sequence must
/// be strictly increasing). Alignment of edges with the integrand's sign
/// flips is the caller's lever for hard tails.
pub fn integrate_oscillatory_tail_with_edges<F>(
    f: F,
    mut next_edge: impl FnMut() -> f64,
    spec: &QuadratureSpec,
) -> IntegralResult
where
    F: Fn(f64) -> f64,
{
    let mut terms: Vec<f64> = Vec::new();
    let mut quad_error = 0.0f64;
    let mut partials: Vec<f64> = Vec::new();
    let mut running = 0.0f64;
    let mut evaluations = 0usize;
    let mut lo = next_edge();
    let start = lo;

    // (value, accel error) of the deepest batch; deeper batches see more
    // of the envelope, so the latest estimate is the one to keep
    let mut best = (0.0f64, f64::INFINITY);
    let mut batch_target = 16usize;
    let mut prev_estimate: Option<f64> = None;

    loop {
        while terms.len() < batch_target {
            let hi = next_edge();
            debug_assert!(hi > lo, "tail edges must increase: {lo} .. {hi}");
            let r = qk21(&f, lo, hi);
            lo = hi;
            evaluations += 1;
            terms.push(r.value);
            quad_error += r.abs_error;
            running += r.value;
            partials.push(running);
        }

        // the averaging spread alone is over-optimistic at shallow
        // depth; agreement across batch doublings is the honest signal
        let (value, spread) = average_partials(&partials);
        let step_err = prev_estimate.map_or(f64::INFINITY, |p| (value - p).abs());
        prev_estimate = Some(value);
        best = (value, spread.max(step_err));
        let tol = spec.tolerance_for(best.0).max(spec.abs_tol);
        if best.1 + quad_error <= tol || batch_target >= MAX_CYCLES {
            break;
        }
        batch_target = (batch_target * 2).min(MAX_CYCLES);
    }

    let mut diagnostics = Vec::new();
    if !alternates(&terms) {
        // not an alternating tail: acceleration is meaningless, fall
        // back to a plain truncated sum
        let (value, error, used) = match spec.effective_cutoff() {
            Some(lambda) if lambda > start => {
                let r = super::integrate_adaptive(&f, start, lambda, spec);
                diagnostics.push(Diagnostic::warning(
                    DiagnosticCode::NonAlternatingTail,
                    format!(
                        "tail segments do not alternate in sign; truncated at the cutoff {lambda:.6e}"
                    ),
                ));
                diagnostics.extend(r.diagnostics);
                (r.value, r.error_estimate, r.segments_used)
            }
            _ => {
                diagnostics.push(Diagnostic::warning(
                    DiagnosticCode::NonAlternatingTail,
                    format!(
                        "tail segments do not alternate in sign and no cutoff is set; plain sum of {} segments",
                        terms.len()
                    ),
                ));
                let last = terms.last().copied().unwrap_or(0.0).abs();
                (running, quad_error + last, evaluations)
            }
        };
        return IntegralResult::new(value, error, used).with_diagnostics(diagnostics);
    }

    let tol = spec.tolerance_for(best.0);
    if best.1 + quad_error > tol {
        diagnostics.push(Diagnostic::warning(
            DiagnosticCode::MaxSegmentsExhausted,
            format!(
                "tail acceleration stalled at error estimate {:.3e} after {} segments",
                best.1 + quad_error,
                terms.len()
            ),
        ));
    }
    IntegralResult::new(best.0, best.1 + quad_error, evaluations).with_diagnostics(diagnostics)
}

/// One full iterated-averaging reduction of the trailing partial sums.
/// Returns the deepest value and the spread of the last averaging step.
fn average_partials(partials: &[f64]) -> (f64, f64) {
    let n = partials.len().min(TABLE_WIDTH);
    let mut row: Vec<f64> = partials[partials.len() - n..].to_vec();
    if row.len() == 1 {
        return (row[0], f64::INFINITY);
    }
    let mut last_spread = f64::INFINITY;
    while row.len() > 1 {
        last_spread = (row[row.len() - 1] - row[0]).abs();
        for k in 0..row.len() - 1 {
            row[k] = 0.5 * (row[k] + row[k + 1]);
        }
        row.pop();
    }
    (row[0], last_spread.max(f64::EPSILON * row[0].abs()))
}

/// Checks that the trailing terms alternate in sign. Leading segments may
/// still contain non-asymptotic structure, so the first quarter is
/// preferred-skipped; negligible terms (relative to the largest) are
/// wildcards. If everything after the first quarter is negligible (a
/// fast-decaying integrand), the early terms are examined instead.
fn alternates(terms: &[f64]) -> bool {
    if terms.len() < 4 {
        return true;
    }
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if scale == 0.0 {
        return true;
    }
    let check = |window: &[f64]| -> Option<bool> {
        let mut prev: Option<f64> = None;
        let mut compared = false;
        for &t in window {
            if t.abs() < 1e-13 * scale {
                prev = None;
                continue;
            }
            if let Some(p) = prev {
                compared = true;
                if p * t > 0.0 {
                    return Some(false);
                }
            }
            prev = Some(t);
        }
        compared.then_some(true)
    };
    let start = terms.len() / 4;
    check(&terms[start..])
        .or_else(|| check(&terms[1..start]))
        .unwrap_or(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_adaptive, QuadratureSpec};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: 1e-10,
            ..QuadratureSpec::default()
        }
    }

    #[test]
    fn sinc_integral_split_at_one() {
        // ∫_0^∞ sin x / x dx = π/2
        let head = integrate_adaptive(|x: f64| x.sin() / x, 1e-300, 1.0, &spec());
        let tail = integrate_oscillatory_tail(|x: f64| x.sin() / x, 1.0, PI, &spec());
        let total = head.combine(tail);
        assert_relative_eq!(total.value, PI / 2.0, max_relative = 1e-8);
    }

    #[test]
    fn damped_cosine_has_closed_form() {
        // ∫_0^∞ cos x/(1+x²) dx = (π/2) e⁻¹
        let f = |x: f64| x.cos() / (1.0 + x * x);
        let head = integrate_adaptive(f, 0.0, 2.0, &spec());
        let tail = integrate_oscillatory_tail(f, 2.0, PI, &spec());
        let total = head.combine(tail);
        assert_relative_eq!(total.value, 0.5778636748954609, max_relative = 1e-9);
    }

    #[test]
    fn quadratically_damped_sine_matches_truncation_oracle() {
        // ∫_π^∞ sin x / x² dx against a brute-force high-cutoff truncation
        let f = |x: f64| x.sin() / (x * x);
        let accelerated = integrate_oscillatory_tail(f, PI, PI, &spec());
        let oracle = integrate_adaptive(f, PI, 4e4 * PI, &spec());
        // truncation at X leaves an O(1/X²) remainder ≈ 6e-11 here
        assert_relative_eq!(accelerated.value, oracle.value, max_relative = 1e-5);
        assert!(accelerated.segments_used < 200);
    }

    #[test]
    fn aligned_edges_absorb_phase_drift() {
        // integrand cos(2ω + φ(ω))·c/ω with a slowly drifting phase
        // φ(ω) = 2 atan(ω/Ω): fixed spacing stalls, aligned edges do not
        let omega_big = 100.0;
        let f = move |w: f64| {
            (2.0 * w + 2.0 * (w / omega_big).atan()).cos() * omega_big / w
        };
        let theta = |w: f64| 2.0 * w + 2.0 * (w / omega_big).atan();
        let a = 2000.0;
        let theta0 = theta(a);
        let mut k = 0usize;
        let aligned = integrate_oscillatory_tail_with_edges(
            f,
            move || {
                // Newton solve θ(ω) = θ0 + kπ
                let target = theta0 + k as f64 * PI;
                k += 1;
                let mut w = a + (target - theta0) / 2.0;
                for _ in 0..4 {
                    let rate = 2.0 + 2.0 * omega_big / (omega_big * omega_big + w * w);
                    w -= (theta(w) - target) / rate;
                }
                w
            },
            &spec(),
        );
        // reference: adaptive truncation far out plus the same routine
        // one window later must telescope
        let window = integrate_adaptive(f, 2000.0, 2200.0, &spec());
        let mut k2 = 0usize;
        let theta1 = theta(2200.0);
        let aligned_later = integrate_oscillatory_tail_with_edges(
            f,
            move || {
                let target = theta1 + k2 as f64 * PI;
                k2 += 1;
                let mut w = 2200.0 + (target - theta1) / 2.0;
                for _ in 0..4 {
                    let rate = 2.0 + 2.0 * omega_big / (omega_big * omega_big + w * w);
                    w -= (theta(w) - target) / rate;
                }
                w
            },
            &spec(),
        );
        assert!(aligned.error_estimate < 1e-9, "stalled: {:?}", aligned.error_estimate);
        assert_relative_eq!(
            aligned.value - aligned_later.value,
            window.value,
            max_relative = 1e-8
        );
    }

    #[test]
    fn non_alternating_tail_is_diagnosed_and_truncated() {
        // strictly positive integrand: not oscillatory at all
        let f = |x: f64| (-x).exp();
        let with_cutoff = QuadratureSpec {
            uv_cutoff: 40.0,
            ..spec()
        };
        let r = integrate_oscillatory_tail(f, 0.0, 1.0, &with_cutoff);
        assert!(r
            .diagnostics
            .iter()
            .any(|d| d.code == DiagnosticCode::NonAlternatingTail));
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn deterministic_across_runs() {
        let f = |x: f64| (2.0 * x).cos() / x;
        let a = integrate_oscillatory_tail(f, 5.0, PI / 2.0, &spec());
        let b = integrate_oscillatory_tail(f, 5.0, PI / 2.0, &spec());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
