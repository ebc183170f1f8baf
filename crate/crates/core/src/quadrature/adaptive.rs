//! Globally adaptive Gauss-Kronrod subdivision.

use std::collections::BinaryHeap;

use super::gauss_kronrod::qk21;
use super::{IntegralResult, QuadratureSpec};
use crate::diagnostics::{Diagnostic, DiagnosticCode};

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Monotone insertion counter; breaks error ties deterministically.
    seq: u64,
}

impl Segment {
    /// Error contribution used in totals; the non-finite sentinel is
    /// replaced by the segment width so it cannot poison sums.
    fn budget_error(&self) -> f64 {
        if self.error == f64::MAX {
            self.b - self.a
        } else {
            self.error
        }
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Segment {}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap on error; older segments first among equals
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn width_floor(a: f64, b: f64) -> f64 {
    100.0 * f64::EPSILON * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

#[derive(Default)]
struct Workspace {
    heap: BinaryHeap<Segment>,
    /// Segments at the subdivision width floor; they keep contributing
    /// but are never split again.
    frozen: Vec<Segment>,
    seq: u64,
    count: usize,
    total_value: f64,
    total_error: f64,
    saw_non_finite: bool,
}

impl Workspace {
    fn push<F: Fn(f64) -> f64>(&mut self, f: &F, lo: f64, hi: f64) {
        let r = qk21(f, lo, hi);
        self.count += 1;
        let (value, error) = if r.value.is_finite() {
            (r.value, r.abs_error)
        } else {
            // force the bad region to the top of the heap so refinement
            // shrinks it; it contributes nothing until it becomes finite
            self.saw_non_finite = true;
            (0.0, f64::MAX)
        };
        let seg = Segment {
            a: lo,
            b: hi,
            value,
            error,
            seq: self.seq,
        };
        self.seq += 1;
        self.total_value += seg.value;
        self.total_error += seg.budget_error();
        if hi - lo > width_floor(lo, hi) {
            self.heap.push(seg);
        } else {
            self.frozen.push(seg);
        }
    }

    fn pop(&mut self) -> Option<Segment> {
        let seg = self.heap.pop()?;
        self.total_value -= seg.value;
        self.total_error -= seg.budget_error();
        Some(seg)
    }
}

/// Integrates `f` over `[a, b]` by bisecting whichever segment currently
/// carries the largest error estimate, until the summed estimates meet
/// the tolerance or the segment budget runs out.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> IntegralResult
where
    F: Fn(f64) -> f64,
{
    integrate_adaptive_with_markers(f, a, b, &[], spec)
}

/// As [`integrate_adaptive`], but seeds the initial segmentation with
/// breakpoints (resonance positions, kinks, thermal scales...). Markers
/// outside `(a, b)` are ignored.
pub fn integrate_adaptive_with_markers<F>(
    f: F,
    a: f64,
    b: f64,
    markers: &[f64],
    spec: &QuadratureSpec,
) -> IntegralResult
where
    F: Fn(f64) -> f64,
{
    debug_assert!(a < b, "integration bounds must be ordered: {a} .. {b}");
    let mut diagnostics = Vec::new();

    let mut edges: Vec<f64> = Vec::with_capacity(markers.len() + 2);
    edges.push(a);
    let mut sorted: Vec<f64> = markers
        .iter()
        .copied()
        .filter(|m| m.is_finite() && *m > a && *m < b)
        .collect();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    edges.extend(sorted);
    edges.push(b);

    let mut ws = Workspace::default();
    for w in edges.windows(2) {
        ws.push(&f, w[0], w[1]);
    }

    loop {
        if ws.total_error <= spec.tolerance_for(ws.total_value) {
            break;
        }
        if ws.count + 2 > spec.max_segments {
            diagnostics.push(Diagnostic::warning(
                DiagnosticCode::MaxSegmentsExhausted,
                format!(
                    "segment budget {} exhausted with error estimate {:.3e} above tolerance {:.3e}",
                    spec.max_segments,
                    ws.total_error,
                    spec.tolerance_for(ws.total_value)
                ),
            ));
            break;
        }
        let Some(worst) = ws.pop() else {
            // everything frozen at the width floor (pole-like feature)
            diagnostics.push(Diagnostic::warning(
                DiagnosticCode::MaxSegmentsExhausted,
                "all segments at the subdivision width floor before reaching tolerance".to_string(),
            ));
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        ws.push(&f, worst.a, mid);
        ws.push(&f, mid, worst.b);
    }

    // deterministic reduction in interval order
    let mut all: Vec<Segment> = ws.heap.into_vec();
    all.extend(ws.frozen);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = all.iter().map(|s| s.value).sum();
    let error: f64 = all.iter().map(|s| s.budget_error()).sum();

    if !value.is_finite() {
        diagnostics.push(Diagnostic::error(
            DiagnosticCode::NonFiniteValue,
            "integral value is not finite".to_string(),
        ));
    }
    if ws.saw_non_finite {
        diagnostics.push(Diagnostic::error(
            DiagnosticCode::NonFiniteValue,
            "integrand produced non-finite samples; affected segments contribute zero".to_string(),
        ));
    }

    IntegralResult::new(value, error, all.len()).with_diagnostics(diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureSpec;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn integrates_identity() {
        let r = integrate_adaptive(|x| x, 0.0, 1.0, &spec());
        assert_relative_eq!(r.value, 0.5, epsilon = 1e-12);
        assert!(r.diagnostics.is_empty());
    }

    #[test]
    fn lorentzian_on_a_long_interval() {
        // ∫_0^1000 1/(1+x²) dx = atan(1000)
        let r = integrate_adaptive(|x| 1.0 / (1.0 + x * x), 0.0, 1e3, &spec());
        assert_relative_eq!(r.value, 1.5697963271282298, max_relative = 1e-10);
        assert!((r.value - 1.5697963271282298).abs() <= 3.0 * r.error_estimate.max(1e-15));
    }

    #[test]
    fn narrow_resonance_against_riemann_oracle() {
        // width-1e-3 peak at π on [0, 10]; oracle is a 10⁶-point midpoint sum
        let eps = 1e-3;
        let f = |x: f64| eps / ((x - std::f64::consts::PI).powi(2) + eps * eps) + x.sin().powi(2);
        let n = 1_000_000usize;
        let h = 10.0 / n as f64;
        let oracle: f64 = (0..n).map(|k| f((k as f64 + 0.5) * h) * h).sum();

        let tols = QuadratureSpec {
            rel_tol: 1e-9,
            ..spec()
        };
        let r = integrate_adaptive_with_markers(f, 0.0, 10.0, &[std::f64::consts::PI], &tols);
        // the midpoint oracle itself is good to ~1e-7 relative here
        assert_relative_eq!(r.value, oracle, max_relative = 1e-6);
    }

    #[test]
    fn budget_exhaustion_is_diagnosed_not_fatal() {
        let tight = QuadratureSpec {
            rel_tol: 1e-14,
            max_segments: 8,
            ..spec()
        };
        let r = integrate_adaptive(|x: f64| (40.0 * x).sin().abs(), 0.0, 7.0, &tight);
        assert!(r
            .diagnostics
            .iter()
            .any(|d| d.code == DiagnosticCode::MaxSegmentsExhausted));
        assert!(r.value.is_finite());
    }

    #[test]
    fn deterministic_across_runs() {
        let f = |x: f64| (x * 13.7).sin() / (1.0 + x * x);
        let a = integrate_adaptive(f, 0.0, 50.0, &spec());
        let b = integrate_adaptive(f, 0.0, 50.0, &spec());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
    }

    #[test]
    fn integrable_endpoint_singularity() {
        // ∫_0^1 ln x dx = -1
        let r = integrate_adaptive(|x: f64| x.ln(), 0.0, 1.0, &spec());
        assert_relative_eq!(r.value, -1.0, max_relative = 1e-8);
    }

    #[test]
    fn markers_outside_range_are_ignored() {
        let r = integrate_adaptive_with_markers(|x| x * x, 0.0, 1.0, &[-3.0, 0.5, 7.0], &spec());
        assert_relative_eq!(r.value, 1.0 / 3.0, epsilon = 1e-12);
    }
}
