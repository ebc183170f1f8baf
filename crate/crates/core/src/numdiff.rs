//! Richardson-refined numerical differentiation.
//!
//! The driver works on a difference *quotient* D(h) supplied by the
//! caller (central first difference, second difference, one-sided at a
//! boundary, ...). For symmetric quotients the error expands in even
//! powers of h, so each Neville column cancels another power of h². The
//! tableau is walked until the estimate stabilizes or roundoff takes
//! over, and the last column-to-column change is reported as the error
//! estimate.

/// Outcome of a Richardson refinement.
#[derive(Debug, Clone, Copy)]
pub struct DerivativeEstimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

const MAX_LEVELS: usize = 12;

/// Richardson-extrapolates a symmetric difference quotient toward h → 0,
/// starting from step `h0` and halving. Returns the best estimate and its
/// error estimate.
pub fn central_derivative(quotient: impl Fn(f64) -> f64, h0: f64) -> (f64, f64) {
    let e = refine(quotient, h0, 0.0);
    (e.value, e.error)
}

/// As [`central_derivative`], refining until the error estimate drops
/// below `tol` (or roundoff wins first, reported via `converged`).
pub fn refine(quotient: impl Fn(f64) -> f64, h0: f64, tol: f64) -> DerivativeEstimate {
    debug_assert!(h0 > 0.0);
    let mut tableau = [[0.0f64; MAX_LEVELS]; MAX_LEVELS];
    let mut best = quotient(h0);
    let mut best_err = f64::INFINITY;
    tableau[0][0] = best;

    let mut h = h0;
    for i in 1..MAX_LEVELS {
        h *= 0.5;
        tableau[i][0] = quotient(h);
        let mut pow4 = 1.0;
        for j in 1..=i {
            pow4 *= 4.0;
            tableau[i][j] =
                (pow4 * tableau[i][j - 1] - tableau[i - 1][j - 1]) / (pow4 - 1.0);
        }
        let err = (tableau[i][i] - tableau[i - 1][i - 1])
            .abs()
            .max((tableau[i][i] - tableau[i][i - 1]).abs());
        if err <= best_err {
            best = tableau[i][i];
            best_err = err;
            if tol > 0.0 && err <= tol {
                return DerivativeEstimate {
                    value: best,
                    error: err,
                    converged: true,
                };
            }
        } else if err > 4.0 * best_err {
            // roundoff regime: further halving only adds noise
            break;
        }
    }
    DerivativeEstimate {
        value: best,
        error: best_err,
        converged: tol <= 0.0 || best_err <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn differentiates_smooth_functions_to_near_machine_precision() {
        let f = |x: f64| x.sin() * x.exp();
        let df = |x: f64| x.exp() * (x.sin() + x.cos());
        for x in [0.3, 1.7, -2.0] {
            let (d, err) = central_derivative(|h| (f(x + h) - f(x - h)) / (2.0 * h), 0.1);
            assert_relative_eq!(d, df(x), max_relative = 1e-11);
            assert!((d - df(x)).abs() <= 10.0 * err.max(1e-14));
        }
    }

    #[test]
    fn second_difference_quotient_works_too() {
        let f = |x: f64| (2.0 * x).cos();
        let x = 0.8;
        let (d2, _) = central_derivative(
            |h| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
            0.05,
        );
        assert_relative_eq!(d2, -4.0 * (2.0 * x).cos(), max_relative = 1e-9);
    }

    #[test]
    fn reports_convergence_against_tolerance() {
        let f = |x: f64| x * x * x;
        let est = refine(|h| (f(1.0 + h) - f(1.0 - h)) / (2.0 * h), 0.2, 1e-10);
        assert!(est.converged);
        assert_relative_eq!(est.value, 3.0, max_relative = 1e-10);
    }
}
