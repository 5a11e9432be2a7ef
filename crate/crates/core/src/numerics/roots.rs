use crate::error::{Error, Result};

/// Safeguarded Newton iteration for an increasing function on `[lo, hi]`.
///
/// `f` returns `(value, derivative)`; the root must be bracketed, i.e. the value is
/// `<= 0` at `lo` and `>= 0` at `hi` (endpoints are never evaluated). Steps that
/// leave the current bracket fall back to bisection, geometric when the bracket
/// spans several decades.
pub(crate) fn solve_increasing<F>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    start: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let mut x = if start > lo && start < hi {
        start
    } else {
        bisect_point(lo, hi)
    };
    for _ in 0..max_iter {
        let (v, dv) = f(x);
        if v == 0.0 {
            return Ok(x);
        }
        if v.is_nan() {
            return Err(Error::Convergence {
                routine: "bracketed Newton",
                estimate: x,
                error_bound: hi - lo,
            });
        }
        if v < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - v / dv;
        let next = if dv > 0.0 && dv.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            bisect_point(lo, hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= abs_tol + rel_tol * x.abs() || hi - lo <= abs_tol + rel_tol * x.abs() {
            return Ok(x);
        }
    }
    Err(Error::Convergence {
        routine: "bracketed Newton",
        estimate: x,
        error_bound: hi - lo,
    })
}

fn bisect_point(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 && hi.is_finite() && hi / lo > 16.0 {
        (lo * hi).sqrt()
    } else if lo.is_finite() && hi.is_finite() {
        0.5 * (lo + hi)
    } else if lo.is_finite() {
        lo.abs().max(1.0) * 2.0 + lo
    } else {
        hi - hi.abs().max(1.0) * 2.0
    }
}
