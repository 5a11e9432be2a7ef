//! The two constants that recur in the expansion: the κ series and the integral `I(α, ĉ)`.

use super::quadrature::{integrate, QuadratureSpec, Singularities};
use crate::error::{domain, Error, Result};

const MAX_TERMS: usize = 1_000_000;
const SMALL_RUN: usize = 3;

/// `Σ_{j≥0} Γ(α+j)/(Γ(α)Γ(j+1)) · α ĉ^j/(j−α)` for non-integer `α` and `0 < ĉ < 1`.
///
/// Summation stops after three consecutive terms below `tol·max(1, |partial sum|)`.
pub fn kappa_series(alpha: f64, c_tilde: f64, tol: f64) -> Result<f64> {
    if !(alpha > 0.0) || (alpha - alpha.round()).abs() < 1e-9 {
        return domain(format!("kappa series needs a positive non-integer alpha, got {alpha}"));
    }
    if !(c_tilde > 0.0 && c_tilde < 1.0) {
        return domain(format!("kappa series needs c_tilde in (0,1), got {c_tilde}"));
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let mut term: f64 = -1.0;
    let mut sum: f64 = 0.0;
    let mut run = 0;
    for j in 0..MAX_TERMS {
        sum += term;
        if term.abs() < tol * sum.abs().max(1.0) {
            run += 1;
            if run >= SMALL_RUN {
                return Ok(sum);
            }
        } else {
            run = 0;
        }
        let jf = j as f64;
        term *= (alpha + jf) / (jf + 1.0) * c_tilde * (jf - alpha) / (jf + 1.0 - alpha);
    }
    Err(Error::Convergence {
        routine: "kappa series",
        estimate: sum,
        error_bound: term.abs(),
    })
}

/// `∫_0^{upper} u^{−α}(1−u)^{−(α+1)} du` for `0 < α < 1`, `0 < upper < 1`.
pub fn integral_i(alpha: f64, upper: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("integral I needs alpha in (0,1), got {alpha}"));
    }
    if !(upper >= 0.0 && upper < 1.0) {
        return domain(format!("integral I needs upper limit in [0,1), got {upper}"));
    }
    if upper == 0.0 {
        return Ok(0.0);
    }
    integrate(
        |u| (-alpha * u.ln() - (alpha + 1.0) * (-u).ln_1p()).exp(),
        0.0,
        upper,
        spec,
        Singularities::left(alpha),
    )
}
