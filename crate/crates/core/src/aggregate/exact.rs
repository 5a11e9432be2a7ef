//! Quadrature oracles for two risks and order-statistic means.

use super::WeightScheme;
use crate::distributions::TailModel;
use crate::error::{domain, Error, Result};
use crate::numerics::{integrate, integrate_log, ln_beta, QuadratureSpec, Singularities};

fn require_n2(w: &WeightScheme) -> Result<()> {
    if w.n() != 2 {
        return Err(Error::Method(format!(
            "the exact two-risk oracle needs n = 2, got n = {}",
            w.n()
        )));
    }
    Ok(())
}

/// `P(S_2(c) > x)` by one-dimensional quadrature.
///
/// With `x' = x/c1`, `c = c2/c1` and the kink `u* = x'/(1+c)`:
/// `P = F̄(u*)² + 2∫_{q*}^{1} F̄(x' − c·F̄^←(q)) dq`, `q* = F̄(u*)`,
/// i.e. the smaller risk is integrated on its quantile scale up to the kink.
pub fn exact_tail_n2(model: &TailModel, w: &WeightScheme, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    require_n2(w)?;
    let xp = x / w.c1();
    let c = w.c2();
    let u_star = xp / (1.0 + c);
    if u_star <= model.support_min() {
        return Ok(1.0);
    }
    let q_star = model.survival(u_star);
    if q_star <= 0.0 {
        return Ok(0.0);
    }
    let f = |q: f64| {
        if q >= 1.0 {
            return model.survival(xp - c * model.support_min().max(-1e300));
        }
        let u = model.upper_quantile_unchecked(q).unwrap_or(f64::NAN);
        model.survival(xp - c * u)
    };
    Ok(q_star * q_star + 2.0 * integrate_log(f, q_star, 1.0, spec)?)
}

/// `E max(S_2(c) − d, 0) = ∫_d^∞ P(S_2(c) > s) ds` by nested quadrature (`s = d/v`).
pub fn exact_stop_loss_n2(model: &TailModel, w: &WeightScheme, d: f64, spec: &QuadratureSpec) -> Result<f64> {
    require_n2(w)?;
    let alpha = model.alpha();
    if alpha <= 1.0 {
        return domain(format!("stop-loss needs alpha > 1, got {alpha}"));
    }
    if !(d > 0.0) {
        return domain(format!("retention must be positive, got {d}"));
    }
    let inner = QuadratureSpec {
        abs_tol: spec.abs_tol * 1e-3,
        ..*spec
    };
    let failed = std::cell::Cell::new(None);
    let g = |v: f64| {
        if v <= 1e-300 {
            return 0.0;
        }
        match exact_tail_n2(model, w, d / v, &inner) {
            Ok(p) => p * d / (v * v),
            Err(e) => {
                failed.set(Some(e));
                f64::NAN
            }
        }
    };
    // integrand ~ v^{α−2} near 0
    let ends = Singularities::left((2.0 - alpha).max(0.0));
    let r = integrate(g, 0.0, 1.0, spec, ends);
    match failed.into_inner() {
        Some(e) => Err(e),
        None => r,
    }
}

/// Mean of the `r`-th largest of `m` iid draws:
/// `∫_0^1 F̄^←(q) q^{r−1}(1−q)^{m−r} dq / B(r, m−r+1)`.
pub fn order_statistic_mean(model: &TailModel, r: usize, m: usize, spec: &QuadratureSpec) -> Result<f64> {
    if !(1 <= r && r <= m) {
        return domain(format!("order statistic rank {r} outside 1..={m}"));
    }
    // P(X_(r) > x) ~ C(m, r) F̄(x)^r, so the mean is finite iff rα > 1
    if r as f64 * model.alpha() <= 1.0 {
        return Err(Error::InfiniteMoment {
            order: 1.0,
            alpha: r as f64 * model.alpha(),
        });
    }
    let (rf, mf) = (r as f64, m as f64);
    let lb = ln_beta(rf, mf - rf + 1.0)?;
    let f = |q: f64| {
        if q <= 1e-290 || q >= 1.0 {
            return 0.0;
        }
        let x = model.upper_quantile_unchecked(q).unwrap_or(f64::NAN);
        x * ((rf - 1.0) * q.ln() + (mf - rf) * (-q).ln_1p() - lb).exp()
    };
    // near q = 0 the integrand behaves like q^{r−1−1/α}
    let order = (1.0 / model.alpha() - (rf - 1.0)).max(0.0);
    let upper = integrate(&f, 0.0, 0.5, spec, Singularities::left(order))?;
    let lower_ends = if model.support_min().is_finite() {
        Singularities::NONE
    } else {
        Singularities::right(1.0 / model.alpha())
    };
    Ok(upper + integrate(&f, 0.5, 1.0, spec, lower_ends)?)
}

/// `ε*(x)` with `P(S_2(c) > x) = 2F̄(x)(1 + ε*(x))` for the standard Pareto law and `c = (1, c2)`.
pub fn pareto_exact_eps(alpha: f64, c2: f64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(alpha > 0.0 && c2 > 0.0) {
        return domain(format!("need alpha > 0 and c2 > 0, got {alpha}, {c2}"));
    }
    if !(x > 1.0 + c2) {
        return domain(format!("need x > 1 + c2 = {}, got {x}", 1.0 + c2));
    }
    let ct = c2 / (1.0 + c2);
    let sf2 = |y: f64| (y / c2).powf(-alpha).min(1.0);
    let integral = integrate(
        |u| (-alpha * u.ln() - (alpha + 1.0) * (-u).ln_1p()).exp(),
        c2 / x,
        ct,
        spec,
        Singularities::NONE,
    )?;
    Ok(((1.0 + c2).powf(alpha) / 2.0 - 1.0) * sf2(ct * x)
        + ((-c2 / x).ln_1p() * -alpha).exp_m1()
        + (ct.powf(-alpha) * (1.0 - (1.0 - ct).powf(-alpha)) + alpha * integral) * sf2(x))
}
