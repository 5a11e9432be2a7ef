//! Risk measures of `S_n(c)`: ε(p), VaR/CTE concentrations, TVaR/VaR and TCTE/CTE ratios,
//! stop-loss and ROC-based reinsurance premiums.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::expansion::{AStarMode, ExpansionContext, RHO_TOL};
use crate::aggregate::MuMode;

/// Risk measure underlying a concentration or premium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Var,
    Cte,
}

/// A level `p`, optional ROC level `τ` and measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskQuery {
    pub p: f64,
    pub tau: Option<f64>,
    pub measure: Measure,
}

impl RiskQuery {
    pub fn validate(&self, alpha: f64) -> Result<()> {
        check_level(self.p)?;
        if let Some(t) = self.tau {
            if !(t > 0.0 && t < 1.0) {
                return domain(format!("tau must lie in (0,1), got {t}"));
            }
        }
        if (self.measure == Measure::Cte || self.tau.is_some()) && alpha <= 1.0 {
            return domain(format!("this query needs alpha > 1, got {alpha}"));
        }
        Ok(())
    }
}

fn check_level(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        domain(format!("level p must lie in (0,1), got {p}"))
    }
}

fn need_finite_mean(ctx: &ExpansionContext, what: &str) -> Result<f64> {
    let alpha = ctx.model().alpha();
    if alpha <= 1.0 {
        return domain(format!("{what} needs alpha > 1, got {alpha}"));
    }
    Ok(alpha)
}

fn is_edge(rho: f64, edge: f64) -> bool {
    (rho - edge).abs() <= RHO_TOL
}

/// `c1 n^{1/α−1}`, the first-order concentration.
pub fn first_order_concentration(ctx: &ExpansionContext) -> f64 {
    let n = ctx.n() as f64;
    ctx.weights().c1() * n.powf(1.0 / ctx.model().alpha() - 1.0)
}

/// The second-order term `ε(p)` of the concentrations, at the exact quantile `F^←(p)`.
pub fn eps_p(ctx: &ExpansionContext, p: f64) -> Result<f64> {
    check_level(p)?;
    let model = ctx.model();
    let (alpha, rho) = (model.alpha(), model.rho());
    let n = ctx.n() as f64;
    let x = model.quantile(p)?;
    let a = model.aux_a_or_zero(x)?;
    if rho > -ctx.alpha_star() {
        let factor = if rho == 0.0 {
            n.ln() / alpha
        } else {
            (n.powf(rho / alpha) - 1.0) / (alpha * rho)
        };
        return Ok(factor * a);
    }
    if alpha < 1.0 {
        let phi = ctx.phi_alpha().unwrap_or(0.0);
        let edge = if is_edge(rho, -alpha) { a } else { 0.0 };
        return Ok((1.0 - 1.0 / n) * (phi / (2.0 * alpha) * (1.0 - p) + edge / (alpha * alpha)));
    }
    let mu = ctx.sub().mu_f(x, MuMode::Asymptotic)?;
    let edge = if is_edge(rho, -1.0) { a } else { 0.0 };
    Ok(mu / n.powf(1.0 / alpha) + (1.0 - n.powf(-1.0 / alpha)) / alpha * edge)
}

/// `C_VaR(p) = c1 n^{1/α−1}(1 + ε(p))`.
pub fn c_var(ctx: &ExpansionContext, p: f64) -> Result<f64> {
    Ok(first_order_concentration(ctx) * (1.0 + eps_p(ctx, p)?))
}

/// `C_CTE(p) = c1 n^{1/α−1}(1 + (α−1)/(α−1−max(−1,ρ)) ε(p))`.
pub fn c_cte(ctx: &ExpansionContext, p: f64) -> Result<f64> {
    let alpha = need_finite_mean(ctx, "C_CTE")?;
    let m = ctx.model().rho().max(-1.0);
    Ok(first_order_concentration(ctx) * (1.0 + (alpha - 1.0) / (alpha - 1.0 - m) * eps_p(ctx, p)?))
}

/// `A(F^←(p))`, `ρ` and `max(ρ, −1)`.
fn second_order_inputs(ctx: &ExpansionContext, p: f64) -> Result<(f64, f64, f64)> {
    let model = ctx.model();
    let a = model.aux_a_or_zero(model.quantile(p)?)?;
    let rho = model.rho();
    Ok((a, rho, rho.max(-1.0)))
}

/// `A/(α(α−1−ρ))`, zero when there is no second-order term.
fn a_over(a: f64, alpha: f64, rho: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a / (alpha * (alpha - 1.0 - rho))
    }
}

/// `R_VaR(p) = α/(α−1)(1 + A/(α(α−1−ρ)) + m/(α−1−m) ε(p))`, `m = max(ρ,−1)`.
pub fn r_var(ctx: &ExpansionContext, p: f64) -> Result<f64> {
    let alpha = need_finite_mean(ctx, "R_VaR")?;
    let (a, rho, m) = second_order_inputs(ctx, p)?;
    let eps = eps_p(ctx, p)?;
    Ok(alpha / (alpha - 1.0) * (1.0 + a_over(a, alpha, rho) + m / (alpha - 1.0 - m) * eps))
}

/// `R_CTE(p) = α/(α−1) + A/(α−1−ρ)² + α m/(α−1−m)² ε(p)`.
pub fn r_cte(ctx: &ExpansionContext, p: f64) -> Result<f64> {
    let alpha = need_finite_mean(ctx, "R_CTE")?;
    let (a, rho, m) = second_order_inputs(ctx, p)?;
    let eps = eps_p(ctx, p)?;
    let a_term = if a == 0.0 { 0.0 } else { a / (alpha - 1.0 - rho).powi(2) };
    Ok(alpha / (alpha - 1.0) + a_term + alpha * m / (alpha - 1.0 - m).powi(2) * eps)
}

/// `E max(S_n(c) − d, 0) ≈ (n d/(α−1)) F̄(d')(1 + E(d') + A*(d')/(α−1−ρ*))`, `d' = d/c1`.
///
/// `A*` is evaluated in its exact form with the context's `F_n` method.
pub fn stop_loss(ctx: &ExpansionContext, d: f64) -> Result<f64> {
    let alpha = need_finite_mean(ctx, "the stop-loss premium")?;
    if !(d > 0.0) {
        return domain(format!("retention must be positive, got {d}"));
    }
    let dp = d / ctx.weights().c1();
    let n = ctx.n() as f64;
    let lead = n * d / (alpha - 1.0) * ctx.model().survival(dp);
    let a_star = ctx.aux_a_star(dp, AStarMode::ExactForm)?;
    Ok(lead * (1.0 + ctx.eps_x(dp)? + a_star / (alpha - 1.0 - ctx.rho_star())))
}

/// Leading term `n d F̄(d/c1)/(α−1)`.
pub fn stop_loss_first_order(ctx: &ExpansionContext, d: f64) -> Result<f64> {
    let alpha = need_finite_mean(ctx, "the stop-loss premium")?;
    Ok(ctx.n() as f64 * d / (alpha - 1.0) * ctx.model().survival(d / ctx.weights().c1()))
}

/// True when `d/c1` lies below the 90% quantile, where the expansion is not meant to be used.
pub fn retention_is_shallow(ctx: &ExpansionContext, d: f64) -> bool {
    ctx.model().survival(d / ctx.weights().c1()) > 0.1
}

/// ROC-based reinsurance premium `P_measure(τ) = K(τ + (1−τ)R_measure(p))` at level `p`,
/// where `K` is the capital `n·measure_p(X)·C_measure(p)`.
pub fn premium(ctx: &ExpansionContext, p: f64, tau: f64, measure: Measure) -> Result<f64> {
    let alpha = need_finite_mean(ctx, "the ROC premium")?;
    RiskQuery {
        p,
        tau: Some(tau),
        measure,
    }
    .validate(alpha)?;
    let n = ctx.n() as f64;
    let x = ctx.model().quantile(p)?;
    let (a, rho, m) = second_order_inputs(ctx, p)?;
    let eps = eps_p(ctx, p)?;
    let base = (alpha - tau) / (alpha - 1.0);
    Ok(match measure {
        Measure::Var => {
            let corr = a_over(a, alpha, rho) + m / (alpha - 1.0 - m) * eps;
            n * x * c_var(ctx, p)? * (base + alpha * (1.0 - tau) / (alpha - 1.0) * corr)
        }
        Measure::Cte => {
            let a_term = if a == 0.0 { 0.0 } else { a / (alpha - 1.0 - rho).powi(2) };
            let corr = a_term + alpha * m / (alpha - 1.0 - m).powi(2) * eps;
            // CTE_p(X) ≈ F^←(p)·α/(α−1)·(1 + A/(α(α−1−ρ)))
            let cte_x = x * alpha / (alpha - 1.0) * (1.0 + a_over(a, alpha, rho));
            n * cte_x * c_cte(ctx, p)? * (base + (1.0 - tau) * corr)
        }
    })
}

/// Closed-form `ε(p)` for Hall-class models, with `F^←(p) ≈ ((1−p)/k1)^{−1/α}`.
pub fn hall_eps_p(ctx: &ExpansionContext, p: f64) -> Result<f64> {
    check_level(p)?;
    let model = ctx.model();
    let Some(hc) = model.hall() else {
        return domain(format!("{model} is not a Hall-class model"));
    };
    let (alpha, rho) = (model.alpha(), model.rho());
    let n = ctx.n() as f64;
    let q = 1.0 - p;
    let (k1, k2) = (hc.k1, hc.k2);
    if rho > -ctx.alpha_star() {
        return Ok(k2 * (n.powf(rho / alpha) - 1.0) / alpha * (q / k1).powf(-rho / alpha));
    }
    if alpha < 1.0 {
        let phi = ctx.phi_alpha().unwrap_or(0.0);
        let edge = if is_edge(rho, -alpha) { k2 / k1 } else { 0.0 };
        return Ok((1.0 - 1.0 / n) / alpha * (phi / 2.0 - edge) * q);
    }
    if (alpha - 1.0).abs() < 1e-9 {
        let c2 = ctx.weights().c2();
        return Ok(c2 * (1.0 / n - 1.0) * q * q.ln());
    }
    let es = ctx.sub().moment(1)?;
    let edge = if is_edge(rho, -1.0) {
        k2 * (n.powf(-1.0 / alpha) - 1.0) / alpha
    } else {
        0.0
    };
    Ok((es / n.powf(1.0 / alpha) + edge) * (q / k1).powf(1.0 / alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::{FnMethod, WeightScheme};
    use crate::numerics::normal_quantile;

    fn ctx(model: &str, w: &[f64]) -> ExpansionContext {
        ExpansionContext::new(
            &model.parse().unwrap(),
            &WeightScheme::new(w.to_vec()).unwrap(),
            FnMethod::Asymptotic,
        )
        .unwrap()
    }

    #[test]
    fn eps_p_g_and_h_uses_log_n_branch() {
        let c = ctx("g_and_h:g=2,h=0.5", &[1.0, 1.0]);
        for p in [0.99, 0.9999] {
            let want = 2.0 * 2f64.ln() / (0.5 * normal_quantile(p).unwrap());
            assert!((eps_p(&c, p).unwrap() - want).abs() < 1e-9 * want);
        }
    }

    #[test]
    fn eps_p_frechet_half_keeps_only_the_edge_term() {
        let c = ctx("frechet:alpha=0.5", &[1.0, 1.0]);
        let p = 0.999;
        let a = c.model().aux_a(c.model().quantile(p).unwrap()).unwrap();
        assert!((eps_p(&c, p).unwrap() - 0.5 / 0.25 * a).abs() < 1e-9 * a.abs());
    }

    #[test]
    fn c_var_examples() {
        let c = ctx("std_pareto:alpha=2", &[1.0, 1.0]);
        for p in [0.9f64, 0.999] {
            let want = 2f64.powf(-0.5) * (1.0 + 2.0 * 2f64.powf(-0.5) * (1.0 - p).sqrt());
            assert!((c_var(&c, p).unwrap() - want).abs() < 1e-12);
        }
        let c = ctx("g_and_h:g=2,h=0.5", &[0.5, 1.0]);
        assert!((first_order_concentration(&c) - 0.5 * 2f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn c_cte_examples() {
        let c = ctx("burr:a=0.8,b=2.5", &[1.0, 1.0]);
        let p = 0.995;
        let lead = first_order_concentration(&c);
        let half = 0.5 * eps_p(&c, p).unwrap();
        assert!((c_cte(&c, p).unwrap() - lead * (1.0 + half)).abs() < 1e-14);
        let g = ctx("g_and_h:g=2,h=0.5", &[1.0, 1.0]);
        assert!((c_cte(&g, 0.99).unwrap() - c_var(&g, 0.99).unwrap()).abs() < 1e-14);
        let f = ctx("frechet:alpha=0.8", &[1.0, 1.0]);
        assert!(c_cte(&f, 0.99).is_err());
        assert!(r_var(&f, 0.99).is_err());
        assert!(stop_loss(&f, 100.0).is_err());
    }

    #[test]
    fn ratio_corrections_vanish_for_rho_zero_second_term() {
        let c = ctx("g_and_h:g=2,h=0.5", &[1.0, 1.0]);
        let p = 0.99;
        let x = c.model().quantile(p).unwrap();
        let a = c.model().aux_a(x).unwrap();
        assert!((r_cte(&c, p).unwrap() - (2.0 + a)).abs() < 1e-13);
    }

    #[test]
    fn limits_as_p_approaches_one() {
        for m in ["std_pareto:alpha=2", "pareto:alpha=4,theta=1", "burr:a=0.8,b=2.5", "abs_t:v=3"] {
            let c = ctx(m, &[0.7, 1.0]);
            let a = c.model().alpha();
            let p = 1.0 - 1e-12;
            let lead = first_order_concentration(&c);
            assert!((c_var(&c, p).unwrap() / lead - 1.0).abs() < 1e-3, "{m}");
            assert!((c_cte(&c, p).unwrap() / lead - 1.0).abs() < 1e-3, "{m}");
            assert!((r_var(&c, p).unwrap() / (a / (a - 1.0)) - 1.0).abs() < 1e-3, "{m}");
            assert!((r_cte(&c, p).unwrap() / (a / (a - 1.0)) - 1.0).abs() < 1e-3, "{m}");
        }
    }

    #[test]
    fn stop_loss_leading_term() {
        let c = ctx("std_pareto:alpha=2", &[1.0, 1.0]);
        assert!((stop_loss_first_order(&c, 100.0).unwrap() - 0.02).abs() < 1e-15);
        let full = stop_loss(&c, 100.0).unwrap();
        assert!(full > 0.02 && full < 0.025);
        assert!(!retention_is_shallow(&c, 100.0));
        assert!(retention_is_shallow(&c, 2.0));
    }

    #[test]
    fn premium_is_affine_decreasing_and_cte_dominates() {
        for m in ["burr:a=0.8,b=2.5", "pareto:alpha=4,theta=1", "abs_t:v=2", "std_pareto:alpha=2"] {
            let c = ctx(m, &[1.0, 1.0]);
            let p = 0.99;
            for measure in [Measure::Var, Measure::Cte] {
                let f = |t: f64| premium(&c, p, t, measure).unwrap();
                assert!(f(0.06) > f(0.10), "{m}");
                assert!((f(0.5) - 0.5 * (f(0.2) + f(0.8))).abs() < 1e-10 * f(0.5));
            }
            let (pv, pc) = (premium(&c, p, 0.06, Measure::Var).unwrap(), premium(&c, p, 0.06, Measure::Cte).unwrap());
            assert!(pv <= pc, "{m}: {pv} {pc}");
            // τ → 1: the VaR premium is the VaR capital n F^←(p) C_VaR(p)
            let cap = 2.0 * c.model().quantile(p).unwrap() * c_var(&c, p).unwrap();
            assert!((premium(&c, p, 1.0 - 1e-12, Measure::Var).unwrap() / cap - 1.0).abs() < 1e-9);
        }
        let c = ctx("burr:a=0.8,b=2.5", &[1.0, 1.0]);
        assert!(premium(&c, 0.99, 1.0, Measure::Var).is_err());
    }

    #[test]
    fn premium_factorises_through_ratio() {
        let c = ctx("abs_t:v=3", &[0.5, 1.0]);
        let p = 0.99;
        let rv = r_var(&c, p).unwrap();
        let rc = r_cte(&c, p).unwrap();
        let kv = |t: f64| premium(&c, p, t, Measure::Var).unwrap() / (t + (1.0 - t) * rv);
        let kc = |t: f64| premium(&c, p, t, Measure::Cte).unwrap() / (t + (1.0 - t) * rc);
        assert!((kv(0.06) / kv(0.6) - 1.0).abs() < 1e-12);
        assert!((kc(0.06) / kc(0.6) - 1.0).abs() < 1e-12);
        let var_cap = 2.0 * c.model().quantile(p).unwrap() * c_var(&c, p).unwrap();
        assert!((kv(0.1) / var_cap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hall_path_signs_and_consistency() {
        // ρ > −α*, k2 < 0: positive
        let c = ctx("frechet:alpha=2", &[1.0, 1.0]);
        assert!(hall_eps_p(&c, 0.99).unwrap() < 0.0 || c.model().rho() <= -1.0);
        let c = ctx("burr:a=2,b=0.5", &[1.0, 1.0]);
        assert!(hall_eps_p(&c, 0.99).unwrap() > 0.0);
        // α = 1 branch: positive
        let c = ctx("pareto:alpha=1,theta=1", &[1.0, 1.0]);
        assert!(hall_eps_p(&c, 0.99).unwrap() > 0.0);
        // relative difference to the exact-quantile path shrinks as p → 1
        for m in ["burr:a=0.8,b=2.5", "pareto:alpha=4,theta=1", "frechet:alpha=2", "hall_weiss:alpha=2,rho=-1", "abs_t:v=3"] {
            let c = ctx(m, &[1.0, 1.0]);
            let rel = |p: f64| (hall_eps_p(&c, p).unwrap() / eps_p(&c, p).unwrap() - 1.0).abs();
            assert!(rel(1.0 - 1e-8) < rel(1.0 - 1e-4), "{m}");
        }
        let c = ctx("std_pareto:alpha=2", &[1.0, 1.0]);
        assert!(hall_eps_p(&c, 0.99).is_err());
    }
}
