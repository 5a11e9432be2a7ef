//! The table-producing commands.

use crate::aggregate::{exact_stop_loss_n2, exact_tail_n2, sample_lstat, EmpiricalSummary};
use crate::error::{Error, Result};
use crate::expansion::{ExpansionContext, Order};
use crate::numerics::QuadratureSpec;
use crate::report::{Cell, RiskReport};
use crate::risk::{self, Measure};

use super::config::Job;

/// Bootstrap replicates behind the empirical concentration intervals.
const BOOTSTRAP_REPS: usize = 200;

fn context(job: &Job) -> Result<ExpansionContext> {
    ExpansionContext::new(&job.model, &job.weights, job.fn_method)
}

fn sample(job: &Job) -> Result<Option<EmpiricalSummary>> {
    job.mc
        .map(|m| sample_lstat(&job.model, &job.weights, m.count, m.seed))
        .transpose()
}

/// `Ok(None)` when the method cannot serve the request, other errors pass through.
fn optional(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Method(_) | Error::UnsupportedOrder { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn diff(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some(a? - b?)
}

fn rel(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    let b = b?;
    Some((a? - b) / b)
}

/// Tail approximations on an `x` grid against the exact `n = 2` oracle and/or Monte Carlo.
pub fn cmd_tail(job: &Job) -> Result<RiskReport> {
    let ctx = context(job)?;
    let mc = sample(job)?;
    let spec = QuadratureSpec::tight();
    let n2 = job.weights.n() == 2;
    let mut r = RiskReport::new([
        "x", "first", "second", "higher", "delta_max", "exact_n2", "mc", "mc_low", "mc_high", "oracle",
        "abs_err_first", "abs_err_second", "abs_err_higher", "rel_err_first", "rel_err_second",
        "rel_err_higher",
    ]);
    for &x in &job.grid {
        let first = Some(ctx.tail_approx(x, Order::First)?);
        let second = Some(ctx.tail_approx(x, Order::Second)?);
        let higher = optional(ctx.tail_approx(x, Order::Higher))?;
        let delta = optional(ctx.delta_max(x))?;
        let exact = if n2 { Some(exact_tail_n2(&job.model, &job.weights, x, &spec)?) } else { None };
        let emp = mc.as_ref().map(|s| s.tail(x));
        let oracle = exact.or(emp.map(|i| i.value));
        r.push(vec![
            x.into(),
            first.into(),
            second.into(),
            higher.into(),
            delta.into(),
            exact.into(),
            emp.map(|i| i.value).into(),
            emp.map(|i| i.low).into(),
            emp.map(|i| i.high).into(),
            oracle.into(),
            diff(first, oracle).map(f64::abs).into(),
            diff(second, oracle).map(f64::abs).into(),
            diff(higher, oracle).map(f64::abs).into(),
            rel(first, oracle).into(),
            rel(second, oracle).into(),
            rel(higher, oracle).into(),
        ]);
    }
    Ok(r)
}

/// `C_VaR` and `C_CTE` on a `p` grid. `C_CTE` columns stay blank when `α ≤ 1`.
pub fn cmd_concentration(job: &Job) -> Result<RiskReport> {
    let ctx = context(job)?;
    let mc = sample(job)?;
    let spec = QuadratureSpec::tight();
    let n = job.weights.n() as f64;
    let finite_mean = job.model.alpha() > 1.0;
    let lead = risk::first_order_concentration(&ctx);
    let mut r = RiskReport::new([
        "p", "first_order", "eps", "c_var", "c_cte", "mc_c_var", "mc_c_var_low", "mc_c_var_high", "mc_c_cte",
        "mc_c_cte_low", "mc_c_cte_high", "cte_low_precision", "err_first_var", "err_c_var", "err_first_cte",
        "err_c_cte",
    ]);
    for &p in &job.grid {
        let c_var = Some(risk::c_var(&ctx, p)?);
        let c_cte = if finite_mean { Some(risk::c_cte(&ctx, p)?) } else { None };
        let var_x = n * job.model.quantile(p)?;
        let cte_x = if finite_mean { Some(n * job.model.cte(p, &spec)?) } else { None };
        let (mut ev, mut ec, mut low_prec) = ([None; 3], [None; 3], None);
        if let Some(s) = &mc {
            let boot = s.bootstrap(p, BOOTSTRAP_REPS, job.mc.map_or(0, |m| m.seed))?;
            ev = [Some(s.var(p) / var_x), Some(boot.var.low / var_x), Some(boot.var.high / var_x)];
            if let Some(cx) = cte_x {
                let est = s.cte(p);
                ec = [Some(est.value / cx), Some(boot.cte.low / cx), Some(boot.cte.high / cx)];
                low_prec = Some(est.low_precision);
            }
        }
        let first_cte = cte_x.map(|_| lead);
        r.push(vec![
            p.into(),
            lead.into(),
            risk::eps_p(&ctx, p)?.into(),
            c_var.into(),
            c_cte.into(),
            ev[0].into(),
            ev[1].into(),
            ev[2].into(),
            ec[0].into(),
            ec[1].into(),
            ec[2].into(),
            low_prec.map_or(Cell::Empty, Cell::Bool),
            diff(Some(lead), ev[0]).into(),
            diff(c_var, ev[0]).into(),
            diff(first_cte, ec[0]).into(),
            diff(c_cte, ec[0]).into(),
        ]);
    }
    Ok(r)
}

/// `R_VaR = TVaR/VaR` and `R_CTE = TCTE/CTE` on a `p` grid; needs `α > 1`.
pub fn cmd_ratios(job: &Job) -> Result<RiskReport> {
    let ctx = context(job)?;
    let mc = sample(job)?;
    let a = job.model.alpha();
    let mut r = RiskReport::new([
        "p", "limit", "r_var", "r_cte", "mc_r_var", "mc_r_cte", "err_limit_var", "err_r_var", "err_limit_cte",
        "err_r_cte",
    ]);
    for &p in &job.grid {
        let limit = Some(a / (a - 1.0));
        let r_var = Some(risk::r_var(&ctx, p)?);
        let r_cte = Some(risk::r_cte(&ctx, p)?);
        let (ev, ec) = match &mc {
            Some(s) => (Some(s.tvar(p) / s.var(p)), Some(s.tcte(p) / s.cte(p).value)),
            None => (None, None),
        };
        r.push(vec![
            p.into(),
            limit.into(),
            r_var.into(),
            r_cte.into(),
            ev.into(),
            ec.into(),
            diff(limit, ev).into(),
            diff(r_var, ev).into(),
            diff(limit, ec).into(),
            diff(r_cte, ec).into(),
        ]);
    }
    Ok(r)
}

/// ROC premiums for every `(p, measure, τ)`; needs `α > 1`.
pub fn cmd_premium(job: &Job) -> Result<RiskReport> {
    let ctx = context(job)?;
    let mc = sample(job)?;
    let a = job.model.alpha();
    if a <= 1.0 {
        return Err(Error::Domain(format!("premiums need alpha > 1, got {a}")));
    }
    let n = job.weights.n() as f64;
    let lead = risk::first_order_concentration(&ctx);
    let mut r = RiskReport::new(["p", "measure", "tau", "first_order", "premium", "mc", "err_first", "err_premium"]);
    for &p in &job.grid {
        let x = job.model.quantile(p)?;
        for measure in [Measure::Var, Measure::Cte] {
            let k0 = match measure {
                Measure::Var => n * x * lead,
                Measure::Cte => n * x * a / (a - 1.0) * lead,
            };
            let emp = mc.as_ref().map(|s| match measure {
                Measure::Var => (s.var(p), s.tvar(p)),
                Measure::Cte => (s.cte(p).value, s.tcte(p)),
            });
            for &tau in &job.tau {
                let first = Some(k0 * (tau + (1.0 - tau) * a / (a - 1.0)));
                let prem = Some(risk::premium(&ctx, p, tau, measure)?);
                let m = emp.map(|(k, t)| tau * k + (1.0 - tau) * t);
                r.push(vec![
                    p.into(),
                    match measure {
                        Measure::Var => "var",
                        Measure::Cte => "cte",
                    }
                    .into(),
                    tau.into(),
                    first.into(),
                    prem.into(),
                    m.into(),
                    rel(first, m).into(),
                    rel(prem, m).into(),
                ]);
            }
        }
    }
    Ok(r)
}

/// Stop-loss premiums on a retention grid; needs `α > 1`.
pub fn cmd_stoploss(job: &Job) -> Result<RiskReport> {
    let ctx = context(job)?;
    let mc = sample(job)?;
    let spec = QuadratureSpec::tight();
    let n2 = job.weights.n() == 2;
    let mut r = RiskReport::new([
        "d", "first_order", "stop_loss", "shallow", "exact_n2", "mc", "mc_low", "mc_high", "oracle",
        "rel_err_first", "rel_err_stop_loss",
    ]);
    for &d in &job.grid {
        let first = Some(risk::stop_loss_first_order(&ctx, d)?);
        let sl = Some(risk::stop_loss(&ctx, d)?);
        let exact = if n2 { Some(exact_stop_loss_n2(&job.model, &job.weights, d, &spec)?) } else { None };
        let emp = mc.as_ref().map(|s| s.stop_loss(d));
        let oracle = exact.or(emp.map(|i| i.value));
        r.push(vec![
            d.into(),
            first.into(),
            sl.into(),
            risk::retention_is_shallow(&ctx, d).into(),
            exact.into(),
            emp.map(|i| i.value).into(),
            emp.map(|i| i.low).into(),
            emp.map(|i| i.high).into(),
            oracle.into(),
            rel(first, oracle).into(),
            rel(sl, oracle).into(),
        ]);
    }
    Ok(r)
}
