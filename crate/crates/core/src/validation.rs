//! Built-in invariant suite run by the `validate` subcommand.

use crate::aggregate::{exact_tail_n2, sample_lstat, FnMethod, WeightScheme};
use crate::distributions::TailModel;
use crate::error::Result;
use crate::expansion::{ExpansionContext, Order};
use crate::numerics::{beta_fn, QuadratureSpec};
use crate::report::{Cell, RiskReport};
use crate::risk;

/// One check with its outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `|actual/expected − 1| ≤ tol`.
    pub fn relative(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        let pass = ((actual - expected) / expected).abs() <= tol;
        Self { name: name.into(), expected, actual, tolerance: tol, pass }
    }

    /// `|actual − expected| ≤ tol`.
    pub fn absolute(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        let pass = (actual - expected).abs() <= tol;
        Self { name: name.into(), expected, actual, tolerance: tol, pass }
    }

    /// `actual ≤ bound`; reported with `expected = bound` and zero tolerance.
    pub fn at_most(name: impl Into<String>, bound: f64, actual: f64) -> Self {
        Self { name: name.into(), expected: bound, actual, tolerance: 0.0, pass: actual <= bound }
    }
}

/// Models with `α > 1` whose second-order terms decay polynomially.
pub const LIMIT_MODELS: [&str; 7] = [
    "std_pareto:alpha=2",
    "pareto:alpha=4,theta=1",
    "burr:a=0.8,b=2.5",
    "frechet:alpha=2",
    "hall_weiss:alpha=2,rho=-1",
    "abs_t:v=2",
    "abs_t:v=3",
];

fn model(s: &str) -> TailModel {
    s.parse().expect("built-in model spec")
}

fn pair(c2: f64) -> WeightScheme {
    WeightScheme::new(vec![1.0, c2]).expect("valid weights")
}

fn kappa_identities(out: &mut Vec<Check>) -> Result<()> {
    let w = pair(1.0);
    for k in 1..10 {
        let a = k as f64 / 10.0;
        let ctx = ExpansionContext::new(&model(&format!("std_pareto:alpha={a}")), &w, FnMethod::ExactN2)?;
        let phi = ctx.phi_alpha().unwrap_or(f64::NAN);
        if k == 5 {
            out.push(Check::absolute("kappa_c(alpha=0.5)", 0.0, ctx.kappa(), 1e-10));
            out.push(Check::absolute("phi_alpha(alpha=0.5)", 0.0, phi, 1e-10));
            continue;
        }
        let want = -(1.0 - 2.0 * a) * beta_fn(1.0 - a, 1.0 - a)?;
        out.push(Check::relative(format!("kappa_c(alpha={a})"), want, ctx.kappa(), 1e-8));
        out.push(Check::relative(format!("phi_alpha(alpha={a})"), want, phi, 1e-8));
    }
    Ok(())
}

fn pareto_benchmark(out: &mut Vec<Check>) -> Result<()> {
    let m = model("std_pareto:alpha=1");
    let w = pair(1.0);
    let spec = QuadratureSpec::tight();
    let ctx = ExpansionContext::new(&m, &w, FnMethod::ExactN2)?;
    for x in [10.0f64, 100.0, 1000.0] {
        let exact = exact_tail_n2(&m, &w, x, &spec)?;
        let closed = 2.0 / x * (1.0 + (x - 1.0).ln() / x);
        out.push(Check::relative(format!("exact_tail_n2 std_pareto(1) x={x}"), closed, exact, 1e-8));
    }
    let x = 1000.0;
    let exact = exact_tail_n2(&m, &w, x, &spec)?;
    let first = ctx.tail_approx(x, Order::First)?;
    let second = ctx.tail_approx(x, Order::Second)?;
    let ratio = (second - exact).abs() / (first - exact).abs();
    out.push(Check::at_most("oracle dominance std_pareto(1) x=1000", 0.1, ratio));
    Ok(())
}

fn determinism(out: &mut Vec<Check>) -> Result<()> {
    let m = model("burr:a=0.8,b=2.5");
    let w = WeightScheme::new(vec![0.5, 1.0])?;
    let a = sample_lstat(&m, &w, 20_000, 7)?;
    let b = sample_lstat(&m, &w, 20_000, 7)?;
    let mismatches = a
        .values()
        .iter()
        .zip(b.values())
        .filter(|(x, y)| x.to_bits() != y.to_bits())
        .count();
    out.push(Check::absolute("determinism (same seed, bitwise mismatches)", 0.0, mismatches as f64, 0.0));
    Ok(())
}

fn limits(out: &mut Vec<Check>) -> Result<()> {
    // exactly representable, so 1 − p carries no rounding error
    let p = 1.0 - 2f64.powi(-40);
    for spec in LIMIT_MODELS {
        let m = model(spec);
        let ctx = ExpansionContext::new(&m, &pair(1.0), FnMethod::Asymptotic)?;
        let lead = risk::first_order_concentration(&ctx);
        let a = m.alpha();
        let ratio = a / (a - 1.0);
        out.push(Check::relative(format!("c_var limit {spec}"), lead, risk::c_var(&ctx, p)?, 1e-3));
        out.push(Check::relative(format!("c_cte limit {spec}"), lead, risk::c_cte(&ctx, p)?, 1e-3));
        out.push(Check::relative(format!("r_var limit {spec}"), ratio, risk::r_var(&ctx, p)?, 1e-3));
        out.push(Check::relative(format!("r_cte limit {spec}"), ratio, risk::r_cte(&ctx, p)?, 1e-3));
    }
    Ok(())
}

/// Runs every check.
pub fn run_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    kappa_identities(&mut out)?;
    pareto_benchmark(&mut out)?;
    determinism(&mut out)?;
    limits(&mut out)?;
    Ok(out)
}

/// Checks as a table with columns `name, expected, actual, tolerance, pass`.
pub fn to_report(checks: &[Check]) -> RiskReport {
    let mut r = RiskReport::new(["name", "expected", "actual", "tolerance", "pass"]);
    for c in checks {
        r.push(vec![
            Cell::Text(c.name.clone()),
            c.expected.into(),
            c.actual.into(),
            c.tolerance.into(),
            c.pass.into(),
        ]);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let checks = run_suite().unwrap();
        assert!(checks.len() > 40);
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
        assert_eq!(to_report(&checks).rows().len(), checks.len());
    }

    #[test]
    fn check_kinds() {
        assert!(Check::relative("r", 2.0, 2.001, 1e-3).pass);
        assert!(!Check::absolute("a", 0.0, 1e-9, 1e-10).pass);
        assert!(!Check::at_most("m", 0.1, 0.2).pass);
    }
}
