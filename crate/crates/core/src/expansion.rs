//! First-, second- and higher-order tail approximations of `P(S_n(c) > x)`.
//!
//! All internal formulas assume `c1 = 1`; [`ExpansionContext::tail_approx`],
//! [`ExpansionContext::delta_max`] and [`ExpansionContext::tail_with_proxy`] take the
//! raw `x` and evaluate at `x/c1` with the normalized weights.

use serde::{Deserialize, Serialize};

use crate::aggregate::{is_integer, FnMethod, MuMode, SubAggregate, WeightScheme};
use crate::distributions::TailModel;
use crate::error::{domain, Error, Result};
use crate::numerics::{integral_i, kappa_series, ln_gamma, QuadratureSpec};

/// Approximation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    /// `n F̄(x)`.
    First,
    /// `n F̄(x)(1 + E(x))`.
    Second,
    /// `n F̄(x)(d_{l+1}(x) + (n−1)/2 κ_c R(x))`.
    Higher,
}

/// Form of the aggregate auxiliary function `A*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AStarMode {
    ExactForm,
    Asymptotic,
}

/// `|κ_c|` below this marks the case where neither expansion yields a next term.
const DEGENERATE_TOL: f64 = 1e-10;
/// Boundary cases `ρ = −α`, `ρ = −1` are recognised by equality within this tolerance.
pub(crate) const RHO_TOL: f64 = 1e-12;

/// Model, weights and `F_n` facility together with the cached expansion constants.
#[derive(Debug, Clone)]
pub struct ExpansionContext {
    model: TailModel,
    w: WeightScheme,
    sub: SubAggregate,
    l: usize,
    integer_case: bool,
    kappa: f64,
    kappa_tilde: f64,
    h_alpha: f64,
    phi_alpha: Option<f64>,
    rho_star: f64,
    moments: std::result::Result<Vec<f64>, Error>,
    spec: QuadratureSpec,
}

impl ExpansionContext {
    pub fn new(model: &TailModel, w: &WeightScheme, fn_method: FnMethod) -> Result<Self> {
        Self::with_spec(model, w, fn_method, QuadratureSpec::tight())
    }

    pub fn with_spec(model: &TailModel, w: &WeightScheme, fn_method: FnMethod, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let wn = w.to_normalized();
        let n = wn.n();
        let alpha = model.alpha();
        let c2 = wn.c2();
        let ct = wn.c_tilde();
        let integer_case = is_integer(alpha);
        let l = if integer_case {
            alpha.round() as usize - 1
        } else {
            alpha.ceil() as usize - 1
        };
        let constants = QuadratureSpec::tight();
        let kappa = if integer_case {
            let a = alpha.round();
            2.0 / (n - 1) as f64 * (ln_gamma(2.0 * a)? - ln_gamma(a)? - ln_gamma(a + 1.0)?).exp()
        } else {
            let p = (1.0 + c2).powf(alpha);
            p * (p + 2.0 * kappa_series(alpha, ct, 1e-16)?)
        };
        // Δ = P(S_n > x) − P(X_{n,n} > x) and P(X_{n,n} > x) = nF̄ − C(n,2)F̄²(1+o(1)) force a plus sign here
        let kappa_tilde = kappa + if integer_case { 0.0 } else { 1.0 };
        let (h_alpha, phi_alpha) = if alpha < 1.0 && !integer_case {
            let i = integral_i(alpha, ct, &constants)?;
            let h = ct.powf(-alpha) * (1.0 - (1.0 - ct).powf(-alpha)) + alpha * i;
            let phi = 2.0 * alpha * c2.powf(alpha) * i - (1.0 + c2).powf(2.0 * alpha);
            (h, Some(phi))
        } else {
            (alpha, None)
        };
        let rho_star = (-1f64).max(-alpha).max(model.rho());
        let sub = SubAggregate::new(model, &wn, fn_method, spec)?;
        let moments = (0..=l).map(|j| sub.moment(j)).collect();
        Ok(Self {
            model: model.clone(),
            w: w.clone(),
            sub,
            l,
            integer_case,
            kappa,
            kappa_tilde,
            h_alpha,
            phi_alpha,
            rho_star,
            moments,
            spec,
        })
    }

    pub fn model(&self) -> &TailModel {
        &self.model
    }

    /// The weights as given (not normalized).
    pub fn weights(&self) -> &WeightScheme {
        &self.w
    }

    pub fn sub(&self) -> &SubAggregate {
        &self.sub
    }

    pub fn fn_method(&self) -> FnMethod {
        self.sub.method()
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }

    fn nf(&self) -> f64 {
        self.w.n() as f64
    }

    fn c2(&self) -> f64 {
        self.w.c2()
    }

    fn alpha(&self) -> f64 {
        self.model.alpha()
    }

    /// `l = ⌈α⌉ − 1`.
    pub fn l(&self) -> usize {
        self.l
    }

    /// `α = l + 1`.
    pub fn is_integer_case(&self) -> bool {
        self.integer_case
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `κ̃_c = κ_c + 1{α ≠ l+1}`, the constant of `Δ(x)`.
    pub fn kappa_tilde(&self) -> f64 {
        self.kappa_tilde
    }

    pub fn h_alpha(&self) -> f64 {
        self.h_alpha
    }

    /// `φ_α`, defined for `α < 1` only.
    pub fn phi_alpha(&self) -> Option<f64> {
        self.phi_alpha
    }

    /// `ρ* = max(−1, −α, ρ)`.
    pub fn rho_star(&self) -> f64 {
        self.rho_star
    }

    /// `α* = min(1, α)`.
    pub fn alpha_star(&self) -> f64 {
        self.alpha().min(1.0)
    }

    /// `α < 1` with a vanishing correction (e.g. `α = 1/2`, `c2 = 1`): the expansions
    /// give no next term and the returned correction is zero.
    pub fn is_degenerate(&self) -> bool {
        self.alpha() < 1.0 && !self.integer_case && self.kappa.abs() <= DEGENERATE_TOL
    }

    /// `E S_{n−1}(c)^j` for `j = 0..=l`.
    pub fn moments(&self) -> Result<&[f64]> {
        self.moments.as_deref().map_err(Clone::clone)
    }

    fn mu_mode(&self) -> MuMode {
        match self.fn_method() {
            FnMethod::Asymptotic => MuMode::Asymptotic,
            _ => MuMode::Definition,
        }
    }

    fn d_with(&self, proxy: &TailModel, x: f64) -> Result<f64> {
        let moments = self.moments()?;
        let derivs = proxy.survival_derivs(self.l, x)?;
        let mut fact = 1.0;
        let mut sum = 0.0;
        for (j, (dj, mj)) in derivs.iter().zip(moments).enumerate() {
            if j > 0 {
                fact *= j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * dj / fact * mj;
        }
        Ok(sum / derivs[0])
    }

    /// `d_{l+1}(x) = Σ_{j≤l} (−1)^j F̄^{(j)}(x)/j! · E S_{n−1}^j / F̄(x)`.
    pub fn d_coeff(&self, x: f64) -> Result<f64> {
        if self.l == 0 {
            return Ok(1.0);
        }
        self.d_with(&self.model, x)
    }

    /// `R(x)`: `F̄(x)`, or `x^{−α}∫_0^{ĉx} u^α dF_n(u)` when `α` is an integer.
    pub fn remainder_scale(&self, x: f64) -> Result<f64> {
        if !self.integer_case {
            return Ok(self.model.survival(x));
        }
        let a = self.alpha().round();
        Ok(x.powf(-a) * self.sub.partial_moment(a, self.w.c_tilde() * x)?)
    }

    /// `E(x) = ((1+c2)^α/2 − 1) F̄_n(ĉx) + h_α μ_F(x)`.
    pub fn eps_x(&self, x: f64) -> Result<f64> {
        let lead = (1.0 + self.c2()).powf(self.alpha()) / 2.0 - 1.0;
        Ok(lead * self.sub.survival(self.w.c_tilde() * x) + self.h_alpha * self.sub.mu_f(x, self.mu_mode())?)
    }

    /// Tail approximation of `P(S_n(c) > x)`. Values above 1 are returned as is.
    pub fn tail_approx(&self, x: f64, order: Order) -> Result<f64> {
        let xp = x / self.w.c1();
        let lead = self.nf() * self.model.survival(xp);
        Ok(match order {
            Order::First => lead,
            Order::Second => lead * (1.0 + self.eps_x(xp)?),
            Order::Higher => {
                let corr = if self.is_degenerate() {
                    0.0
                } else {
                    (self.nf() - 1.0) / 2.0 * self.kappa * self.remainder_scale(xp)?
                };
                lead * (self.d_coeff(xp)? + corr)
            }
        })
    }

    /// `Δ(x) = n F̄(x)(d_{l+1}(x) − 1 + (n−1)/2 κ̃_c R(x))`.
    pub fn delta_max(&self, x: f64) -> Result<f64> {
        let xp = x / self.w.c1();
        let r = (self.nf() - 1.0) / 2.0 * self.kappa_tilde * self.remainder_scale(xp)?;
        Ok(self.nf() * self.model.survival(xp) * (self.d_coeff(xp)? - 1.0 + r))
    }

    /// `n F̄(x) + n H̄(x)(d̃_{l+1}(x) − 1 + (n−1)/2 κ_c R(x))` with `d̃` built from the proxy `H`.
    pub fn tail_with_proxy(&self, proxy: &TailModel, x: f64) -> Result<f64> {
        if (proxy.alpha() - self.alpha()).abs() > 1e-12 {
            return domain(format!(
                "proxy tail index {} differs from the model's {}",
                proxy.alpha(),
                self.alpha()
            ));
        }
        let xp = x / self.w.c1();
        let d = if self.l == 0 { 1.0 } else { self.d_with(proxy, xp)? };
        let corr = if self.is_degenerate() {
            0.0
        } else {
            (self.nf() - 1.0) / 2.0 * self.kappa * self.remainder_scale(xp)?
        };
        let n = self.nf();
        Ok(n * self.model.survival(xp) + n * proxy.survival(xp) * (d - 1.0 + corr))
    }

    /// The aggregate auxiliary function `A*(x)`.
    pub fn aux_a_star(&self, x: f64, mode: AStarMode) -> Result<f64> {
        let alpha = self.alpha();
        let rho = self.model.rho();
        let a = self.model.aux_a_or_zero(x)?;
        match mode {
            AStarMode::ExactForm => {
                let fn_part = alpha * (1.0 - (1.0 + self.c2()).powf(alpha) / 2.0)
                    * self.sub.survival(self.w.c_tilde() * x);
                let mu = self.sub.mu_f(x, self.mu_mode())?;
                Ok(a + fn_part - self.alpha_star() * self.h_alpha * mu)
            }
            AStarMode::Asymptotic => {
                let ind = |edge: f64| if (rho - edge).abs() <= RHO_TOL { a } else { 0.0 };
                if rho > -self.alpha_star() {
                    Ok(a)
                } else if alpha < 1.0 {
                    let phi = self.phi_alpha.unwrap_or(0.0);
                    Ok(-(self.nf() - 1.0) / 2.0 * alpha * phi * self.model.survival(x) + ind(-alpha))
                } else {
                    Ok(-alpha * self.sub.mu_f(x, MuMode::Asymptotic)? + ind(-1.0))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::exact_tail_n2;
    use crate::numerics::beta_fn;

    fn ctx(model: &str, w: &[f64], method: FnMethod) -> ExpansionContext {
        ExpansionContext::new(
            &model.parse().unwrap(),
            &WeightScheme::new(w.to_vec()).unwrap(),
            method,
        )
        .unwrap()
    }

    fn closed(a: f64) -> f64 {
        -(1.0 - 2.0 * a) * beta_fn(1.0 - a, 1.0 - a).unwrap()
    }

    #[test]
    fn constants_examples() {
        let c = ctx("std_pareto:alpha=0.5", &[1.0, 1.0], FnMethod::ExactN2);
        assert!(c.kappa().abs() < 1e-10);
        assert!(c.phi_alpha().unwrap().abs() < 1e-10);
        assert!(c.is_degenerate());
        assert!((c.h_alpha() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        let c = ctx("std_pareto:alpha=1", &[1.0, 1.0], FnMethod::ExactN2);
        assert!(c.is_integer_case());
        assert_eq!(c.l(), 0);
        assert!((c.kappa() - 2.0).abs() < 1e-13);
        assert_eq!(c.kappa_tilde(), c.kappa());
        assert_eq!(c.phi_alpha(), None);
        let c = ctx("burr:a=0.8,b=2.5", &[1.0, 1.0], FnMethod::ExactN2);
        assert_eq!((c.l(), c.is_integer_case(), c.rho_star()), (1, true, -1.0));
        let c = ctx("std_pareto:alpha=2.5", &[1.0, 1.0], FnMethod::ExactN2);
        assert_eq!((c.l(), c.is_integer_case()), (2, false));
        assert_eq!(c.kappa_tilde(), c.kappa() + 1.0);
        assert_eq!(c.rho_star(), -1.0);
        let c = ctx("frechet:alpha=0.6", &[1.0, 1.0], FnMethod::ExactN2);
        assert_eq!(c.rho_star(), -0.6);
        assert_eq!(c.alpha_star(), 0.6);
        let c = ctx("g_and_h:g=2,h=0.5", &[1.0, 1.0], FnMethod::ExactN2);
        assert_eq!(c.rho_star(), 0.0);
    }

    #[test]
    fn kappa_and_phi_identities() {
        for k in 1..10 {
            if k == 5 {
                continue;
            }
            let a = k as f64 / 10.0;
            let c = ctx(&format!("std_pareto:alpha={a}"), &[1.0, 1.0], FnMethod::ExactN2);
            let want = closed(a);
            assert!(((c.kappa() - want) / want).abs() < 1e-8, "kappa at {a}");
            assert!(((c.phi_alpha().unwrap() - want) / want).abs() < 1e-8, "phi at {a}");
            assert!(!c.is_degenerate());
        }
    }

    #[test]
    fn near_integer_alpha_uses_integer_branch() {
        let c = ctx("std_pareto:alpha=2.0000000001", &[1.0, 1.0], FnMethod::ExactN2);
        assert!(c.is_integer_case());
        assert_eq!(c.l(), 1);
    }

    #[test]
    fn d_coeff_examples() {
        let c = ctx("std_pareto:alpha=0.7", &[1.0, 1.0], FnMethod::ExactN2);
        assert_eq!(c.d_coeff(12.0).unwrap(), 1.0);
        let c = ctx("std_pareto:alpha=1.5", &[1.0, 1.0], FnMethod::ExactN2);
        let mut scale = None;
        for x in [1e2, 1e3, 1e4] {
            let d = c.d_coeff(x).unwrap();
            assert!((d - (1.0 + 4.5 / x)).abs() < 1e-13);
            let s = *scale.get_or_insert((d - 1.0) * x);
            assert!((d - 1.0).abs() <= s / x * (1.0 + 1e-9));
        }
        let gh = ctx("g_and_h:g=2,h=0.5", &[1.0, 1.0], FnMethod::ExactN2);
        assert!(matches!(gh.d_coeff(10.0), Err(Error::UnsupportedOrder { .. })));
    }

    #[test]
    fn remainder_scale_examples() {
        let c = ctx("std_pareto:alpha=1", &[1.0, 1.0], FnMethod::ExactN2);
        for x in [4.0, 100.0, 1e5] {
            let want = (x / 2.0f64).ln() / x;
            assert!((c.remainder_scale(x).unwrap() - want).abs() < 1e-12 * want.max(1e-3));
        }
        assert_eq!(c.remainder_scale(1.5).unwrap(), 0.0);
        let c = ctx("burr:a=0.5,b=3", &[1.0, 1.0], FnMethod::ExactN2);
        assert_eq!(c.remainder_scale(3.0).unwrap(), c.model().survival(3.0));
        let c = ctx("std_pareto:alpha=2", &[1.0, 1.0, 1.0], FnMethod::Asymptotic);
        assert!(matches!(c.remainder_scale(30.0), Err(Error::Method(_))));
    }

    #[test]
    fn eps_x_examples() {
        let c = ctx("std_pareto:alpha=1", &[1.0, 1.0], FnMethod::Asymptotic);
        for x in [10.0, 1e3] {
            assert!((c.eps_x(x).unwrap() - x.ln() / x).abs() < 1e-12);
        }
        // α < 1: E(x) ~ (n−1) φ_α F̄(x)/2
        let c = ctx("std_pareto:alpha=0.3", &[1.0, 0.7, 0.2], FnMethod::Asymptotic);
        let x = 1e8;
        let want = 2.0 * c.phi_alpha().unwrap() * c.model().survival(x) / 2.0;
        assert!((c.eps_x(x).unwrap() / want - 1.0).abs() < 1e-3);
    }

    #[test]
    fn tail_approx_examples() {
        for method in [FnMethod::ExactN2, FnMethod::Asymptotic] {
            let c = ctx("std_pareto:alpha=1", &[1.0, 1.0], method);
            let second = c.tail_approx(100.0, Order::Second).unwrap();
            assert!((second - 0.02 * (1.0 + 100f64.ln() / 100.0)).abs() < 1e-13);
            assert!((c.tail_approx(100.0, Order::First).unwrap() - 0.02).abs() < 1e-16);
        }
        let c = ctx("burr:a=0.8,b=2.5", &[0.5, 1.0], FnMethod::ExactN2);
        assert!((c.tail_approx(3.0, Order::First).unwrap() - 2.0 * c.model().survival(6.0)).abs() < 1e-16);
        // α < 1, c2 = 1: n F̄(1 − (n−1)/2 (1−2α) B(1−α,1−α) F̄)
        let c = ctx("frechet:alpha=0.3", &[1.0, 1.0, 0.4], FnMethod::Asymptotic);
        let x = 50.0;
        let sf = c.model().survival(x);
        let want = 3.0 * sf * (1.0 + closed(0.3) * sf);
        assert!((c.tail_approx(x, Order::Higher).unwrap() - want).abs() < 1e-9 * want);
        // degenerate case: zero correction
        let c = ctx("std_pareto:alpha=0.5", &[1.0, 1.0], FnMethod::ExactN2);
        assert_eq!(c.tail_approx(100.0, Order::Higher).unwrap(), 0.2);
    }

    #[test]
    fn delta_max_identities() {
        let c = ctx("burr:a=0.5,b=1.2", &[1.0, 1.0, 1.0], FnMethod::Asymptotic);
        let x = 40.0;
        let sf = c.model().survival(x);
        let d = c.delta_max(x).unwrap();
        assert!((d - 3.0 * c.kappa_tilde() * sf * sf).abs() < 1e-14);
        let higher = c.tail_approx(x, Order::Higher).unwrap();
        assert!((higher - d - (3.0 * sf - 3.0 * sf * sf)).abs() < 1e-14);
        assert!(d > 0.0);
        // Δ(x)/F̄(x)² stays bounded against the oracle (n = 2, α < 1)
        let c = ctx("std_pareto:alpha=0.6", &[1.0, 1.0], FnMethod::ExactN2);
        let w = WeightScheme::ones(2).unwrap();
        for x in [1e2, 1e4, 1e6] {
            let sf = c.model().survival(x);
            let exact = exact_tail_n2(c.model(), &w, x, &QuadratureSpec::tight()).unwrap();
            let delta = exact - (1.0 - (1.0 - sf).powi(2));
            assert!((delta / (sf * sf)).abs() < 10.0);
            assert!((delta / c.delta_max(x).unwrap() - 1.0).abs() < 0.2);
        }
    }

    #[test]
    fn proxy_variant() {
        let c = ctx("burr:a=0.8,b=2.5", &[1.0, 1.0], FnMethod::ExactN2);
        for x in [5.0, 50.0] {
            let a = c.tail_with_proxy(c.model(), x).unwrap();
            assert!((a - c.tail_approx(x, Order::Higher).unwrap()).abs() < 1e-15);
        }
        let proxy: TailModel = "std_pareto:alpha=2".parse().unwrap();
        let w = WeightScheme::ones(2).unwrap();
        for x in [20.0, 100.0, 500.0] {
            let exact = exact_tail_n2(c.model(), &w, x, &QuadratureSpec::tight()).unwrap();
            let p = c.tail_with_proxy(&proxy, x).unwrap();
            let h = c.tail_approx(x, Order::Higher).unwrap();
            let scale = proxy.survival(x) * c.model().survival(x);
            assert!((p - h).abs() < 5.0 * scale, "{x}");
            assert!((p - exact).abs() < 0.02 * (exact - 2.0 * c.model().survival(x)).abs() + 5.0 * scale);
        }
        let bad: TailModel = "std_pareto:alpha=3".parse().unwrap();
        assert!(c.tail_with_proxy(&bad, 10.0).is_err());
        // α < 1: n F̄ + n H̄ (n−1)/2 κ F̄
        let c = ctx("frechet:alpha=0.4", &[1.0, 1.0], FnMethod::ExactN2);
        let proxy: TailModel = "std_pareto:alpha=0.4".parse().unwrap();
        let x = 30.0;
        let (sf, hf) = (c.model().survival(x), proxy.survival(x));
        let want = 2.0 * sf + 2.0 * hf * 0.5 * c.kappa() * sf;
        assert!((c.tail_with_proxy(&proxy, x).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn second_order_beats_first_against_the_oracle() {
        let c = ctx("std_pareto:alpha=1", &[1.0, 1.0], FnMethod::ExactN2);
        let w = WeightScheme::ones(2).unwrap();
        for x in [10.0, 100.0, 1000.0] {
            let exact = exact_tail_n2(c.model(), &w, x, &QuadratureSpec::tight()).unwrap();
            let e1 = (c.tail_approx(x, Order::First).unwrap() - exact).abs();
            let e2 = (c.tail_approx(x, Order::Second).unwrap() - exact).abs();
            assert!(e2 < e1, "{x}");
        }
    }

    #[test]
    fn eps_x_is_regularly_varying() {
        for (m, astar) in [("std_pareto:alpha=1.5", 1.0), ("std_pareto:alpha=0.6", 0.6), ("burr:a=0.8,b=2.5", 1.0)] {
            let c = ctx(m, &[1.0, 1.0], FnMethod::ExactN2);
            let ratio = c.eps_x(2e4).unwrap() / c.eps_x(1e4).unwrap();
            assert!((ratio / 2f64.powf(-astar) - 1.0).abs() < 0.05, "{m}: {ratio}");
        }
    }

    #[test]
    fn a_star_forms() {
        let c = ctx("burr:a=0.8,b=2.5", &[1.0, 1.0], FnMethod::ExactN2);
        let mut prev = f64::INFINITY;
        for k in 0..6 {
            let x = 100.0 * 2f64.powi(k);
            let r = c.aux_a_star(x, AStarMode::ExactForm).unwrap() / c.aux_a_star(x, AStarMode::Asymptotic).unwrap();
            assert!((r - 1.0).abs() < prev);
            prev = (r - 1.0).abs();
        }
        assert!(prev < 0.02);
        // ρ > −α*: A(x)
        let c = ctx("g_and_h:g=2,h=0.5", &[1.0, 1.0], FnMethod::Asymptotic);
        assert_eq!(c.aux_a_star(10.0, AStarMode::Asymptotic).unwrap(), c.model().aux_a(10.0).unwrap());
        // α ≥ 1, ρ < −1: −α μ_F(x)
        let c = ctx("std_pareto:alpha=3", &[1.0, 1.0], FnMethod::Asymptotic);
        let mu = c.sub().mu_f(40.0, MuMode::Asymptotic).unwrap();
        assert_eq!(c.aux_a_star(40.0, AStarMode::Asymptotic).unwrap(), -3.0 * mu);
        // ρ = −1 boundary picks up A
        let c = ctx("pareto:alpha=4,theta=1", &[1.0, 1.0], FnMethod::Asymptotic);
        let mu = c.sub().mu_f(40.0, MuMode::Asymptotic).unwrap();
        let a = c.model().aux_a(40.0).unwrap();
        assert!((c.aux_a_star(40.0, AStarMode::Asymptotic).unwrap() - (-4.0 * mu + a)).abs() < 1e-15);
    }
}
