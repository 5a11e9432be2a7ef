//! The sub-aggregate `S_{n−1}(c) = Σ_{k≥2} c_k X_{n−k+1,n−1}` and its distribution `F_n`.

use serde::{Deserialize, Serialize};

use super::exact::order_statistic_mean;
use super::sampler::{draw_lstat, EmpiricalSummary};
use super::WeightScheme;
use crate::distributions::TailModel;
use crate::error::{domain, Error, Result};
use crate::numerics::{integrate, integrate_log, QuadratureSpec, Singularities};

/// How `F_n` (the law of `S_{n−1}(c)`) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FnMethod {
    /// `S_1(c) = c2·X`; only for `n = 2`.
    ExactN2,
    /// Seeded simulation of `S_{n−1}(c)`.
    MonteCarlo { count: usize, seed: u64 },
    /// `F̄_n(x) ≈ (n−1) c2^α F̄(x)`.
    Asymptotic,
}

/// Which form of `μ_F` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuMode {
    /// `F̄_n(x)` for `α < 1`, `x^{−1}∫_0^x u dF_n(u)` for `α ≥ 1`.
    Definition,
    /// The first-order equivalents: `(n−1)c2^α F̄(x)`, `(n−1)c2 x^{−1}∫_0^x u dF(u)` or `x^{−1} E S_{n−1}(c)`.
    Asymptotic,
}

pub(crate) fn is_integer(a: f64) -> bool {
    (a - a.round()).abs() < 1e-9
}

/// `S_{n−1}(c)` for normalized weights, with the chosen `F_n` facility.
#[derive(Debug, Clone)]
pub struct SubAggregate {
    model: TailModel,
    w: WeightScheme,
    method: FnMethod,
    spec: QuadratureSpec,
    sample: Option<EmpiricalSummary>,
}

impl SubAggregate {
    pub fn new(model: &TailModel, w: &WeightScheme, method: FnMethod, spec: QuadratureSpec) -> Result<Self> {
        let w = w.to_normalized();
        if w.n() < 2 {
            return domain("the sub-aggregate needs n ≥ 2");
        }
        let sample = match method {
            FnMethod::ExactN2 if w.n() != 2 => {
                return Err(Error::Method(format!("exact_n2 requested with n = {}", w.n())))
            }
            FnMethod::MonteCarlo { count, seed } => {
                if count == 0 {
                    return domain("Monte Carlo count must be positive");
                }
                let values = draw_lstat(model, w.tail_weights(), count, seed)?;
                Some(EmpiricalSummary::from_values(values, seed))
            }
            _ => None,
        };
        Ok(Self {
            model: model.clone(),
            w,
            method,
            spec,
            sample,
        })
    }

    pub fn model(&self) -> &TailModel {
        &self.model
    }

    pub fn weights(&self) -> &WeightScheme {
        &self.w
    }

    pub fn method(&self) -> FnMethod {
        self.method
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }

    pub fn sample(&self) -> Option<&EmpiricalSummary> {
        self.sample.as_ref()
    }

    fn c2(&self) -> f64 {
        self.w.c2()
    }

    /// `(n−1) c2^α F̄(x)`, clamped to 1.
    pub fn survival_asymptotic(&self, x: f64) -> f64 {
        ((self.n() - 1) as f64 * self.c2().powf(self.model.alpha()) * self.model.survival(x)).min(1.0)
    }

    /// `F̄_n(x) = P(S_{n−1}(c) > x)`.
    pub fn survival(&self, x: f64) -> f64 {
        match (&self.sample, self.method) {
            (Some(s), _) => s.tail(x).value,
            (None, FnMethod::ExactN2) => self.model.survival(x / self.c2()),
            _ => self.survival_asymptotic(x),
        }
    }

    /// `E S_{n−1}(c)^j`.
    ///
    /// Closed form for `n = 2`; otherwise the sample moment, or for `j = 1` under the
    /// asymptotic method, a sum of order-statistic means.
    pub fn moment(&self, j: usize) -> Result<f64> {
        let alpha = self.model.alpha();
        if j == 0 {
            return Ok(1.0);
        }
        if j as f64 >= alpha {
            return Err(Error::InfiniteMoment { order: j as f64, alpha });
        }
        if self.n() == 2 {
            return Ok(self.c2().powi(j as i32) * self.model.raw_moment(j as f64)?);
        }
        if let Some(s) = &self.sample {
            return Ok(s.mean_of(|v| v.powi(j as i32)).value);
        }
        if j == 1 {
            let m = self.n() - 1;
            let mut total = 0.0;
            for (k, c) in self.w.tail_weights().iter().enumerate() {
                if *c != 0.0 {
                    total += c * order_statistic_mean(&self.model, k + 1, m, &self.spec)?;
                }
            }
            return Ok(total);
        }
        Err(Error::Method(format!(
            "E S_(n-1)^{j} with n = {} needs the monte_carlo method",
            self.n()
        )))
    }

    /// `∫_{(0, y]} u^r dF_n(u)`.
    pub fn partial_moment(&self, r: f64, y: f64) -> Result<f64> {
        if let Some(s) = &self.sample {
            return Ok(s.mean_of(|v| if v > 0.0 && v <= y { v.powf(r) } else { 0.0 }).value);
        }
        if self.n() == 2 {
            let c2 = self.c2();
            return Ok(c2.powf(r) * self.model.truncated_moment(r, y / c2, &self.spec)?);
        }
        Err(Error::Method(format!(
            "partial moments of S_(n-1) with n = {} need the monte_carlo method",
            self.n()
        )))
    }

    /// `μ_F(x)` in the requested mode.
    pub fn mu_f(&self, x: f64, mode: MuMode) -> Result<f64> {
        let alpha = self.model.alpha();
        match mode {
            MuMode::Definition if alpha < 1.0 && !is_integer(alpha) => Ok(self.survival(x)),
            MuMode::Definition => Ok(self.partial_moment(1.0, x)? / x),
            MuMode::Asymptotic if alpha < 1.0 && !is_integer(alpha) => {
                Ok((self.n() - 1) as f64 * self.c2().powf(alpha) * self.model.survival(x))
            }
            MuMode::Asymptotic if is_integer(alpha) && alpha.round() == 1.0 => {
                let tm = self.model.truncated_first_moment(x, &self.spec)?;
                Ok((self.n() - 1) as f64 * self.c2() * tm / x)
            }
            MuMode::Asymptotic => Ok(self.moment(1)? / x),
        }
    }

    /// `V_α(x) = ∫_0^{ĉx} ((1−u/x)^{−α} − 1) dF_n(u)`.
    pub fn v_alpha(&self, x: f64) -> Result<f64> {
        let alpha = self.model.alpha();
        let ct = self.w.c_tilde();
        let top = ct * x;
        let g = |u: f64| (-alpha * (-u / x).ln_1p()).exp_m1();
        if let Some(s) = &self.sample {
            return Ok(s.mean_of(|v| if v >= 0.0 && v <= top { g(v) } else { 0.0 }).value);
        }
        if self.n() != 2 {
            return Err(Error::Method(format!(
                "V_alpha with n = {} needs the monte_carlo method",
                self.n()
            )));
        }
        // Partial integration: α/x ∫_0^{ĉx} F̄_n(u)(1−u/x)^{−(α+1)} du + (1−(1−ĉ)^{−α}) F̄_n(ĉx).
        let c2 = self.c2();
        let sf = |u: f64| self.model.survival(u / c2);
        let kern = |u: f64| alpha / x * (-(alpha + 1.0) * (-u / x).ln_1p()).exp();
        // F̄_n ≡ 1 below c2 times the lower support bound
        let flat = (c2 * self.model.support_min().max(0.0)).min(top);
        let mut integral = g(flat);
        let f = |u: f64| sf(u) * kern(u);
        if flat > 0.0 {
            integral += integrate_log(f, flat, top, &self.spec)?;
        } else {
            let mid = top.min(1.0);
            integral += integrate(f, 0.0, mid, &self.spec, Singularities::NONE)?;
            if top > mid {
                integral += integrate_log(f, mid, top, &self.spec)?;
            }
        }
        Ok(integral - g(top) * sf(top))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(s: &str) -> TailModel {
        s.parse().unwrap()
    }

    fn sub(m: &str, w: &[f64], method: FnMethod) -> SubAggregate {
        SubAggregate::new(
            &model(m),
            &WeightScheme::new(w.to_vec()).unwrap(),
            method,
            QuadratureSpec::tight(),
        )
        .unwrap()
    }

    #[test]
    fn survival_examples() {
        let s = sub("std_pareto:alpha=1", &[1.0, 1.0], FnMethod::ExactN2);
        assert!((s.survival(10.0) - 0.1).abs() < 1e-15);
        let s = sub("std_pareto:alpha=1", &[1.0, 2.0], FnMethod::ExactN2);
        assert!((s.survival(10.0) - 0.2).abs() < 1e-15);
        let s = sub("burr:a=0.8,b=2.5", &[1.0, 1.0, 1.0], FnMethod::Asymptotic);
        assert!((s.survival(7.0) - 2.0 * s.model().survival(7.0)).abs() < 1e-16);
        let err = SubAggregate::new(
            &model("burr:a=1,b=1"),
            &WeightScheme::ones(3).unwrap(),
            FnMethod::ExactN2,
            QuadratureSpec::default(),
        );
        assert!(matches!(err, Err(Error::Method(_))));
    }

    #[test]
    fn weights_are_normalized_first() {
        let s = sub("std_pareto:alpha=2", &[0.5, 1.0], FnMethod::ExactN2);
        // normalized c2 = 2
        assert!((s.survival(10.0) - 0.04).abs() < 1e-15);
    }

    #[test]
    fn moment_examples() {
        let s = sub("std_pareto:alpha=2", &[1.0, 2.0], FnMethod::ExactN2);
        assert!((s.moment(1).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(s.moment(0).unwrap(), 1.0);
        assert!(matches!(s.moment(2), Err(Error::InfiniteMoment { .. })));
        // n = 3, c = (1,1,1): E(X_{2,2} + X_{1,2}) = 2 E X
        let m = "pareto:alpha=4,theta=1";
        let mc = sub(m, &[1.0, 1.0, 1.0], FnMethod::MonteCarlo { count: 1_000_000, seed: 1 });
        let want = 2.0 * model(m).mean().unwrap();
        let est = mc.sample().unwrap().mean();
        assert!(est.contains(want), "{est:?} vs {want}");
        let asy = sub(m, &[1.0, 1.0, 1.0], FnMethod::Asymptotic);
        assert!((asy.moment(1).unwrap() - want).abs() < 1e-9);
        assert!(matches!(asy.moment(2), Err(Error::Method(_))));
        assert!(mc.moment(2).unwrap() > want * want);
    }

    #[test]
    fn first_order_relation_for_the_sub_aggregate() {
        let m = "burr:a=0.8,b=2.5";
        let mc = sub(m, &[1.0, 1.0, 0.5], FnMethod::MonteCarlo { count: 2_000_000, seed: 2 });
        let asy = sub(m, &[1.0, 1.0, 0.5], FnMethod::Asymptotic);
        // at a deep level the ratio to (n−1)c2^α F̄(x) approaches one
        let x = 30.0;
        let ratio = mc.survival(x) / asy.survival(x);
        assert!((ratio - 1.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn mu_f_examples() {
        let s = sub("std_pareto:alpha=1", &[1.0, 1.0], FnMethod::ExactN2);
        for x in [10.0, 1e3] {
            let a = s.mu_f(x, MuMode::Asymptotic).unwrap();
            assert!((a - x.ln() / x).abs() < 1e-12);
        }
        let s = sub("std_pareto:alpha=0.5", &[1.0, 1.0], FnMethod::ExactN2);
        assert!((s.mu_f(100.0, MuMode::Asymptotic).unwrap() - 0.1).abs() < 1e-15);
        let s = sub("burr:a=0.8,b=2.5", &[1.0, 1.0], FnMethod::ExactN2);
        let m = s.model().mean().unwrap();
        assert!((s.mu_f(50.0, MuMode::Asymptotic).unwrap() - m / 50.0).abs() < 1e-14);
        // definition converges to the asymptotic form
        let d = s.mu_f(1e4, MuMode::Definition).unwrap();
        assert!((d * 1e4 / m - 1.0).abs() < 1e-3);
    }

    #[test]
    fn v_alpha_ratio_limits() {
        let h_half = 2f64.sqrt() - 1.0;
        let s = sub("std_pareto:alpha=0.5", &[1.0, 1.0], FnMethod::ExactN2);
        let r = s.v_alpha(1e4).unwrap() / s.mu_f(1e4, MuMode::Definition).unwrap();
        assert!((r / h_half - 1.0).abs() < 0.05, "{r}");
        let s = sub("std_pareto:alpha=1.5", &[1.0, 1.0], FnMethod::ExactN2);
        let r = s.v_alpha(1e4).unwrap() / s.mu_f(1e4, MuMode::Definition).unwrap();
        assert!((r / 1.5 - 1.0).abs() < 0.05, "{r}");
        // below the support of F_n the integral is empty
        assert_eq!(s.v_alpha(1.5).unwrap(), 0.0);
    }

    #[test]
    fn v_alpha_quadrature_matches_monte_carlo() {
        let m = "burr:a=0.8,b=2.5";
        let exact = sub(m, &[1.0, 1.0], FnMethod::ExactN2).v_alpha(20.0).unwrap();
        let mc = sub(m, &[1.0, 1.0], FnMethod::MonteCarlo { count: 1_000_000, seed: 4 });
        let est = mc.v_alpha(20.0).unwrap();
        assert!((est / exact - 1.0).abs() < 0.01, "{est} vs {exact}");
    }
}
