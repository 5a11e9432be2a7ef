//! Tail asymptotics for weighted order-statistic sums
//! `S_n(c) = c1·X_{n,n} + c2·X_{n-1,n} + … + cn·X_{1,n}` of iid heavy-tailed risks.
//!
//! The crate is layered bottom-up:
//!
//! - [`numerics`]: special functions, series and adaptive quadrature.
//! - [`distributions`]: the heavy-tailed model zoo ([`TailModel`]).
//! - [`aggregate`]: weights, the seeded Monte Carlo sampler, the distribution of
//!   `S_{n-1}(c)` and exact two-risk oracles.
//! - [`expansion`]: first-, second- and higher-order tail approximations.
//! - [`risk`]: VaR/CTE concentrations, TVaR/VaR and TCTE/CTE ratios, stop-loss and
//!   ROC-based reinsurance premiums.
//! - [`report`] and [`cli`]: tabular output and the command-line front end.

pub mod aggregate;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod expansion;
pub mod numerics;
pub mod report;
pub mod risk;
pub mod validation;

pub use aggregate::{EmpiricalSummary, FnMethod, SubAggregate, WeightScheme};
pub use distributions::{Family, TailModel};
pub use error::{Error, Result};
pub use expansion::{ExpansionContext, Order};
pub use numerics::QuadratureSpec;
