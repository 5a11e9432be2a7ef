//! Special functions, series and quadrature.

mod quadrature;
mod roots;
mod series;
pub mod special;

pub use quadrature::{integrate, integrate_log, substitution_exponent, QuadratureSpec, Singularities};
pub(crate) use roots::solve_increasing;
pub use series::{integral_i, kappa_series};
pub use special::{
    beta_fn, gamma, ln_beta, ln_gamma, normal_cdf, normal_pdf, normal_quantile, normal_sf,
    reg_inc_beta, t_cdf, t_quantile,
};
