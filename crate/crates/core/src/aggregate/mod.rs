//! Weights, the law of `S_{n−1}(c)`, seeded simulation and exact two-risk oracles.

mod exact;
mod sampler;
mod sub;
mod weights;

pub use exact::{exact_stop_loss_n2, exact_tail_n2, order_statistic_mean, pareto_exact_eps};
pub use sampler::{sample_lstat, BootstrapCi, CteEstimate, EmpiricalSummary, Interval};
pub(crate) use sub::is_integer;
pub use sub::{FnMethod, MuMode, SubAggregate};
pub use weights::WeightScheme;
