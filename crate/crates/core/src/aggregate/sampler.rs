//! Seeded, order-independent Monte Carlo sampling of `S_n(c)` and its empirical digest.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use super::WeightScheme;
use crate::distributions::TailModel;
use crate::error::{domain, Result};

const CHUNK: usize = 1 << 15;
const Z95: f64 = 1.959_963_984_540_054;

/// Uniform on `(0, 1)` from the top 53 bits, never hitting either end.
fn open_unit(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// `count` independent draws of `Σ_k w_k X_{(k)}` with `X_{(1)} ≥ X_{(2)} ≥ …`, unsorted.
///
/// Draw `i` consumes generator words `[2ni, 2n(i+1))` of a ChaCha8 stream keyed by `seed`,
/// so every draw is a pure function of `(seed, i)` whatever the chunking.
pub(crate) fn draw_lstat(model: &TailModel, weights: &[f64], count: usize, seed: u64) -> Result<Vec<f64>> {
    let n = weights.len();
    let mut out = vec![0.0; count];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .try_for_each(|(chunk, slot)| -> Result<()> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos((chunk * CHUNK) as u128 * n as u128 * 2);
            let mut xs = vec![0.0; n];
            for s in slot.iter_mut() {
                for x in xs.iter_mut() {
                    *x = model.upper_quantile_unchecked(open_unit(rng.next_u64()))?;
                }
                xs.sort_unstable_by(|a, b| b.total_cmp(a));
                *s = xs.iter().zip(weights).map(|(x, c)| x * c).sum();
            }
            Ok(())
        })?;
    Ok(out)
}

/// Draws `count` copies of `S_n(c)` with the raw weights of `w`.
pub fn sample_lstat(model: &TailModel, w: &WeightScheme, count: usize, seed: u64) -> Result<EmpiricalSummary> {
    if count == 0 {
        return domain("sample count must be at least 1");
    }
    let mut values = draw_lstat(model, w.raw(), count, seed)?;
    values.par_sort_unstable_by(f64::total_cmp);
    Ok(EmpiricalSummary { seed, values })
}

/// Estimate with a 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub value: f64,
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }
}

/// Empirical CTE with its exceedance count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CteEstimate {
    pub value: f64,
    pub exceedances: usize,
    /// Fewer than 100 exceedances.
    pub low_precision: bool,
}

/// Poisson-bootstrap percentile intervals for VaR and CTE at one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapCi {
    pub var: Interval,
    pub cte: Interval,
}

/// Sorted Monte Carlo sample with the derived estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSummary {
    seed: u64,
    values: Vec<f64>,
}

impl EmpiricalSummary {
    pub(crate) fn from_values(mut values: Vec<f64>, seed: u64) -> Self {
        values.par_sort_unstable_by(f64::total_cmp);
        Self { seed, values }
    }

    pub fn sample_count(&self) -> usize {
        self.values.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The sample, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn count_above(&self, x: f64) -> usize {
        self.values.len() - self.values.partition_point(|v| *v <= x)
    }

    /// Fraction of the sample above `x` with a 95% Wilson interval.
    pub fn tail(&self, x: f64) -> Interval {
        let n = self.values.len() as f64;
        let k = self.count_above(x) as f64;
        let p = k / n;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        Interval {
            value: p,
            low: (center - half).max(0.0),
            high: (center + half).min(1.0),
        }
    }

    /// 1-based index `⌈p·N⌉`, clamped to the sample.
    fn var_rank(&self, p: f64) -> usize {
        let n = self.values.len();
        ((p * n as f64).ceil() as usize).clamp(1, n)
    }

    /// Lower order statistic at rank `⌈p·N⌉`.
    pub fn var(&self, p: f64) -> f64 {
        self.values[self.var_rank(p) - 1]
    }

    /// Mean of the sample values strictly above [`Self::var`].
    pub fn cte(&self, p: f64) -> CteEstimate {
        let v = self.var(p);
        let start = self.values.partition_point(|x| *x <= v);
        let top = &self.values[start..];
        let value = if top.is_empty() {
            v
        } else {
            top.iter().sum::<f64>() / top.len() as f64
        };
        CteEstimate {
            value,
            exceedances: top.len(),
            low_precision: top.len() < 100,
        }
    }

    /// Sample mean of `f(S)` with a normal-approximation 95% interval.
    pub fn mean_of(&self, f: impl Fn(f64) -> f64 + Sync) -> Interval {
        let n = self.values.len() as f64;
        let (s, s2) = self
            .values
            .par_iter()
            .map(|v| {
                let y = f(*v);
                (y, y * y)
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let mean = s / n;
        let var = ((s2 / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
        let half = Z95 * (var / n).sqrt();
        Interval {
            value: mean,
            low: mean - half,
            high: mean + half,
        }
    }

    pub fn mean(&self) -> Interval {
        self.mean_of(|v| v)
    }

    /// `E max(S − d, 0)`.
    pub fn stop_loss(&self, d: f64) -> Interval {
        self.mean_of(|v| (v - d).max(0.0))
    }

    /// `(1−p)^{−1} ∫_p^1 VaR_u du` with the empirical quantile function.
    pub fn tvar(&self, p: f64) -> f64 {
        let n = self.values.len();
        let k0 = self.var_rank(p);
        let nf = n as f64;
        let head = (k0 as f64 / nf - p) * self.values[k0 - 1];
        let rest: f64 = self.values[k0..].iter().sum::<f64>() / nf;
        (head + rest) / (1.0 - p)
    }

    /// `(1−p)^{−1} ∫_p^1 CTE_u du` with the empirical CTE.
    pub fn tcte(&self, p: f64) -> f64 {
        let n = self.values.len();
        let k0 = self.var_rank(p);
        let nf = n as f64;
        // mean of the values above rank j, for j = k0..=n (rank n has none; use the maximum)
        let mut suffix = 0.0;
        let mut cte_at = vec![0.0; n - k0 + 1];
        cte_at[n - k0] = self.values[n - 1];
        for j in (k0..n).rev() {
            suffix += self.values[j];
            cte_at[j - k0] = suffix / (n - j) as f64;
        }
        let head = (k0 as f64 / nf - p) * cte_at[0];
        let rest: f64 = cte_at[1..].iter().sum::<f64>() / nf;
        (head + rest) / (1.0 - p)
    }

    /// Poisson-bootstrap 95% intervals for VaR and CTE at level `p`.
    ///
    /// Only the top of the sample gets individual Poisson(1) weights; the mass below is a
    /// single Poisson draw, which leaves the weighted upper quantiles unchanged in law.
    pub fn bootstrap(&self, p: f64, reps: usize, seed: u64) -> Result<BootstrapCi> {
        if reps < 2 {
            return domain("bootstrap needs at least two replicates");
        }
        let n = self.values.len();
        let expected = ((1.0 - p) * n as f64).ceil() as usize;
        let m = (2 * expected + 2000).min(n);
        let top: Vec<f64> = self.values[n - m..].iter().rev().copied().collect();
        let unit = Poisson::new(1.0).map_err(|e| crate::error::Error::Domain(e.to_string()))?;
        let rest = if n > m {
            Some(Poisson::new((n - m) as f64).map_err(|e| crate::error::Error::Domain(e.to_string()))?)
        } else {
            None
        };
        let reps_out: Vec<(f64, f64)> = (0..reps)
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(r as u64 + 1);
                let weights: Vec<f64> = top.iter().map(|_| unit.sample(&mut rng)).collect();
                let below = rest.map(|d| d.sample(&mut rng)).unwrap_or(0.0);
                let total = weights.iter().sum::<f64>() + below;
                let budget = (1.0 - p) * total;
                // largest k (among points present in the replicate) with weight above ≤ budget
                let mut above = 0.0;
                let mut weighted = 0.0;
                let mut var = top[m - 1];
                let mut cte_num = 0.0;
                let mut cte_den = 0.0;
                for (y, w) in top.iter().zip(&weights) {
                    if *w == 0.0 {
                        continue;
                    }
                    if above > budget {
                        break;
                    }
                    var = *y;
                    cte_num = weighted;
                    cte_den = above;
                    above += w;
                    weighted += w * y;
                }
                let cte = if cte_den > 0.0 { cte_num / cte_den } else { var };
                (var, cte)
            })
            .collect();
        let pct = |mut xs: Vec<f64>| {
            xs.sort_unstable_by(f64::total_cmp);
            let at = |q: f64| xs[((q * (xs.len() - 1) as f64).round() as usize).min(xs.len() - 1)];
            (at(0.025), at(0.975))
        };
        let (vl, vh) = pct(reps_out.iter().map(|r| r.0).collect());
        let (cl, ch) = pct(reps_out.iter().map(|r| r.1).collect());
        Ok(BootstrapCi {
            var: Interval {
                value: self.var(p),
                low: vl,
                high: vh,
            },
            cte: Interval {
                value: self.cte(p).value,
                low: cl,
                high: ch,
            },
        })
    }
}
