//! The random-coding trade-off between insertions, deletions, list size and
//! rate, and a Monte-Carlo harness that looks for counterexamples to it.

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{self, ChannelSpec};
use crate::error::{Error, Result};
use crate::subspace::Subspace;

pub type Rational = Ratio<i64>;

/// `τ = t/ℓ`, `ρ = r/ℓ`, list size `L` and rate `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeoffQuery {
    pub tau: Rational,
    pub rho: Rational,
    pub list_size: i64,
    pub rate: Rational,
}

impl TradeoffQuery {
    pub fn new(tau: Rational, rho: Rational, list_size: i64, rate: Rational) -> Result<Self> {
        let zero = Rational::from_integer(0);
        if tau < zero || rho < zero || rate < zero || list_size < 0 {
            return Err(Error::InvalidParams("τ, ρ, L and R must be nonnegative".into()));
        }
        if rate > Rational::from_integer(1) {
            return Err(Error::InvalidParams("rate exceeds 1".into()));
        }
        Ok(TradeoffQuery {
            tau,
            rho,
            list_size,
            rate,
        })
    }
}

/// `τ + (L+1)ρ < L − (L+1)R`. With `sharp`, the deletion weight is `L`
/// instead of `L+1`; that variant is conjectural.
pub fn radius_ok(q: &TradeoffQuery, sharp: bool) -> bool {
    let l = Rational::from_integer(q.list_size);
    let l1 = l + 1;
    let weight = if sharp { l } else { l1 };
    q.tau + weight * q.rho < l - l1 * q.rate
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub q: u32,
    pub n: usize,
    pub ell: usize,
    pub code_size: usize,
    pub insertions: usize,
    pub deletions: usize,
    pub list_size: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub config: McConfig,
    /// `log_q M / (nℓ)`.
    pub rate: f64,
    pub inside_region: bool,
    pub max_list_size: usize,
    /// Trials whose largest list exceeded `L`.
    pub violations: usize,
    /// Largest list per trial, in trial order.
    pub per_trial: Vec<usize>,
}

/// Largest ambient handled, as `q^n`.
pub const MC_MAX_SPACE: f64 = (1u64 << 24) as f64;

/// Samples random codes of `M` distinct `ℓ`-dimensional subspaces and, for
/// every received dimension `d` in `[ℓ−r, ℓ+t]`, received spaces both
/// uniform and produced from each codeword by the channel; records the
/// largest number of codewords within `(t, r)` of one received space.
///
/// Trial `i` uses stream `i` of the seeded generator, so the report does not
/// depend on how trials are scheduled.
pub fn mc_check(cfg: &McConfig) -> Result<McReport> {
    if cfg.ell == 0 || cfg.ell + cfg.insertions > cfg.n || cfg.deletions > cfg.ell || cfg.code_size == 0 {
        return Err(Error::InvalidParams(
            "need 1 <= ℓ, ℓ + t <= n, r <= ℓ and M >= 1".into(),
        ));
    }
    if (cfg.q as f64).powi(cfg.n as i32) > MC_MAX_SPACE {
        return Err(Error::InvalidParams(format!("q^n exceeds {MC_MAX_SPACE}")));
    }
    crate::gf::make_field(cfg.q as u64, 1)?;
    let distinct = gaussian_binomial_at_least(cfg.q, cfg.n, cfg.ell, cfg.code_size);
    if !distinct {
        return Err(Error::InvalidParams("fewer than M subspaces of dimension ℓ exist".into()));
    }
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            one_trial(cfg, &mut rng)
        })
        .collect::<Result<Vec<usize>>>()?;
    let rate = (cfg.code_size as f64).ln() / (cfg.q as f64).ln() / (cfg.n * cfg.ell) as f64;
    let query = TradeoffQuery {
        tau: Rational::new(cfg.insertions as i64, cfg.ell as i64),
        rho: Rational::new(cfg.deletions as i64, cfg.ell as i64),
        list_size: cfg.list_size as i64,
        rate: rational_upper(rate),
    };
    Ok(McReport {
        config: cfg.clone(),
        rate,
        inside_region: radius_ok(&query, false),
        max_list_size: per_trial.iter().copied().max().unwrap_or(0),
        violations: per_trial.iter().filter(|&&x| x > cfg.list_size).count(),
        per_trial,
    })
}

fn one_trial(cfg: &McConfig, rng: &mut ChaCha8Rng) -> Result<usize> {
    let mut code: Vec<Subspace> = Vec::with_capacity(cfg.code_size);
    while code.len() < cfg.code_size {
        let v = Subspace::random(cfg.q, cfg.n, cfg.ell, rng)?;
        if !code.contains(&v) {
            code.push(v);
        }
    }
    let lo = cfg.ell - cfg.deletions;
    let hi = cfg.ell + cfg.insertions;
    let mut best = 0;
    for d in lo..=hi {
        let mut received = vec![Subspace::random(cfg.q, cfg.n, d, rng)?];
        let spec = ChannelSpec::random(cfg.ell.saturating_sub(d), d.saturating_sub(cfg.ell));
        for v in &code {
            received.push(channel::transmit(v, &spec, rng)?.received);
        }
        for t in &received {
            let mut count = 0;
            for v in &code {
                if channel::within(v, t, cfg.insertions, cfg.deletions)? {
                    count += 1;
                }
            }
            best = best.max(count);
        }
    }
    Ok(best)
}

/// Whether `[n choose ℓ]_q >= m`, without overflow.
fn gaussian_binomial_at_least(q: u32, n: usize, ell: usize, m: usize) -> bool {
    let mut value = 1f64;
    for i in 0..ell {
        value *= ((q as f64).powi((n - i) as i32) - 1.0) / ((q as f64).powi((i + 1) as i32) - 1.0);
    }
    value >= m as f64
}

/// A rational no smaller than `x`, at resolution 10^-9.
fn rational_upper(x: f64) -> Rational {
    let scale = 1_000_000_000i64;
    Rational::new((x * scale as f64).ceil() as i64, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn query(tau: Rational, rho: Rational, l: i64, rate: Rational) -> TradeoffQuery {
        TradeoffQuery::new(tau, rho, l, rate).unwrap()
    }

    #[test]
    fn examples() {
        assert!(radius_ok(&query(r(0, 1), r(0, 1), 1, r(2, 5)), false));
        for l in 0..5 {
            assert!(!radius_ok(&query(r(0, 1), r(1, 1), l, r(1, 100)), false));
        }
        // τ = L − (L+1)R exactly
        assert!(!radius_ok(&query(r(1, 2), r(0, 1), 1, r(1, 4)), false));
    }

    #[test]
    fn sharp_flag_is_weaker_on_deletions() {
        let q = query(r(0, 1), r(1, 3), 2, r(1, 10));
        // 1 < 2 - 0.3 with weight 3; 2/3 < 1.7 with weight 2
        assert!(radius_ok(&q, false));
        let q = query(r(1, 2), r(1, 2), 2, r(1, 10));
        assert!(!radius_ok(&q, false));
        assert!(radius_ok(&q, true));
    }

    #[test]
    fn rejects_bad_queries() {
        assert!(TradeoffQuery::new(r(-1, 2), r(0, 1), 1, r(0, 1)).is_err());
        assert!(TradeoffQuery::new(r(0, 1), r(0, 1), 1, r(3, 2)).is_err());
    }

    #[test]
    fn single_codeword_lists_are_at_most_one() {
        let cfg = McConfig {
            q: 2,
            n: 6,
            ell: 2,
            code_size: 1,
            insertions: 1,
            deletions: 1,
            list_size: 1,
            trials: 20,
            seed: 4,
        };
        let rep = mc_check(&cfg).unwrap();
        assert!(rep.max_list_size <= 1);
        assert_eq!(rep.violations, 0);
    }

    #[test]
    fn exact_matches_only_without_errors() {
        let cfg = McConfig {
            q: 2,
            n: 6,
            ell: 2,
            code_size: 6,
            insertions: 0,
            deletions: 0,
            list_size: 1,
            trials: 20,
            seed: 5,
        };
        assert_eq!(mc_check(&cfg).unwrap().max_list_size, 1);
    }

    #[test]
    fn infeasible_configs_rejected() {
        let mut cfg = McConfig {
            q: 2,
            n: 30,
            ell: 2,
            code_size: 2,
            insertions: 0,
            deletions: 0,
            list_size: 1,
            trials: 1,
            seed: 0,
        };
        assert!(mc_check(&cfg).is_err());
        cfg.n = 4;
        cfg.insertions = 3;
        assert!(mc_check(&cfg).is_err());
    }
}
