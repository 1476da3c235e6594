//! Seeded, reproducible outage estimation over the channel samplers.
//!
//! Work is split into fixed-size chunks; chunk i draws from its own ChaCha8
//! stream seeded by a SplitMix64 mix of (master seed, i). The reduction is an
//! integer sum of outage counts, so parallel and serial runs produce the same
//! estimate bit for bit.

use crate::model::{sample_sinr_equivalent, sample_sinr_vector, SystemConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Run count used by the reference experiments.
pub const DEFAULT_MC_SAMPLES: u64 = 10_000_000;

/// Fixed chunk size; part of the reproducibility contract.
pub const CHUNK_SAMPLES: u64 = 1 << 16;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum McError {
    #[error("empirical_cdf requires a sorted, non-empty grid")]
    UnsortedGrid,
    #[error("diversity_slope: {0}")]
    BadSlopePoints(&'static str),
}

/// Which SINR sampler drives the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    /// Faithful vector-level channel model (default).
    Vector,
    /// Statistically equivalent scalar reduction, for cross-checks.
    Equivalent,
}

/// Outage estimate with its sampling pedigree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub n_samples: u64,
    pub n_outage: u64,
    /// 1.96 sqrt(p(1-p)/n); normal approximation, unreliable when
    /// `n_outage` < 10 (see [`McEstimate::ci_is_reliable`]).
    pub ci_half_width_95: f64,
    pub seed: u64,
}

impl McEstimate {
    /// The normal-approximation interval needs a handful of successes to
    /// mean anything.
    pub fn ci_is_reliable(&self) -> bool {
        self.n_outage >= 10 && self.n_samples - self.n_outage >= 10
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Substream seed for chunk `idx` under `master`: a SplitMix64 finalizer over
/// master xor (idx * golden gamma). Public because reproducing an estimate
/// outside this module (or in another language) needs the exact mixing
/// function.
pub fn chunk_seed(master: u64, idx: u64) -> u64 {
    splitmix64(master ^ idx.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn chunk_bounds(n_samples: u64) -> impl Iterator<Item = (u64, u64)> {
    let n_chunks = n_samples.div_ceil(CHUNK_SAMPLES);
    (0..n_chunks).map(move |i| {
        let len = CHUNK_SAMPLES.min(n_samples - i * CHUNK_SAMPLES);
        (i, len)
    })
}

/// Estimate Pr(SINR < gamma_th) from `n_samples` independent draws.
///
/// Bitwise reproducible for a given (seed, n_samples) and the fixed chunk
/// size; chunks run in parallel.
pub fn estimate_outage(
    cfg: &SystemConfig,
    n_samples: u64,
    seed: u64,
    sampler: SamplerKind,
) -> McEstimate {
    assert!(n_samples >= 1, "need at least one sample");
    let n_outage: u64 = chunk_bounds(n_samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, i));
            let mut hits = 0u64;
            for _ in 0..len {
                let g = match sampler {
                    SamplerKind::Vector => sample_sinr_vector(cfg, &mut rng),
                    SamplerKind::Equivalent => sample_sinr_equivalent(cfg, &mut rng),
                };
                if g < cfg.gamma_th {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let p_hat = n_outage as f64 / n_samples as f64;
    let var = p_hat * (1.0 - p_hat) / n_samples as f64;
    McEstimate {
        p_hat,
        n_samples,
        n_outage,
        ci_half_width_95: 1.96 * var.max(0.0).sqrt(),
        seed,
    }
}

/// One-pass empirical CDF of `sampler` on the sorted grid `xs`.
pub fn empirical_cdf<F>(
    sampler: F,
    xs: &[f64],
    n_samples: u64,
    seed: u64,
) -> Result<Vec<f64>, McError>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if xs.is_empty() || xs.windows(2).any(|w| w[0] > w[1]) {
        return Err(McError::UnsortedGrid);
    }
    let counts: Vec<u64> = chunk_bounds(n_samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, i));
            let mut counts = vec![0u64; xs.len()];
            for _ in 0..len {
                let v = sampler(&mut rng);
                // Number of grid points >= v; partition_point gives the
                // first index with xs[idx] >= v.
                let idx = xs.partition_point(|&x| x < v);
                if idx < xs.len() {
                    counts[idx] += 1;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; xs.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let mut acc = 0u64;
    Ok(counts
        .iter()
        .map(|&c| {
            acc += c;
            acc as f64 / n_samples as f64
        })
        .collect())
}

/// Negative least-squares slope of log10(outage) against log10(rho1).
pub fn diversity_slope(points: &[(f64, f64)]) -> Result<f64, McError> {
    if points.len() < 2 {
        return Err(McError::BadSlopePoints("need at least two points"));
    }
    for &(r, p) in points {
        if !r.is_finite() || r <= 0.0 {
            return Err(McError::BadSlopePoints("rho1 values must be positive"));
        }
        if !p.is_finite() || p <= 0.0 {
            return Err(McError::BadSlopePoints("outage values must be positive"));
        }
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].0 == points[j].0 {
                return Err(McError::BadSlopePoints("duplicate rho1 values"));
            }
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.log10()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log10()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(-(sxy / sxx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_laws() {
        let pts: Vec<(f64, f64)> = [1e3, 1e4, 1e5].iter().map(|&r| (r, 2.5 / r)).collect();
        assert!((diversity_slope(&pts).unwrap() - 1.0).abs() < 1e-12);
        let pts: Vec<(f64, f64)> = [1e3, 1e4, 1e5].iter().map(|&r| (r, 0.3 / (r * r))).collect();
        assert!((diversity_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn slope_rejects_bad_input() {
        assert!(diversity_slope(&[(1e3, 1e-2)]).is_err());
        assert!(diversity_slope(&[(1e3, 1e-2), (1e3, 1e-3)]).is_err());
        assert!(diversity_slope(&[(1e3, 0.0), (1e4, 1e-3)]).is_err());
    }

    #[test]
    fn cdf_of_constant_sampler() {
        let f = empirical_cdf(|_| 2.5, &[1.0, 2.5, 4.0], 1000, 3).unwrap();
        assert_eq!(f, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn cdf_rejects_unsorted() {
        assert!(empirical_cdf(|_| 0.0, &[2.0, 1.0], 10, 0).is_err());
        assert!(empirical_cdf(|_| 0.0, &[], 10, 0).is_err());
    }
}
