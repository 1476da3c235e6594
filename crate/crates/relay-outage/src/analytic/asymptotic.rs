//! High-SNR outage approximations under the coupling rho2 = mu * rho1.
//!
//! Fixed-gain systems and the N-1-1/1-1-N variable-gain systems flatten to
//! slope one; the 1-N-1 variable-gain designs reach slope N. Several
//! expressions exist only for N >= 2; the N = 1 log-bearing branches are
//! supplied where the analysis gives them.

use super::lemmas::min_cdf_log_branch;
use super::AnalyticError;
use crate::model::{AsymptoticQuery, Scheme, SystemConfig, Topology};
use crate::specfun::{ln_factorial, EULER_GAMMA};

fn require_n_ge_2(n: u32, what: &'static str) -> Result<(), AnalyticError> {
    if n < 2 {
        Err(AnalyticError::UnsupportedAntennaCount { n, requirement: what })
    } else {
        Ok(())
    }
}

/// The raw approximation value (not yet clamped to [0, 1]).
pub(crate) fn high_snr_value(cfg: &SystemConfig, q: &AsymptoticQuery) -> Result<f64, AnalyticError> {
    let n = cfg.n_antennas;
    let nf = f64::from(n);
    let (mu, r1) = (q.mu, q.rho1);
    let (ri, gth) = (cfg.rho_i, cfg.gamma_th);
    let x = gth / r1;

    let v = match (cfg.topology, cfg.scheme, cfg.ici_at_relay) {
        (Topology::N11, Scheme::FixedGain, _) => {
            if n == 1 {
                // psi(1) + psi(2) = 1 - 2 gamma
                let psi_sum = 1.0 - 2.0 * EULER_GAMMA;
                (((mu * r1 / gth).ln() + psi_sum) / mu + ri + 1.0) * x
            } else {
                nf / (mu * (nf - 1.0)) * x
            }
        }
        (Topology::N11, Scheme::VariableGain, _) => {
            if n == 1 {
                (1.0 / mu + ri + 1.0) * x
            } else {
                x / mu
            }
        }
        (Topology::OneOneN, Scheme::FixedGain, _) => {
            require_n_ge_2(n, "1-1-N fixed-gain approximation")?;
            (ri + 1.0 + 1.0 / ((nf - 1.0) * mu)) * x
        }
        (Topology::OneOneN, Scheme::VariableGain, _) => {
            require_n_ge_2(n, "1-1-N variable-gain approximation")?;
            (1.0 + ri) * x
        }
        (Topology::OneNOne, Scheme::FixedGain, _) => {
            require_n_ge_2(n, "1-N-1 fixed-gain approximation")?;
            (1.0 + ri + nf / (mu * (nf - 1.0))) * x
        }
        (Topology::OneNOne, Scheme::VariableGain, false) => {
            // Slope-N log branch; converges to the exact value only as
            // 1/ln(rho1), so expect a sizeable gap at finite SNR.
            min_cdf_log_branch(n, nf * gth / (mu * r1))
        }
        (Topology::OneNOne, Scheme::VariableGain, true) => {
            require_n_ge_2(n, "1-N-1 variable-gain (interferer-aware) approximation")?;
            // rho_i^N e^{1/rho_i} Gamma(N+1, 1/rho_i) expanded as the
            // finite sum N! sum_k rho_i^{N-k}/k!; exact for integer N and
            // free of the e^{1/rho_i} overflow at small rho_i.
            let mut moment = 0.0;
            for k in 0..=n {
                let pw = if n == k { 0.0 } else { f64::from(n - k) * ri.ln() };
                if ri == 0.0 && k < n {
                    continue;
                }
                moment += (ln_factorial(n) - ln_factorial(k) + pw).exp();
            }
            (moment + mu.powi(-(n as i32))) / ln_factorial(n).exp() * x.powi(n as i32)
        }
    };
    Ok(v)
}

/// The N = 1 fixed-gain branch above hardcodes psi(1) + psi(2).
#[cfg(test)]
pub(crate) fn psi_one_plus_psi_two() -> f64 {
    use crate::specfun::digamma_int;
    digamma_int(1).unwrap() + digamma_int(2).unwrap()
}

/// Crossover coefficients of the slope-one systems at high SNR:
/// (a_n11, a_11n, a_1n1) with outage ~ a * gth / rho1.
pub fn coefficient_report(n: u32, mu: f64, rho_i: f64) -> Result<(f64, f64, f64), AnalyticError> {
    if n < 2 {
        return Err(AnalyticError::UnsupportedAntennaCount {
            n,
            requirement: "coefficient comparison",
        });
    }
    let nf = f64::from(n);
    let a_n11 = nf / (mu * (nf - 1.0));
    let a_11n = rho_i + 1.0 + 1.0 / (mu * (nf - 1.0));
    let a_1n1 = 1.0 + rho_i + nf / (mu * (nf - 1.0));
    Ok((a_n11, a_11n, a_1n1))
}
