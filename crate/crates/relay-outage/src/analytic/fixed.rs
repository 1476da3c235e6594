//! Closed-form outage probabilities: the three fixed-gain systems and the
//! 1-N-1 variable-gain system without interferer knowledge (whose relay gain
//! is constant, so its outage also closes in Bessel K kernels).
//!
//! Sums are assembled term-by-term in log space. Every term of the survival
//! sum is positive and bounded by 1, so only intermediate factors (binomials
//! against huge SNR powers) ever need the log domain; the final accumulation
//! is a compensated f64 sum.

use crate::model::SystemConfig;
use crate::specfun::{bessel_k_int_ln, ln_binomial, ln_factorial};

struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    fn new() -> Self {
        KahanSum { sum: 0.0, c: 0.0 }
    }
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// N-1-1 fixed gain: triple finite sum with K_{k-j+1} kernels and the
/// constant C = N rho1 + rho_i + 1.
pub(crate) fn outage_n11_fixed(cfg: &SystemConfig) -> f64 {
    let n = cfg.n_antennas;
    let (r1, r2, ri, gth) = (cfg.rho1, cfg.rho2, cfg.rho_i, cfg.gamma_th);
    let c = cfg.fixed_gain_constant();
    let ln_k_arg = 0.5 * (c * gth / (r1 * r2)).ln(); // ln sqrt(C gth/(r1 r2))
    let ln_gth_r1 = (gth / r1).ln();
    let ln_c_r2 = (c / r2).ln();
    let ln_ri = ri.ln();
    let ln_ratio = r1.ln() - (ri * gth + r1).ln(); // ln(r1/(rI gth + r1))

    let mut acc = KahanSum::new();
    for m in 0..n {
        for j in 0..=m {
            for k in 0..=j {
                if k > 0 && ri == 0.0 {
                    continue;
                }
                let order = i64::from(k) - i64::from(j) + 1;
                let ln_bessel =
                    bessel_k_int_ln(order as i32, 2.0 * ln_k_arg.exp()).expect("arg > 0");
                let ln_term = std::f64::consts::LN_2 - gth / r1
                    + f64::from(m) * ln_gth_r1
                    - ln_factorial(m)
                    + ln_binomial(m, j)
                    + ln_binomial(j, k)
                    + ln_factorial(k)
                    + if k == 0 { 0.0 } else { f64::from(k) * ln_ri }
                    + f64::from(k + 1) * ln_ratio
                    + 0.5 * (order as f64) * ln_gth_r1
                    + 0.5 * (f64::from(j) - f64::from(k) + 1.0) * ln_c_r2
                    + ln_bessel;
                acc.add(ln_term.exp());
            }
        }
    }
    1.0 - acc.sum
}

/// Single-kernel form shared by the 1-1-N and 1-N-1 fixed-gain systems:
/// P = 1 - 2 r1 e^{-gth/r1} / (Gamma(N) (rI gth + r1)) u^{N/2} K_N(2 sqrt u)
/// with u = C gth / (r1 r2).
fn outage_single_kernel(cfg: &SystemConfig) -> f64 {
    let n = cfg.n_antennas;
    let (r1, r2, ri, gth) = (cfg.rho1, cfg.rho2, cfg.rho_i, cfg.gamma_th);
    let u = cfg.fixed_gain_constant() * gth / (r1 * r2);
    let ln_bessel = bessel_k_int_ln(n as i32, 2.0 * u.sqrt()).expect("arg > 0");
    let ln_term = std::f64::consts::LN_2 - gth / r1 - ln_factorial(n - 1)
        + r1.ln()
        - (ri * gth + r1).ln()
        + 0.5 * f64::from(n) * u.ln()
        + ln_bessel;
    1.0 - ln_term.exp()
}

/// 1-1-N fixed gain.
pub(crate) fn outage_11n_fixed(cfg: &SystemConfig) -> f64 {
    outage_single_kernel(cfg)
}

/// 1-N-1 fixed gain (identical shape, different gain constant).
pub(crate) fn outage_1n1_fixed(cfg: &SystemConfig) -> f64 {
    outage_single_kernel(cfg)
}

/// 1-N-1 variable gain without interferer knowledge: triple sum with
/// K_{N+j-i} kernels and the constant N rho1 + rho_i + 1.
pub(crate) fn outage_1n1_variable_no_ici(cfg: &SystemConfig) -> f64 {
    let n = cfg.n_antennas;
    let (r1, r2, ri, gth) = (cfg.rho1, cfg.rho2, cfg.rho_i, cfg.gamma_th);
    let c = cfg.fixed_gain_constant();
    let ln_k_arg = 0.5 * (c * gth / (r1 * r2)).ln();
    let ln_gth_r1 = (gth / r1).ln();
    let ln_c_r2 = (c / r2).ln();
    let ln_ri = ri.ln();
    let ln_denom_ratio = -((gth * ri / r1) + 1.0).ln();

    let mut acc = KahanSum::new();
    for m in 0..n {
        for i in 0..=m {
            for j in 0..=i {
                if j > 0 && ri == 0.0 {
                    continue;
                }
                let order = i64::from(n) + i64::from(j) - i64::from(i);
                let ln_bessel =
                    bessel_k_int_ln(order as i32, 2.0 * ln_k_arg.exp()).expect("arg > 0");
                let ln_term = std::f64::consts::LN_2 - gth / r1 - ln_factorial(n - 1)
                    + f64::from(m) * ln_gth_r1
                    - ln_factorial(m)
                    + ln_binomial(m, i)
                    + ln_binomial(i, j)
                    + if j == 0 { 0.0 } else { f64::from(j) * ln_ri }
                    + ln_factorial(j)
                    + f64::from(j + 1) * ln_denom_ratio
                    + 0.5 * (order as f64) * ln_gth_r1
                    + 0.5 * (f64::from(n) + f64::from(i) - f64::from(j)) * ln_c_r2
                    + ln_bessel;
                acc.add(ln_term.exp());
            }
        }
    }
    1.0 - acc.sum
}
