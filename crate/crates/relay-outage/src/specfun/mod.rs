//! Scalar special functions backing every closed-form outage expression:
//! integer-order modified Bessel K, integer digamma, the incomplete gamma
//! family, log-gamma/binomials, and the small-argument expansion of
//! u^{v/2} K_v(2 sqrt(u)).
//!
//! Everything here is pure and reentrant.

mod bessel_k;
mod ddouble;

pub use bessel_k::{bessel_k_int, bessel_k_int_ln};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("domain error: {0}")]
    Domain(&'static str),
}

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const MAX_FACTORIAL_N: u32 = 170;

/// psi(n) = -gamma + H_{n-1} for integer n >= 1.
pub fn digamma_int(n: u32) -> Result<f64, SpecFunError> {
    if n < 1 {
        return Err(SpecFunError::Domain("digamma_int requires n >= 1"));
    }
    Ok(harmonic(n - 1) - EULER_GAMMA)
}

/// H_n = sum_{k=1..n} 1/k, compensated so large n stays at full precision.
pub fn harmonic(n: u32) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for k in 1..=n {
        let y = 1.0 / f64::from(k) - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// ln Gamma(n) = ln (n-1)! for integer n >= 1.
pub fn ln_gamma_int(n: u32) -> Result<f64, SpecFunError> {
    if n < 1 {
        return Err(SpecFunError::Domain("ln_gamma_int requires n >= 1"));
    }
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for k in 2..n {
        let y = f64::from(k).ln() - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// ln n!
pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma_int(n + 1).expect("n + 1 >= 1")
}

/// Binomial coefficient as f64, exact through u128 arithmetic (n <= 128).
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num * u128::from(n - i) / u128::from(i + 1);
    }
    num as f64
}

pub fn ln_binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn check_gamma_args(n: u32, x: f64) -> Result<(), SpecFunError> {
    if n < 1 {
        return Err(SpecFunError::Domain("incomplete gamma requires n >= 1"));
    }
    if n > MAX_FACTORIAL_N {
        return Err(SpecFunError::Domain(
            "incomplete gamma: (n-1)! not representable beyond n = 170",
        ));
    }
    if x.is_nan() || x < 0.0 {
        return Err(SpecFunError::Domain("incomplete gamma requires x >= 0"));
    }
    Ok(())
}

/// Regularized lower incomplete gamma P(n, x) = gamma(n,x) / Gamma(n),
/// integer n. Small-x series keeps full relative precision near zero.
pub fn reg_gamma_lower(n: u32, x: f64) -> Result<f64, SpecFunError> {
    check_gamma_args(n, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let nf = f64::from(n);
    if x < nf + 1.0 {
        // P(n,x) = x^n e^{-x}/n! * sum_k x^k / ((n+1)...(n+k)), all positive.
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut denom = nf;
        loop {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        let ln_lead = nf * x.ln() - x - ln_factorial(n);
        Ok((ln_lead + sum.ln()).exp())
    } else {
        Ok(1.0 - reg_gamma_upper_sum(n, x))
    }
}

/// Regularized upper incomplete gamma Q(n, x) for integer n.
pub fn reg_gamma_upper(n: u32, x: f64) -> Result<f64, SpecFunError> {
    check_gamma_args(n, x)?;
    if x < f64::from(n) + 1.0 {
        Ok(1.0 - reg_gamma_lower(n, x)?)
    } else {
        Ok(reg_gamma_upper_sum(n, x))
    }
}

/// Q(n,x) = e^{-x} sum_{k<n} x^k/k!, the finite integer-n form.
fn reg_gamma_upper_sum(n: u32, x: f64) -> f64 {
    if x < 600.0 {
        // Running product e^{-x} x^k / k! stays in (0, 1].
        let mut term = (-x).exp();
        let mut sum = term;
        for k in 1..n {
            term *= x / f64::from(k);
            sum += term;
        }
        sum.min(1.0)
    } else {
        // e^{-x} underflows on its own; assemble each term in log space.
        let ln_x = x.ln();
        let mut sum = 0.0f64;
        for k in 0..n {
            sum += (f64::from(k) * ln_x - x - ln_factorial(k)).exp();
        }
        sum.min(1.0)
    }
}

/// Lower incomplete gamma(n, x), unregularized.
pub fn inc_gamma_lower(n: u32, x: f64) -> Result<f64, SpecFunError> {
    Ok(reg_gamma_lower(n, x)? * (ln_factorial(n - 1)).exp())
}

/// Upper incomplete Gamma(n, x), unregularized.
pub fn inc_gamma_upper(n: u32, x: f64) -> Result<f64, SpecFunError> {
    Ok(reg_gamma_upper(n, x)? * (ln_factorial(n - 1)).exp())
}

/// One term of a truncated expansion in u (optionally carrying ln u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub exponent: u32,
    pub coefficient: f64,
    pub with_log: bool,
}

/// Truncated small-argument expansion of f(u) = u^{v/2} K_v(2 sqrt(u)):
///
///   f(u) = (1/2) sum_{k=0}^{v-1} Gamma(v-k)/Gamma(k+1) (-u)^k
///        - ((-u)^v / 2) sum_{k=0}^{T-1} [ln u - psi(k+1) - psi(v+k+1)]
///                                        u^k / (Gamma(k+1) Gamma(v+k+1)).
///
/// This is the expansion the high-SNR outage approximations are built from;
/// the log-carrying tail is what produces the slope-one plateaus.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    pub order: u32,
    pub terms: Vec<ExpansionTerm>,
    pub truncation_order: u32,
}

impl SeriesExpansion {
    /// Evaluate at u > 0.
    pub fn eval(&self, u: f64) -> f64 {
        let ln_u = u.ln();
        let mut acc = 0.0;
        for t in &self.terms {
            let p = u.powi(t.exponent as i32);
            acc += if t.with_log {
                t.coefficient * p * ln_u
            } else {
                t.coefficient * p
            };
        }
        acc
    }
}

/// Build the expansion above for order v >= 1, keeping `max_terms` tail terms.
pub fn bessel_k_small_x_expansion(v: u32, max_terms: u32) -> Result<SeriesExpansion, SpecFunError> {
    if v < 1 {
        return Err(SpecFunError::Domain(
            "bessel_k_small_x_expansion requires v >= 1",
        ));
    }
    if max_terms < 1 {
        return Err(SpecFunError::Domain(
            "bessel_k_small_x_expansion requires max_terms >= 1",
        ));
    }
    let mut terms = Vec::new();
    for k in 0..v {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(ExpansionTerm {
            exponent: k,
            coefficient: sign * 0.5 * (ln_factorial(v - k - 1) - ln_factorial(k)).exp(),
            with_log: false,
        });
    }
    // (-u)^v = (-1)^v u^v; tail sign is -(-1)^v.
    let tail_sign = if v.is_multiple_of(2) { -1.0 } else { 1.0 };
    for k in 0..max_terms {
        let ln_denom = ln_factorial(k) + ln_factorial(v + k);
        let psi_sum = digamma_int(k + 1)? + digamma_int(v + k + 1)?;
        terms.push(ExpansionTerm {
            exponent: v + k,
            coefficient: tail_sign * 0.5 * (-ln_denom).exp(),
            with_log: true,
        });
        terms.push(ExpansionTerm {
            exponent: v + k,
            coefficient: -tail_sign * 0.5 * psi_sum * (-ln_denom).exp(),
            with_log: false,
        });
    }
    Ok(SeriesExpansion {
        order: v,
        terms,
        truncation_order: max_terms,
    })
}
