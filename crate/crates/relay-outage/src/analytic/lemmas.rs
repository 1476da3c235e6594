//! Closed-form CDFs of the three auxiliary random variables behind the
//! outage expressions:
//!
//! * ratio:   U = a y1 / (b y2 + 1), y1 ~ Gamma(n1, l1), y2 ~ Exp(l2)
//! * product: U = y1 (y2 - ab) / (y2 + a), y_i ~ Gamma(n_i, l_i)
//! * min:     U = y1 min(1/(y3+1), y2/C) -- CDF asymptote near zero only
//!
//! plus the shared kernel Pr(y1 <= beta (1 + q y3)) used by the ratio CDF,
//! the variable-gain lower bounds, and the stable exact route.

use super::AnalyticError;
use crate::specfun::{bessel_k_int_ln, digamma_int, ln_binomial, ln_factorial, reg_gamma_lower};

/// Parameters of the ratio variable a y1 / (b y2 + 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaRatioParams {
    pub n1: u32,
    pub lambda1: f64,
    pub lambda2: f64,
    pub a: f64,
    pub b: f64,
}

/// Parameters of the product variable y1 (y2 - ab) / (y2 + a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaProductParams {
    pub n1: u32,
    pub n2: u32,
    pub lambda1: f64,
    pub lambda2: f64,
    pub a: f64,
    pub b: f64,
}

/// Parameters of the min variable y1 min(1/(y3+1), y2/c) with
/// y3 ~ Exp(lambda3). Only (n2 = 1, n1 >= 2) and (n1 = n2) have closed
/// asymptotes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaMinParams {
    pub n1: u32,
    pub n2: u32,
    pub lambda3: f64,
    pub c: f64,
}

/// Pr(y1 <= beta (1 + q y3)) for y1 ~ Gamma(n, 1), y3 ~ Exp(1).
///
/// Closed form: 1 - e^{-beta} sum_{m<n} beta^m/m! E_m with
/// E_m = sum_j C(m,j) j! q^j / (1+beta q)^{j+1}. For small arguments the
/// complement cancels, so there the positive tail series
/// sum_{m>=n} beta^m/m! E_m is summed instead; both branches keep full
/// relative precision.
///
/// Rows are evaluated in the scaled form
///   row_m = pre * (beta qq)^m * F_m,  qq = q/(1+beta q),  w = 1/qq,
///   F_m = e^{-w} sum_{i<=m} w^i/i!  in (0, 1],
/// which starts from the dominant end of the row; building the row up from
/// its smallest term instead underflows long before the row itself is
/// negligible.
pub(crate) fn gamma_mix_cdf(n: u32, beta: f64, q: f64) -> f64 {
    debug_assert!(n >= 1 && beta >= 0.0 && q >= 0.0);
    if beta == 0.0 {
        return 0.0;
    }
    if beta > 700.0 {
        return 1.0;
    }
    if q < 1e-12 {
        // Mixing correction is O(n q) relative; below resolution.
        return reg_gamma_lower(n, beta).expect("n >= 1, beta > 0");
    }
    let denom = 1.0 + beta * q;
    let ln_pre = -beta - denom.ln();
    let ln_bq = beta.ln() + q.ln() - denom.ln(); // ln(beta qq) < 0
    let w = denom / q;

    // Incremental tracker for ln F_m; linear while e^{-w} is representable.
    let mut f_lin = if w < 600.0 { Some((-w).exp()) } else { None };
    let mut t_lin = f_lin.unwrap_or(0.0);
    let mut ln_f = -w; // ln F_0
    let mut ln_t = -w;
    let ln_w = w.ln();
    let mut advance = |m: u32| -> f64 {
        // Move the tracker from F_{m-1} to F_m, return ln F_m.
        if m > 0 {
            match f_lin {
                Some(ref mut f) => {
                    t_lin *= w / f64::from(m);
                    *f += t_lin;
                    ln_f = f.ln();
                }
                None => {
                    ln_t += ln_w - f64::from(m).ln();
                    // log-add-exp; ln_f >= ln_t never holds early on when w
                    // is huge, so order explicitly.
                    let (a, b) = if ln_f >= ln_t { (ln_f, ln_t) } else { (ln_t, ln_f) };
                    ln_f = a + (b - a).exp().ln_1p();
                }
            }
        }
        ln_f
    };

    // row_m = pre (beta qq)^m sum_{i<=m} w^i/i! = pre (beta qq)^m e^w F_m.
    let ln_row = |m: u32, ln_f_m: f64| ln_pre + f64::from(m) * ln_bq + w + ln_f_m;

    if beta * (1.0 + 2.0 * q) <= 0.7 * f64::from(n + 1) {
        // Tail series from m = n; terms may first rise (Poisson bulk) and
        // then decay geometrically with ratio -> beta qq < 1.
        for m in 1..n {
            advance(m);
        }
        let mut acc = 0.0;
        let mut prev = f64::INFINITY;
        for m in n..n + 20_000 {
            let term = ln_row(m, advance(m)).exp();
            acc += term;
            if term < prev && term < 1e-17 * acc {
                break;
            }
            prev = term;
        }
        acc
    } else {
        let mut comp = 0.0;
        for m in 0..n {
            comp += ln_row(m, advance(m)).exp();
        }
        (1.0 - comp).clamp(0.0, 1.0)
    }
}

/// CDF of U = a y1/(b y2 + 1) at x >= 0.
pub fn lemma_cdf_ratio(p: &LemmaRatioParams, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    // Scaling folds into beta = x/(a l1) and q = b l2.
    gamma_mix_cdf(p.n1, x / (p.a * p.lambda1), p.b * p.lambda2)
}

/// CDF of U = y1 (y2 - ab)/(y2 + a) at x >= 0.
///
/// The closed form is a finite triple sum over Bessel K kernels; at x = 0
/// it reduces to the point mass Pr(y2 <= ab).
pub fn lemma_cdf_product(p: &LemmaProductParams, x: f64) -> f64 {
    let ab_over_l2 = p.a * p.b / p.lambda2;
    if x <= 0.0 {
        return reg_gamma_lower(p.n2, ab_over_l2).expect("valid shape");
    }
    let z_sq = p.a * (p.b + 1.0) * x / (p.lambda1 * p.lambda2); // K argument / 2, squared
    let ln_z_arg = 0.5 * z_sq.ln();
    let ln_power_base = (p.a * (p.b + 1.0) * p.lambda2 * x / p.lambda1).ln();
    let ln_x_l1 = (x / p.lambda1).ln();
    let ln_a = p.a.ln();
    let ln_ab = if p.b == 0.0 { f64::NEG_INFINITY } else { (p.a * p.b).ln() };

    let ln_front = -x / p.lambda1 - ab_over_l2
        - f64::from(p.n2) * p.lambda2.ln()
        - ln_factorial(p.n2 - 1);

    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for m in 0..p.n1 {
        for j in 0..=m {
            for k in 0..p.n2 + j {
                let pw = p.n2 + j - 1 - k;
                if pw > 0 && p.b == 0.0 {
                    continue; // (ab)^pw vanishes
                }
                let ln_ab_pow = if pw == 0 { 0.0 } else { f64::from(pw) * ln_ab };
                let order = i64::from(k) - i64::from(m) + 1;
                let ln_k = bessel_k_int_ln(order as i32, 2.0 * ln_z_arg.exp())
                    .expect("argument > 0");
                let ln_term = ln_front
                    + f64::from(m) * ln_x_l1
                    - ln_factorial(m)
                    + ln_binomial(m, j)
                    + f64::from(m - j) * ln_a
                    + ln_binomial(p.n2 + j - 1, k)
                    + ln_ab_pow
                    + std::f64::consts::LN_2
                    + 0.5 * (order as f64) * ln_power_base
                    + ln_k;
                let y = ln_term.exp() - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
        }
    }
    (1.0 - sum).clamp(0.0, 1.0)
}

/// Near-zero CDF asymptote of U = y1 min(1/(y3+1), y2/c).
///
/// Supported shapes: n2 = 1 with n1 >= 2 (linear in x), and n1 = n2 = N
/// (the x^N log branch). The expansion ignores the interferer branch of the
/// min, whose same-order contribution dies off only as 1/|ln x|; it
/// underestimates accordingly at moderate x.
pub fn lemma_cdf_min_asym(p: &LemmaMinParams, x: f64) -> Result<f64, AnalyticError> {
    if x.is_nan() || x <= 0.0 {
        return Err(AnalyticError::Domain("lemma_cdf_min_asym requires x > 0"));
    }
    if p.n2 == 1 {
        if p.n1 == 1 {
            return Err(AnalyticError::Domain(
                "the n2 = 1 asymptote divides by n1 - 1; n1 >= 2 required",
            ));
        }
        return Ok(p.c * x / f64::from(p.n1 - 1));
    }
    if p.n1 != p.n2 {
        return Err(AnalyticError::UnsupportedCombination(
            "min-CDF asymptote exists only for n2 = 1 or n1 = n2",
        ));
    }
    Ok(min_cdf_log_branch(p.n1, p.c * x))
}

/// (Cx)^N sum_i (-1)^{N-i} (ln Cx - psi(1) - psi(N-i+1)) /
/// (Gamma(N) Gamma(i+1) Gamma(N-i+1)); shared with the 1-N-1 variable-gain
/// high-SNR approximation.
pub(crate) fn min_cdf_log_branch(n: u32, u: f64) -> f64 {
    let ln_u = u.ln();
    let psi1 = digamma_int(1).expect("n >= 1");
    let mut s = 0.0;
    for i in 0..n {
        let sign = if (n - i).is_multiple_of(2) { 1.0 } else { -1.0 };
        let psi = digamma_int(n - i + 1).expect("n - i + 1 >= 1");
        let denom =
            (ln_factorial(n - 1) + ln_factorial(i) + ln_factorial(n - i)).exp();
        s += sign * (ln_u - psi1 - psi) / denom;
    }
    s * u.powi(n as i32)
}
