#![allow(clippy::excessive_precision)] // frozen 19-digit reference values

//! Special-function correctness against independent oracles: the integral
//! representation of K_v evaluated by a locally implemented Simpson rule,
//! high-precision reference values, recurrences, and the gamma-family
//! identities the outage formulas lean on.

use proptest::prelude::*;
use relay_outage::specfun::{
    bessel_k_int, bessel_k_int_ln, bessel_k_small_x_expansion, digamma_int, inc_gamma_lower,
    inc_gamma_upper, ln_factorial, EULER_GAMMA,
};

/// Composite-Simpson oracle for K_v(x) = int_0^T e^{-x cosh t} cosh(v t) dt,
/// deliberately independent of the library's series/recurrence machinery.
fn bessel_k_oracle(v: u32, x: f64) -> f64 {
    // cosh(T) = 745/x keeps the integrand above underflow at the cut.
    let t_max = (745.0 / x).acosh() + 1.0;
    let n = 400_000; // even
    let h = t_max / n as f64;
    let f = |t: f64| (-x * t.cosh()).exp() * (f64::from(v) * t).cosh();
    let mut s = f(0.0) + f(t_max);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn k0_k1_frozen_oracle_values() {
    // Frozen from the integral-representation oracle before the build.
    let k0 = bessel_k_int(0, 1.0).unwrap();
    assert!((k0 - 0.42102443824070834).abs() < 1e-14, "{k0}");
    let k1 = bessel_k_int(1, 1.0).unwrap();
    assert!((k1 - 0.6019072301972346).abs() < 1e-14, "{k1}");
    // And the oracle itself agrees.
    assert!((bessel_k_oracle(0, 1.0) - k0).abs() < 1e-11);
    assert!((bessel_k_oracle(1, 1.0) - k1).abs() < 1e-11);
}

#[test]
fn k2_three_term_recurrence_at_one() {
    let k0 = bessel_k_int(0, 1.0).unwrap();
    let k1 = bessel_k_int(1, 1.0).unwrap();
    let k2 = bessel_k_int(2, 1.0).unwrap();
    let expect = k0 + 2.0 * k1;
    assert!((k2 - expect).abs() <= 1e-13 * expect);
}

#[test]
fn bessel_k_reference_table() {
    // 19-digit reference values spanning both kernel branches, the
    // crossover, high orders, and the underflow edge.
    let table: &[(i32, f64, f64)] = &[
        (0, 1e-8, 18.53661225961077839),
        (0, 1e-4, 9.326271913450274873),
        (0, 0.25, 1.541506751248302816),
        (0, 2.0, 0.1138938727495334357),
        (0, 3.99, 0.01128522791654108965),
        (0, 4.01, 0.01103555232746599018),
        (0, 8.0, 1.464707052228153871e-4),
        (0, 13.5, 4.634841671408217537e-7),
        (0, 16.99, 1.262389927713970046e-8),
        (0, 17.01, 1.236675388334921441e-8),
        (0, 30.0, 2.132477496463056371e-14),
        (0, 100.0, 4.656628229175902019e-45),
        (0, 700.0, 4.669776431685376881e-306),
        (1, 1e-8, 99999999.99999990272),
        (1, 1e-4, 9999.999508686404478),
        (1, 0.25, 3.747025974440711638),
        (1, 2.0, 0.1398658818165224273),
        (1, 5.5, 0.002325569008849005155),
        (1, 12.0, 2.290757464767187816e-6),
        (1, 16.99, 1.299023769242102793e-8),
        (1, 17.01, 1.272521376293704605e-8),
        (1, 50.0, 3.444102226717555613e-23),
        (1, 700.0, 4.673110796707966109e-306),
        (2, 1.0, 1.624838898635177483),
        (3, 0.01, 7999900.001249882046),
        (5, 3.7, 0.256399761390725658),
        (8, 0.3, 9801101694.500673093),
        (12, 1e-4, 8.174960638142049699e58),
        (16, 2.5, 16589638742.03243532),
        (40, 10.0, 5.938224680649349994e17),
        (64, 1.0, 1.821391537887500939e106),
        (128, 50.0, 1.393221122751626409e32),
        (3, 650.0, 2.529944003800093546e-284),
        (10, 700.0, 5.015271800836715018e-306),
    ];
    for &(v, x, expect) in table {
        let got = bessel_k_int(v, x).unwrap();
        let rel = (got - expect).abs() / expect;
        assert!(rel <= 1e-12, "K_{v}({x}): got {got:e}, want {expect:e}, rel {rel:e}");
        // Negative order folds.
        assert_eq!(bessel_k_int(-v, x).unwrap(), got);
    }
}

#[test]
fn bessel_k_ln_variant() {
    let table: &[(i32, f64, f64)] = &[
        (64, 1e-8, 1423.60115638750947),
        (128, 1e-6, 2347.968491573838147),
        (90, 0.5, 437.7254730257202258),
        (0, 800.0, -803.1166706636598955),
        (5, 1200.0, -1203.308938873275649),
    ];
    for &(v, x, expect) in table {
        let got = bessel_k_int_ln(v, x).unwrap();
        assert!(
            (got - expect).abs() <= 1e-11 * expect.abs(),
            "ln K_{v}({x}): got {got}, want {expect}"
        );
    }
    // Underflow policy: far past ln-representability the linear call is 0.
    assert_eq!(bessel_k_int(0, 2000.0).unwrap(), 0.0);
}

#[test]
fn bessel_k_domain_errors() {
    assert!(bessel_k_int(0, 0.0).is_err());
    assert!(bessel_k_int(0, -1.0).is_err());
    assert!(bessel_k_int(0, f64::NAN).is_err());
    assert!(bessel_k_int_ln(3, f64::INFINITY).is_err());
}

#[test]
fn bessel_k_strictly_decreasing_in_x() {
    for v in [0i32, 1, 2, 5, 9] {
        let mut prev = f64::INFINITY;
        let mut x = 0.01;
        while x <= 50.0 {
            let k = bessel_k_int(v, x).unwrap();
            assert!(k < prev, "K_{v} not decreasing at x={x}");
            prev = k;
            x *= 1.17;
        }
    }
}

proptest! {
    #[test]
    fn bessel_recurrence_holds(v in 1u32..12, x in 0.01f64..50.0) {
        let km = bessel_k_int(v as i32 - 1, x).unwrap();
        let k = bessel_k_int(v as i32, x).unwrap();
        let kp = bessel_k_int(v as i32 + 1, x).unwrap();
        let resid = kp - km - (2.0 * f64::from(v) / x) * k;
        prop_assert!(resid.abs() <= 1e-10 * kp.abs());
    }

    #[test]
    fn gamma_complementarity(n in 1u32..=20, x in 0.0f64..50.0) {
        let lo = inc_gamma_lower(n, x).unwrap();
        let hi = inc_gamma_upper(n, x).unwrap();
        let gamma_n = ln_factorial(n - 1).exp();
        prop_assert!((lo + hi - gamma_n).abs() <= 1e-12 * gamma_n);
    }
}

#[test]
fn digamma_values() {
    assert!((digamma_int(1).unwrap() - (-0.5772156649015329)).abs() <= 1e-14);
    assert!((digamma_int(1).unwrap() + EULER_GAMMA).abs() <= 1e-15);
    let psi1 = digamma_int(1).unwrap();
    assert!((digamma_int(2).unwrap() - (psi1 + 1.0)).abs() <= 1e-14);
    let harmonic4 = 1.0 + 0.5 + 1.0 / 3.0 + 0.25;
    assert!((digamma_int(5).unwrap() - (psi1 + harmonic4)).abs() <= 1e-14);
    assert!(digamma_int(0).is_err());
}

#[test]
fn incomplete_gamma_examples() {
    // n = 1: gamma(1, x) = 1 - e^{-x}.
    for &x in &[0.5, 2.0] {
        let lo = inc_gamma_lower(1, x).unwrap();
        assert!((lo - (1.0 - (-x).exp())).abs() < 1e-14);
    }
    for n in [1, 3, 7] {
        assert_eq!(inc_gamma_lower(n, 0.0).unwrap(), 0.0);
    }
    // Gamma(3, 2) = 2! e^{-2} (1 + 2 + 2).
    let hi = inc_gamma_upper(3, 2.0).unwrap();
    let expect = (-2.0f64).exp() * (4.0 + 4.0 + 2.0);
    assert!((hi - expect).abs() <= 1e-14 * expect);
    // 19-digit cross-check.
    assert!((inc_gamma_lower(3, 2.5).unwrap() - 0.91237376823334096).abs() < 1e-14);
    assert!((inc_gamma_upper(3, 2.5).unwrap() - 1.087626231766659).abs() < 1e-14);
    assert!(inc_gamma_lower(2, -0.1).is_err());
    assert!(inc_gamma_upper(0, 1.0).is_err());
}

#[test]
fn lemma_identity_binomial_gamma() {
    // sum_i x^i/Gamma(i+1) sum_{k<=N-i-1} Gamma(N-i-k)/Gamma(k+1) (-x)^k
    // collapses to Gamma(N).
    for n in 2u32..=8 {
        for &x in &[0.1f64, 1.0, 10.0] {
            let mut total = 0.0f64;
            for i in 0..n {
                let mut inner = 0.0f64;
                for k in 0..(n - i) {
                    let coef = (ln_factorial(n - i - k - 1) - ln_factorial(k)).exp();
                    inner += coef * (-x).powi(k as i32);
                }
                total += x.powi(i as i32) / ln_factorial(i).exp() * inner;
            }
            let gamma_n = ln_factorial(n - 1).exp();
            assert!(
                (total - gamma_n).abs() <= 1e-9 * gamma_n,
                "N={n} x={x}: {total} vs {gamma_n}"
            );
        }
    }
}

#[test]
fn small_x_expansion_accuracy_improves_toward_zero() {
    // Evaluate u^{v/2} K_v(2 sqrt u) through the expansion and directly.
    // A single tail term keeps the truncation error measurable, so the
    // error trend with u is a real signal rather than f64 noise.
    for v in [1u32, 2, 3] {
        let err_at = |terms: u32, u: f64| {
            let e = bessel_k_small_x_expansion(v, terms).unwrap();
            let direct = (0.5 * f64::from(v) * u.ln()
                + bessel_k_int_ln(v as i32, 2.0 * u.sqrt()).unwrap())
            .exp();
            ((e.eval(u) - direct) / direct).abs()
        };
        assert!(err_at(1, 1e-4) < err_at(1, 1e-2), "v={v}");
        assert!(err_at(8, 1e-6) < 1e-4, "v={v}: {}", err_at(8, 1e-6));
    }
}

#[test]
fn small_x_expansion_validation() {
    assert!(bessel_k_small_x_expansion(0, 4).is_err());
    assert!(bessel_k_small_x_expansion(2, 0).is_err());
    let e = bessel_k_small_x_expansion(4, 5).unwrap();
    assert_eq!(e.order, 4);
    assert_eq!(e.truncation_order, 5);
    assert!(e.terms.iter().all(|t| t.coefficient.is_finite()));
}
