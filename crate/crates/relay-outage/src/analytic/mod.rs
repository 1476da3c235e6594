//! Closed-form and quadrature-backed outage expressions: exact outage per
//! topology and relaying scheme, closed-form lower bounds for the
//! variable-gain designs, high-SNR approximations, and the auxiliary
//! distribution CDFs they are built from.

mod asymptotic;
mod fixed;
mod lemmas;
mod variable;

pub use asymptotic::coefficient_report;
pub use lemmas::{
    lemma_cdf_min_asym, lemma_cdf_product, lemma_cdf_ratio, LemmaMinParams, LemmaProductParams,
    LemmaRatioParams,
};
pub use variable::{interference_integral, IntegralKind, QuadTol};

use crate::model::{AsymptoticQuery, Scheme, SystemConfig, Topology};
use crate::quadrature::QuadratureError;
use crate::specfun::{reg_gamma_lower, SpecFunError};
use lemmas::gamma_mix_cdf;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum AnalyticError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(&'static str),
    #[error("{requirement} is not defined for N = {n}")]
    UnsupportedAntennaCount { n: u32, requirement: &'static str },
    #[error("interference integral {kind:?} does not generate indices k={k}, m={m} at N={n}")]
    IndexOutOfRange {
        kind: IntegralKind,
        k: u32,
        m: u32,
        n: u32,
    },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// How an outage probability was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExactClosedForm,
    ExactQuadrature,
    LowerBound,
    HighSnrApprox,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::ExactClosedForm => "exact_closed_form",
            Method::ExactQuadrature => "exact_quadrature",
            Method::LowerBound => "lower_bound",
            Method::HighSnrApprox => "high_snr_approx",
        }
    }
}

/// A probability plus its provenance and a numerical error estimate
/// (propagated quadrature error; round-off clamp magnitude for the pure
/// closed forms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageValue {
    pub probability: f64,
    pub method: Method,
    pub numeric_error: f64,
}

/// Beyond this antenna count the log-domain sums still evaluate, but the
/// alternating cancellation is no longer tracked to full precision; the
/// value carries an inflated `numeric_error`.
pub const FULL_PRECISION_MAX_N: u32 = 16;

fn finish(mut p: f64, method: Method, mut numeric_error: f64, n: u32) -> OutageValue {
    if p < 0.0 {
        numeric_error = numeric_error.max(-p);
        p = 0.0;
    } else if p > 1.0 {
        numeric_error = numeric_error.max(p - 1.0);
        p = 1.0;
    }
    if n > FULL_PRECISION_MAX_N {
        numeric_error = numeric_error.max(1e-9);
    }
    OutageValue {
        probability: p,
        method,
        numeric_error,
    }
}

/// Survival-route value below which the complementary positive-integrand
/// evaluation takes over.
const DIRECT_ROUTE_THRESHOLD: f64 = 1e-6;

fn exact_variable_quadrature(cfg: &SystemConfig, tol: QuadTol) -> Result<OutageValue, AnalyticError> {
    let (p, err) = variable::outage_variable_theorem(cfg, tol)?;
    if p > DIRECT_ROUTE_THRESHOLD && p > 30.0 * err {
        return Ok(finish(p, Method::ExactQuadrature, err, cfg.n_antennas));
    }
    // 1 - (survival sum) has lost its relative precision; evaluate the same
    // probability through the complementary route.
    let (n1, n2) = variable::variable_shapes(cfg);
    let (p, err) =
        variable::outage_variable_direct(n1, n2, cfg.rho1, cfg.rho2, cfg.rho_i, cfg.gamma_th, tol)?;
    Ok(finish(p, Method::ExactQuadrature, err, cfg.n_antennas))
}

fn check_topology(cfg: &SystemConfig, want: Topology, op: &'static str) -> Result<(), AnalyticError> {
    if cfg.topology != want {
        return Err(AnalyticError::UnsupportedCombination(op));
    }
    Ok(())
}

/// Exact outage of the N-1-1 system (beamformed multi-antenna source).
pub fn outage_exact_n11(cfg: &SystemConfig) -> Result<OutageValue, AnalyticError> {
    outage_exact_n11_with_tol(cfg, QuadTol::default())
}

pub fn outage_exact_n11_with_tol(
    cfg: &SystemConfig,
    tol: QuadTol,
) -> Result<OutageValue, AnalyticError> {
    check_topology(cfg, Topology::N11, "outage_exact_n11 requires the N-1-1 topology")?;
    match cfg.scheme {
        Scheme::FixedGain => Ok(finish(
            fixed::outage_n11_fixed(cfg),
            Method::ExactClosedForm,
            0.0,
            cfg.n_antennas,
        )),
        Scheme::VariableGain => exact_variable_quadrature(cfg, tol),
    }
}

/// Exact outage of the 1-1-N system (MRC at the destination).
pub fn outage_exact_11n(cfg: &SystemConfig) -> Result<OutageValue, AnalyticError> {
    outage_exact_11n_with_tol(cfg, QuadTol::default())
}

pub fn outage_exact_11n_with_tol(
    cfg: &SystemConfig,
    tol: QuadTol,
) -> Result<OutageValue, AnalyticError> {
    check_topology(cfg, Topology::OneOneN, "outage_exact_11n requires the 1-1-N topology")?;
    match cfg.scheme {
        Scheme::FixedGain => Ok(finish(
            fixed::outage_11n_fixed(cfg),
            Method::ExactClosedForm,
            0.0,
            cfg.n_antennas,
        )),
        Scheme::VariableGain => exact_variable_quadrature(cfg, tol),
    }
}

/// Exact outage of the 1-N-1 system (multi-antenna relay); the scheme and
/// the interferer-knowledge flag select among the fixed-gain kernel form,
/// the closed triple sum, and the quadrature form.
pub fn outage_exact_1n1(cfg: &SystemConfig) -> Result<OutageValue, AnalyticError> {
    outage_exact_1n1_with_tol(cfg, QuadTol::default())
}

pub fn outage_exact_1n1_with_tol(
    cfg: &SystemConfig,
    tol: QuadTol,
) -> Result<OutageValue, AnalyticError> {
    check_topology(cfg, Topology::OneNOne, "outage_exact_1n1 requires the 1-N-1 topology")?;
    match (cfg.scheme, cfg.ici_at_relay) {
        (Scheme::FixedGain, _) => Ok(finish(
            fixed::outage_1n1_fixed(cfg),
            Method::ExactClosedForm,
            0.0,
            cfg.n_antennas,
        )),
        (Scheme::VariableGain, false) => Ok(finish(
            fixed::outage_1n1_variable_no_ici(cfg),
            Method::ExactClosedForm,
            0.0,
            cfg.n_antennas,
        )),
        (Scheme::VariableGain, true) => exact_variable_quadrature(cfg, tol),
    }
}

/// Exact outage for any configuration.
pub fn outage_exact(cfg: &SystemConfig) -> Result<OutageValue, AnalyticError> {
    outage_exact_with_tol(cfg, QuadTol::default())
}

pub fn outage_exact_with_tol(
    cfg: &SystemConfig,
    tol: QuadTol,
) -> Result<OutageValue, AnalyticError> {
    match cfg.topology {
        Topology::N11 => outage_exact_n11_with_tol(cfg, tol),
        Topology::OneOneN => outage_exact_11n_with_tol(cfg, tol),
        Topology::OneNOne => outage_exact_1n1_with_tol(cfg, tol),
    }
}

/// Closed-form lower bound on the variable-gain outage, from bounding the
/// end-to-end SINR by the weaker of the two hops:
///
///   P_low = 1 - Pr(hop1 SINR >= gth) Pr(hop2 SNR >= gth)
///         = g + p - g p,
///
/// assembled from the small sides so the bound keeps relative precision at
/// high SNR. The 1-N-1 bound exists only for the interferer-aware design.
pub fn outage_lower_variable(cfg: &SystemConfig) -> Result<OutageValue, AnalyticError> {
    if cfg.scheme != Scheme::VariableGain {
        return Err(AnalyticError::UnsupportedCombination(
            "the lower bound applies to variable-gain relaying",
        ));
    }
    if cfg.topology == Topology::OneNOne && !cfg.ici_at_relay {
        return Err(AnalyticError::UnsupportedCombination(
            "no 1-N-1 lower bound without interferer knowledge",
        ));
    }
    let (n1, n2) = variable::variable_shapes(cfg);
    let g = gamma_mix_cdf(n1, cfg.gamma_th / cfg.rho1, cfg.rho_i);
    let p = reg_gamma_lower(n2, cfg.gamma_th / cfg.rho2)?;
    Ok(finish(
        g + p - g * p,
        Method::LowerBound,
        0.0,
        cfg.n_antennas,
    ))
}

/// High-SNR approximation at rho1 = q.rho1 with rho2 overridden to
/// mu * rho1. The N-constraints follow the originating expressions; N = 1
/// branches exist for the N-1-1 system only.
pub fn outage_high_snr(
    cfg: &SystemConfig,
    q: &AsymptoticQuery,
) -> Result<OutageValue, AnalyticError> {
    let v = asymptotic::high_snr_value(cfg, q)?;
    Ok(finish(v, Method::HighSnrApprox, 0.0, cfg.n_antennas))
}
