//! Engine behind the `relay-outage` binary: parameter plumbing in dB,
//! sweep/validation/slope drivers, and the CSV serialization contract.
//!
//! Everything here is deterministic given the inputs; the binary is a thin
//! argument-parsing shell.

use relay_outage::analytic::{
    coefficient_report, outage_exact_with_tol, outage_high_snr, outage_lower_variable,
    AnalyticError, QuadTol,
};
use relay_outage::model::{AsymptoticQuery, ConfigError, Scheme, SystemConfig, Topology};
use relay_outage::montecarlo::{chunk_seed, diversity_slope, estimate_outage, SamplerKind};
use serde::Deserialize;
use std::fmt::Write as _;
use thiserror::Error;

pub const DEFAULT_GAMMA_TH_DB: f64 = 0.0;
pub const DEFAULT_RHO_I_DB: f64 = 0.0;
pub const DEFAULT_MC_SAMPLES: u64 = 10_000_000;
pub const DEFAULT_MU: f64 = 1.0;
pub const DEFAULT_K_SIGMA: f64 = 4.0;

/// Environment variable holding a numeric absolute quadrature tolerance that
/// overrides the built-in default; the relative tolerance scales with it
/// (rel = 100 * abs).
pub const QUAD_TOL_ENV: &str = "RELAY_OUTAGE_QUAD_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("computation failed: {0}")]
    Numeric(#[from] AnalyticError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Quadrature tolerances, honoring the environment override.
pub fn quad_tol_from_env() -> QuadTol {
    match std::env::var(QUAD_TOL_ENV) {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(abs) if abs > 0.0 && abs.is_finite() => QuadTol {
                abs_tol: abs,
                rel_tol: abs * 100.0,
            },
            _ => QuadTol::default(),
        },
        Err(_) => QuadTol::default(),
    }
}

/// Outage evaluation methods selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodSel {
    Exact,
    Lower,
    Asymptotic,
    Mc,
}

impl MethodSel {
    pub fn label(self) -> &'static str {
        match self {
            MethodSel::Exact => "exact",
            MethodSel::Lower => "lower",
            MethodSel::Asymptotic => "asymptotic",
            MethodSel::Mc => "mc",
        }
    }
}

/// One SNR sweep: a configuration template walked along a rho1 grid with
/// rho2 coupled as mu * rho1.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub topology: Topology,
    pub scheme: Scheme,
    pub ici_at_relay: bool,
    pub n_antennas: u32,
    pub rho1_grid_db: Vec<f64>,
    pub mu: f64,
    pub rho_i_db: f64,
    pub gamma_th_db: f64,
    pub methods: Vec<MethodSel>,
    pub mc_samples: u64,
    pub seed: u64,
}

impl SweepSpec {
    fn validate(&self) -> Result<(), CliError> {
        if self.rho1_grid_db.is_empty() {
            return Err(CliError::Usage("sweep grid is empty".into()));
        }
        if self.rho1_grid_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Usage(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        if self.methods.is_empty() {
            return Err(CliError::Usage("no methods selected".into()));
        }
        if !self.mu.is_finite() || self.mu <= 0.0 {
            return Err(CliError::Usage("mu must be positive".into()));
        }
        Ok(())
    }

    fn config_at(&self, rho1_db: f64) -> Result<SystemConfig, ConfigError> {
        let rho1 = db_to_linear(rho1_db);
        SystemConfig::new(
            self.topology,
            self.scheme,
            self.ici_at_relay,
            self.n_antennas,
            rho1,
            self.mu * rho1,
            db_to_linear(self.rho_i_db),
            db_to_linear(self.gamma_th_db),
        )
    }
}

pub const CSV_HEADER: &str = "topology,scheme,ici,n_antennas,rho1_db,rho2_db,rhoi_db,\
gamma_th_db,method,probability,numeric_error_or_ci,n_samples,seed";

fn fmt_db(db: f64) -> String {
    if db == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{db}")
    }
}

#[allow(clippy::too_many_arguments)]
fn csv_row(
    cfg: &SystemConfig,
    rho1_db: f64,
    rho2_db: f64,
    rho_i_db: f64,
    gamma_th_db: f64,
    method: &str,
    probability: f64,
    err_or_ci: f64,
    n_samples: Option<u64>,
    seed: Option<u64>,
) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{:.15e},{:.6e},{},{}",
        cfg.topology.label(),
        cfg.scheme.label(),
        cfg.ici_at_relay,
        cfg.n_antennas,
        fmt_db(rho1_db),
        fmt_db(rho2_db),
        fmt_db(rho_i_db),
        fmt_db(gamma_th_db),
        method,
        probability,
        err_or_ci,
        n_samples.map_or(String::new(), |n| n.to_string()),
        seed.map_or(String::new(), |s| s.to_string()),
    )
}

/// Evaluate one method at one configuration; returns (probability,
/// numeric_error_or_ci, n_samples, seed) for the CSV columns.
fn eval_method(
    cfg: &SystemConfig,
    method: MethodSel,
    mu: f64,
    mc_samples: u64,
    seed: u64,
    tol: QuadTol,
) -> Result<(f64, f64, Option<u64>, Option<u64>), CliError> {
    match method {
        MethodSel::Exact => {
            let v = outage_exact_with_tol(cfg, tol)?;
            Ok((v.probability, v.numeric_error, None, None))
        }
        MethodSel::Lower => {
            let v = outage_lower_variable(cfg)?;
            Ok((v.probability, v.numeric_error, None, None))
        }
        MethodSel::Asymptotic => {
            let q = AsymptoticQuery::new(mu, cfg.rho1)?;
            let v = outage_high_snr(cfg, &q)?;
            Ok((v.probability, v.numeric_error, None, None))
        }
        MethodSel::Mc => {
            let est = estimate_outage(cfg, mc_samples, seed, SamplerKind::Vector);
            Ok((
                est.p_hat,
                est.ci_half_width_95,
                Some(est.n_samples),
                Some(est.seed),
            ))
        }
    }
}

/// Run a sweep and render the full CSV (header plus one row per grid point
/// and method, in grid order).
pub fn run_sweep_csv(spec: &SweepSpec, tol: QuadTol) -> Result<String, CliError> {
    spec.validate()?;
    let mut out = String::with_capacity(4096);
    out.push_str(CSV_HEADER);
    out.push('\n');
    let rho2_db_offset = linear_to_db(spec.mu);
    for (i, &rho1_db) in spec.rho1_grid_db.iter().enumerate() {
        let cfg = spec.config_at(rho1_db)?;
        let row_seed = chunk_seed(spec.seed ^ 0x5eed_0000_0000_0000, i as u64);
        for &m in &spec.methods {
            let (p, e, ns, sd) = eval_method(&cfg, m, spec.mu, spec.mc_samples, row_seed, tol)?;
            let _ = writeln!(
                out,
                "{}",
                csv_row(
                    &cfg,
                    rho1_db,
                    rho1_db + rho2_db_offset,
                    spec.rho_i_db,
                    spec.gamma_th_db,
                    m.label(),
                    p,
                    e,
                    ns,
                    sd,
                )
            );
        }
    }
    Ok(out)
}

pub fn write_sweep_csv(spec: &SweepSpec, path: &std::path::Path, tol: QuadTol) -> Result<(), CliError> {
    let csv = run_sweep_csv(spec, tol)?;
    std::fs::write(path, csv)?;
    Ok(())
}

/// Point evaluation, rendered as an aligned table.
#[allow(clippy::too_many_arguments)]
pub fn run_eval(
    cfg: &SystemConfig,
    methods: &[MethodSel],
    mu: f64,
    mc_samples: u64,
    seed: u64,
    tol: QuadTol,
) -> Result<String, CliError> {
    if methods.is_empty() {
        return Err(CliError::Usage(
            "select at least one of --exact/--lower/--asymptotic/--mc".into(),
        ));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:?} {:?} ici={} N={} rho1={:.4} rho2={:.4} rho_i={:.4} gamma_th={:.4} (linear)",
        cfg.topology,
        cfg.scheme,
        cfg.ici_at_relay,
        cfg.n_antennas,
        cfg.rho1,
        cfg.rho2,
        cfg.rho_i,
        cfg.gamma_th
    );
    let _ = writeln!(out, "{:<12} {:<24} error/ci", "method", "probability");
    for &m in methods {
        let (p, e, _, _) = eval_method(cfg, m, mu, mc_samples, seed, tol)?;
        let _ = writeln!(out, "{:<12} {:<24.15e} {:.4e}", m.label(), p, e);
    }
    Ok(out)
}

/// Analytic-vs-simulation validation over a configuration grid.
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
    pub k_sigma: f64,
    pub pass: bool,
}

pub struct ValidationRow {
    pub cfg: SystemConfig,
    pub analytic: f64,
    pub p_hat: f64,
    pub deviation_sigma: f64,
    pub exact_collapse: bool,
}

impl ValidationReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<6} {:<9} {:<6} {:<3} {:<9} {:<13} {:<13} {:<10} note",
            "topo", "scheme", "ici", "N", "rho1", "analytic", "mc", "dev_sigma"
        );
        let mut rows: Vec<&ValidationRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| b.deviation_sigma.total_cmp(&a.deviation_sigma));
        for r in rows {
            let _ = writeln!(
                out,
                "{:<6} {:<9} {:<6} {:<3} {:<9.3} {:<13.6e} {:<13.6e} {:<10.2} {}",
                r.cfg.topology.label(),
                r.cfg.scheme.label(),
                r.cfg.ici_at_relay,
                r.cfg.n_antennas,
                r.cfg.rho1,
                r.analytic,
                r.p_hat,
                r.deviation_sigma,
                if r.exact_collapse { "n1-collapse" } else { "" }
            );
        }
        let _ = writeln!(
            out,
            "{}: all |analytic - mc| within {} sigma",
            if self.pass { "PASS" } else { "FAIL" },
            self.k_sigma
        );
        out
    }
}

/// Every (topology, scheme[, ici]) combination.
pub fn scheme_combos() -> Vec<(Topology, Scheme, bool)> {
    vec![
        (Topology::N11, Scheme::FixedGain, false),
        (Topology::N11, Scheme::VariableGain, false),
        (Topology::OneOneN, Scheme::FixedGain, false),
        (Topology::OneOneN, Scheme::VariableGain, false),
        (Topology::OneNOne, Scheme::FixedGain, false),
        (Topology::OneNOne, Scheme::VariableGain, false),
        (Topology::OneNOne, Scheme::VariableGain, true),
    ]
}

#[allow(clippy::too_many_arguments)] // mirrors the flag surface one-for-one
pub fn run_validate(
    n_list: &[u32],
    rho_db_list: &[f64],
    rho_i_db: f64,
    gamma_th_db: f64,
    k_sigma: f64,
    mc_samples: u64,
    seed: u64,
    topology_filter: Option<Topology>,
    tol: QuadTol,
) -> Result<ValidationReport, CliError> {
    let mut rows = Vec::new();
    let mut pass = true;
    let mut idx = 0u64;
    for (t, s, ici) in scheme_combos() {
        if topology_filter.is_some_and(|f| f != t) {
            continue;
        }
        for &n in n_list {
            for &rho_db in rho_db_list {
                let rho = db_to_linear(rho_db);
                let cfg = SystemConfig::new(
                    t,
                    s,
                    ici,
                    n,
                    rho,
                    rho,
                    db_to_linear(rho_i_db),
                    db_to_linear(gamma_th_db),
                )?;
                let analytic = outage_exact_with_tol(&cfg, tol)?.probability;
                let est = estimate_outage(&cfg, mc_samples, chunk_seed(seed, idx), SamplerKind::Vector);
                idx += 1;
                // Binomial sigma under the analytic rate, so deep-tail
                // points with zero observed outages still validate.
                let sigma = (analytic * (1.0 - analytic) / mc_samples as f64)
                    .sqrt()
                    .max(f64::MIN_POSITIVE);
                let dev = (analytic - est.p_hat).abs() / sigma;
                if dev > k_sigma {
                    pass = false;
                }
                rows.push(ValidationRow {
                    cfg,
                    analytic,
                    p_hat: est.p_hat,
                    deviation_sigma: dev,
                    exact_collapse: n == 1,
                });
            }
        }
    }
    Ok(ValidationReport {
        rows,
        k_sigma,
        pass,
    })
}

/// Diversity-slope report per requested antenna count, with the high-SNR
/// crossover coefficients alongside (they exist for N >= 2).
pub struct SlopeReport {
    pub rows: Vec<(u32, f64)>,
    pub coefficients: Option<(f64, f64, f64)>,
}

#[allow(clippy::too_many_arguments)]
pub fn run_slope(
    topology: Topology,
    scheme: Scheme,
    ici: bool,
    n_list: &[u32],
    grid_db: &[f64],
    mu: f64,
    rho_i_db: f64,
    gamma_th_db: f64,
    tol: QuadTol,
) -> Result<SlopeReport, CliError> {
    if grid_db.len() < 2 {
        return Err(CliError::Usage("slope needs at least two grid points".into()));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        let mut pts = Vec::new();
        for &db in grid_db {
            let rho = db_to_linear(db);
            let cfg = SystemConfig::new(
                topology,
                scheme,
                ici,
                n,
                rho,
                mu * rho,
                db_to_linear(rho_i_db),
                db_to_linear(gamma_th_db),
            )?;
            let p = outage_exact_with_tol(&cfg, tol)?.probability;
            pts.push((rho, p));
        }
        let slope = diversity_slope(&pts)
            .map_err(|e| CliError::Usage(format!("slope estimation failed: {e}")))?;
        rows.push((n, slope));
    }
    let coefficients = n_list
        .iter()
        .find(|&&n| n >= 2)
        .map(|&n| coefficient_report(n, mu, db_to_linear(rho_i_db)))
        .transpose()?;
    Ok(SlopeReport { rows, coefficients })
}

/// Flat key/value configuration file mirroring the command-line flags.
/// Values given on the command line take precedence.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub topology: Option<String>,
    pub scheme: Option<String>,
    pub ici: Option<bool>,
    pub n: Option<u32>,
    pub rho1_db: Option<f64>,
    pub rho2_db: Option<f64>,
    pub rhoi_db: Option<f64>,
    pub gamma_th_db: Option<f64>,
    pub mu: Option<f64>,
    pub mc_samples: Option<u64>,
    pub seed: Option<u64>,
}

pub fn load_file_config(path: &std::path::Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config file: {e}")))
}

pub fn parse_topology(s: &str) -> Result<Topology, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "n11" => Ok(Topology::N11),
        "11n" => Ok(Topology::OneOneN),
        "1n1" => Ok(Topology::OneNOne),
        other => Err(CliError::Usage(format!(
            "unknown topology '{other}' (expected n11, 11n, or 1n1)"
        ))),
    }
}

pub fn parse_scheme(s: &str) -> Result<Scheme, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "fixed" => Ok(Scheme::FixedGain),
        "variable" => Ok(Scheme::VariableGain),
        other => Err(CliError::Usage(format!(
            "unknown scheme '{other}' (expected fixed or variable)"
        ))),
    }
}

/// Parse "a,b,c" or "start:stop:step" into a grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = |what: &str| CliError::Usage(format!("bad grid '{s}': {what}"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("start"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("stop"))?;
        let step: f64 = parts[2].parse().map_err(|_| bad("step"))?;
        if !step.is_finite() || step <= 0.0 || stop < start {
            return Err(bad("need stop >= start and step > 0"));
        }
        let mut v = Vec::new();
        let mut x = start;
        while x <= stop + 1e-9 {
            v.push(x);
            x += step;
        }
        Ok(v)
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad(p)))
            .collect()
    }
}
