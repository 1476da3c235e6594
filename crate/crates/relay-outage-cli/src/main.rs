//! Command-line front end: outage evaluation, SNR sweeps, analytic-vs-MC
//! validation, and diversity-slope estimation for dual-hop multi-antenna
//! AF relay links under co-channel interference.
//!
//! All user-facing powers are in dB; `--rhoi-db -inf` switches the
//! interferer off. Exit codes: 0 success / validation pass, 1 numeric or
//! validation failure, 2 usage error.

use clap::{Args, Parser, Subcommand};
use relay_outage::model::{Scheme, SystemConfig, Topology};
use relay_outage_cli::{
    db_to_linear, load_file_config, parse_grid, parse_scheme, parse_topology, quad_tol_from_env,
    run_eval, run_slope, run_validate, write_sweep_csv, CliError, MethodSel, SweepSpec,
    DEFAULT_GAMMA_TH_DB, DEFAULT_K_SIGMA, DEFAULT_MC_SAMPLES, DEFAULT_MU, DEFAULT_RHO_I_DB,
    QUAD_TOL_ENV,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "relay-outage",
    about = "Outage probability of dual-hop multi-antenna AF relaying with co-channel interference",
    long_about = None,
    after_help = format!(
        "Set {QUAD_TOL_ENV} to a positive number to override the default absolute \
quadrature tolerance (1e-10); the relative tolerance scales as 100x the absolute one."
    )
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonParams {
    /// Antenna placement: n11, 11n, or 1n1.
    #[arg(long)]
    topology: Option<String>,
    /// Relaying scheme: fixed or variable.
    #[arg(long)]
    scheme: Option<String>,
    /// Relay knows the instantaneous interferer channel (1n1 variable only).
    #[arg(long)]
    ici: bool,
    /// Antenna count at the array terminal.
    #[arg(long)]
    n: Option<u32>,
    /// Interference-to-noise ratio in dB (-inf turns interference off).
    #[arg(long, allow_hyphen_values = true)]
    rhoi_db: Option<f64>,
    /// Outage SINR threshold in dB.
    #[arg(long, allow_hyphen_values = true)]
    gamma_th_db: Option<f64>,
    /// Optional flat key/value (TOML) configuration file; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the outage probability at a single operating point.
    Eval {
        #[command(flatten)]
        common: CommonParams,
        /// First-hop average SNR in dB.
        #[arg(long, allow_hyphen_values = true)]
        rho1_db: Option<f64>,
        /// Second-hop average SNR in dB.
        #[arg(long, allow_hyphen_values = true)]
        rho2_db: Option<f64>,
        /// Exact outage (closed form or quadrature).
        #[arg(long)]
        exact: bool,
        /// Closed-form lower bound (variable gain).
        #[arg(long)]
        lower: bool,
        /// High-SNR approximation.
        #[arg(long)]
        asymptotic: bool,
        /// Monte Carlo estimate over the vector channel model.
        #[arg(long)]
        mc: bool,
        /// Power coupling used by --asymptotic; defaults to rho2/rho1.
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        mc_samples: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Sweep rho1 (with rho2 = mu * rho1) and write one CSV row per grid
    /// point and method.
    Sweep {
        #[command(flatten)]
        common: CommonParams,
        /// Grid in dB: "start:stop:step" or "a,b,c".
        #[arg(long)]
        grid_db: String,
        #[arg(long)]
        mu: Option<f64>,
        /// Comma-separated subset of exact,lower,asymptotic,mc.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<MethodSel>,
        #[arg(long)]
        mc_samples: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        output: PathBuf,
    },
    /// Compare every exact formula against Monte Carlo across a grid;
    /// exits 0 only if all points agree within k sigma.
    Validate {
        /// Antenna counts to cover.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u32, 2, 4])]
        n_list: Vec<u32>,
        /// rho1 = rho2 grid in dB.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 10.0, 20.0])]
        rho_db_list: Vec<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = DEFAULT_RHO_I_DB)]
        rhoi_db: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = DEFAULT_GAMMA_TH_DB)]
        gamma_th_db: f64,
        /// Agreement threshold in binomial standard deviations.
        #[arg(long, default_value_t = DEFAULT_K_SIGMA)]
        k_sigma: f64,
        #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
        mc_samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Restrict to one topology (n11, 11n, 1n1).
        #[arg(long)]
        topology: Option<String>,
    },
    /// Diversity order from the log-log slope of the exact outage curve.
    Slope {
        #[command(flatten)]
        common: CommonParams,
        /// Antenna counts to report.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2u32])]
        n_list: Vec<u32>,
        /// High-SNR grid in dB.
        #[arg(long, default_value = "30,40,50")]
        grid_db: String,
        #[arg(long, default_value_t = DEFAULT_MU)]
        mu: f64,
    },
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let tol = quad_tol_from_env();
    match cli.command {
        Command::Eval {
            common,
            rho1_db,
            rho2_db,
            exact,
            lower,
            asymptotic,
            mc,
            mu,
            mc_samples,
            seed,
        } => {
            let file = common
                .config
                .as_deref()
                .map(load_file_config)
                .transpose()?
                .unwrap_or_default();
            let topology = resolve_topology(&common, &file)?;
            let scheme = resolve_scheme(&common, &file)?;
            let n = common.n.or(file.n).ok_or_else(|| miss("--n"))?;
            let rho1_db = rho1_db.or(file.rho1_db).ok_or_else(|| miss("--rho1-db"))?;
            let rho2_db = rho2_db.or(file.rho2_db).ok_or_else(|| miss("--rho2-db"))?;
            let rhoi_db = common.rhoi_db.or(file.rhoi_db).unwrap_or(DEFAULT_RHO_I_DB);
            let gth_db = common
                .gamma_th_db
                .or(file.gamma_th_db)
                .unwrap_or(DEFAULT_GAMMA_TH_DB);
            let cfg = SystemConfig::new(
                topology,
                scheme,
                common.ici || file.ici.unwrap_or(false),
                n,
                db_to_linear(rho1_db),
                db_to_linear(rho2_db),
                db_to_linear(rhoi_db),
                db_to_linear(gth_db),
            )?;
            let mut methods = Vec::new();
            if exact {
                methods.push(MethodSel::Exact);
            }
            if lower {
                methods.push(MethodSel::Lower);
            }
            if asymptotic {
                methods.push(MethodSel::Asymptotic);
            }
            if mc {
                methods.push(MethodSel::Mc);
            }
            let mu = mu
                .or(file.mu)
                .unwrap_or_else(|| db_to_linear(rho2_db) / db_to_linear(rho1_db));
            let table = run_eval(
                &cfg,
                &methods,
                mu,
                mc_samples.or(file.mc_samples).unwrap_or(DEFAULT_MC_SAMPLES),
                seed,
                tol,
            )?;
            print!("{table}");
            Ok(())
        }
        Command::Sweep {
            common,
            grid_db,
            mu,
            methods,
            mc_samples,
            seed,
            output,
        } => {
            let file = common
                .config
                .as_deref()
                .map(load_file_config)
                .transpose()?
                .unwrap_or_default();
            let spec = SweepSpec {
                topology: resolve_topology(&common, &file)?,
                scheme: resolve_scheme(&common, &file)?,
                ici_at_relay: common.ici || file.ici.unwrap_or(false),
                n_antennas: common.n.or(file.n).ok_or_else(|| miss("--n"))?,
                rho1_grid_db: parse_grid(&grid_db)?,
                mu: mu.or(file.mu).unwrap_or(DEFAULT_MU),
                rho_i_db: common.rhoi_db.or(file.rhoi_db).unwrap_or(DEFAULT_RHO_I_DB),
                gamma_th_db: common
                    .gamma_th_db
                    .or(file.gamma_th_db)
                    .unwrap_or(DEFAULT_GAMMA_TH_DB),
                methods,
                mc_samples: mc_samples.or(file.mc_samples).unwrap_or(DEFAULT_MC_SAMPLES),
                seed,
            };
            write_sweep_csv(&spec, &output, tol)?;
            eprintln!(
                "wrote {} rows to {}",
                spec.rho1_grid_db.len() * spec.methods.len(),
                output.display()
            );
            Ok(())
        }
        Command::Validate {
            n_list,
            rho_db_list,
            rhoi_db,
            gamma_th_db,
            k_sigma,
            mc_samples,
            seed,
            topology,
        } => {
            let filter = topology.as_deref().map(parse_topology).transpose()?;
            let report = run_validate(
                &n_list,
                &rho_db_list,
                rhoi_db,
                gamma_th_db,
                k_sigma,
                mc_samples,
                seed,
                filter,
                tol,
            )?;
            print!("{}", report.render());
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Numeric(
                    relay_outage::analytic::AnalyticError::Domain(
                        "validation exceeded the sigma threshold",
                    ),
                ))
            }
        }
        Command::Slope {
            common,
            n_list,
            grid_db,
            mu,
        } => {
            let file = common
                .config
                .as_deref()
                .map(load_file_config)
                .transpose()?
                .unwrap_or_default();
            let topology = resolve_topology(&common, &file)?;
            let scheme = resolve_scheme(&common, &file)?;
            let report = run_slope(
                topology,
                scheme,
                common.ici || file.ici.unwrap_or(false),
                &n_list,
                &parse_grid(&grid_db)?,
                mu,
                common.rhoi_db.or(file.rhoi_db).unwrap_or(DEFAULT_RHO_I_DB),
                common
                    .gamma_th_db
                    .or(file.gamma_th_db)
                    .unwrap_or(DEFAULT_GAMMA_TH_DB),
                tol,
            )?;
            println!(
                "{} {} ici={}",
                topology.label(),
                scheme.label(),
                common.ici
            );
            for (n, slope) in &report.rows {
                println!("N={n}: diversity slope {slope:.4}");
            }
            if let Some((a_n11, a_11n, a_1n1)) = report.coefficients {
                println!(
                    "high-SNR coefficients (slope-one systems): a_n11={a_n11:.6} a_11n={a_11n:.6} a_1n1={a_1n1:.6}"
                );
            }
            Ok(())
        }
    }
}

fn miss(flag: &str) -> CliError {
    CliError::Usage(format!("missing required parameter {flag}"))
}

fn resolve_topology(
    common: &CommonParams,
    file: &relay_outage_cli::FileConfig,
) -> Result<Topology, CliError> {
    common
        .topology
        .as_deref()
        .or(file.topology.as_deref())
        .map(parse_topology)
        .transpose()?
        .ok_or_else(|| miss("--topology"))
}

fn resolve_scheme(
    common: &CommonParams,
    file: &relay_outage_cli::FileConfig,
) -> Result<Scheme, CliError> {
    common
        .scheme
        .as_deref()
        .or(file.scheme.as_deref())
        .map(parse_scheme)
        .transpose()?
        .ok_or_else(|| miss("--scheme"))
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (CliError::Usage(_) | CliError::Config(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
